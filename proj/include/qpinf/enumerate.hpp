#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace qpinf {

// Inverse of the Cantor pairing: i -> (a, k).
inline std::pair<std::size_t, unsigned> cantor_unpair(std::size_t i) {
    std::size_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= i) ++w;
    std::size_t k = i - w * (w + 1) / 2;
    return {w - k, static_cast<unsigned>(k)};
}

// Lazily concatenates finite layers layer(first), layer(first+1), ...
template <class T>
class LayeredEnum {
public:
    using Layer = std::function<std::vector<T>(unsigned)>;

    LayeredEnum(Layer layer, unsigned first) : layer_(std::move(layer)), next_(first) {}

    const T& at(std::size_t i) {
        while (items_.size() <= i) {
            auto more = layer_(next_++);
            items_.insert(items_.end(), more.begin(), more.end());
        }
        return items_[i];
    }

private:
    Layer layer_;
    unsigned next_;
    std::vector<T> items_;
};

// Sequences of total weight w whose last entry is not `blank`; blank weighs 1,
// other entries come from values(v) for weight v >= 2.
template <class T>
std::vector<std::vector<T>> weighted_tails(unsigned w, const std::function<std::vector<T>(unsigned)>& values, const T& blank) {
    std::map<unsigned, std::vector<std::vector<T>>> memo;
    std::function<const std::vector<std::vector<T>>&(unsigned)> go = [&](unsigned rest) -> const std::vector<std::vector<T>>& {
        auto it = memo.find(rest);
        if (it != memo.end()) return it->second;
        std::vector<std::vector<T>> out;
        if (rest == 0) out.push_back({});
        for (unsigned v = 1; v <= rest; ++v) {
            std::vector<T> heads = v == 1 ? std::vector<T>{blank} : values(v);
            if (heads.empty()) continue;
            const auto& tails = go(rest - v);
            for (const auto& h : heads)
                for (const auto& t : tails) {
                    if (t.empty() && v == 1) continue;
                    std::vector<T> s{h};
                    s.insert(s.end(), t.begin(), t.end());
                    out.push_back(std::move(s));
                }
        }
        return memo[rest] = std::move(out);
    };
    return go(w);
}

}  // namespace qpinf

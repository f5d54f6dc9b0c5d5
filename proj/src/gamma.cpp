#include "qpinf/gamma.hpp"

#include "qpinf/errors.hpp"

#include <cstdio>

namespace qpinf {

std::strong_ordering gamma_cmp(const GammaIndex& a, const GammaIndex& b) {
    if (!a.pair && !b.pair) return a.i <=> b.i;
    if (a.pair && !b.pair) return a.i + a.j < b.i ? std::strong_ordering::less : std::strong_ordering::greater;
    if (!a.pair && b.pair) return a.i <= b.i + b.j ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = (a.i + a.j) <=> (b.i + b.j); c != 0) return c;
    return a.i <=> b.i;
}

std::vector<GammaIndex> gamma_enumerate(std::size_t count) {
    std::vector<GammaIndex> out;
    for (std::size_t s = 0; out.size() < count; ++s) {
        out.push_back(GammaIndex::num(s));
        for (std::size_t i = 0; i <= s && out.size() < count; ++i) out.push_back(GammaIndex::of(i, s - i));
    }
    out.resize(count);
    return out;
}

std::size_t gamma_rank(const GammaIndex& g) {
    std::size_t s = g.pair ? g.i + g.j : g.i;
    std::size_t before = s + s * (s + 1) / 2;
    return g.pair ? before + 1 + g.i : before;
}

GammaIndex gamma_at(std::size_t rank) {
    std::size_t s = 0;
    while ((s + 1) + (s + 1) * (s + 2) / 2 <= rank) ++s;
    std::size_t off = rank - (s + s * (s + 1) / 2);
    return off == 0 ? GammaIndex::num(s) : GammaIndex::of(off - 1, s - (off - 1));
}

std::string to_string(const GammaIndex& g) {
    return g.pair ? "(" + std::to_string(g.i) + "," + std::to_string(g.j) + ")" : std::to_string(g.i);
}

GammaIndex parse_gamma(const std::string& s) {
    std::size_t i = 0, j = 0;
    if (std::sscanf(s.c_str(), "(%zu,%zu)", &i, &j) == 2) return GammaIndex::of(i, j);
    if (std::sscanf(s.c_str(), "%zu", &i) == 1) return GammaIndex::num(i);
    throw Error("ParseError", "bad gamma index '" + s + "'");
}

}  // namespace qpinf

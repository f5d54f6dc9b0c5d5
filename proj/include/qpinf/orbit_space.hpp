#pragma once

#include "qpinf/enumerate.hpp"
#include "qpinf/errors.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qpinf {

// Canonical representative of an orbit in X^(ω) \ {s^ω}: the first non-fixed coordinate
// is an orbit reference, and trailing fixed coordinates are dropped.
template <class E>
struct OrbitPoint {
    std::vector<E> coords;

    std::size_t length() const { return coords.size(); }
    friend bool operator==(const OrbitPoint&, const OrbitPoint&) = default;
    friend std::weak_ordering operator<=>(const OrbitPoint& a, const OrbitPoint& b) {
        if (auto c = a.coords.size() <=> b.coords.size(); c != 0) return c;
        return a.coords <=> b.coords;
    }
};

// Saturation of {x : x_chart = ref, x_i ∈ constraints[i]}.
template <class E, class O>
struct Cylinder {
    std::size_t chart = 0;
    E ref;
    std::map<std::size_t, O> constraints;
    friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

// The quotient X^(ω) \ {s^ω} / G of a singular G-space, with skeleton Y_n = {x : x_i = s for i < n}.
template <class M>
class OrbitSpace {
public:
    using Elem = typename M::Elem;
    using Group = typename M::Group;
    using Point = OrbitPoint<Elem>;
    using Open = Cylinder<Elem, typename M::Open>;

    explicit OrbitSpace(M model = {}) : m_(std::move(model)), enum_(std::make_shared<LayeredEnum<Point>>(layer_fn(m_), 2)) {}

    const M& model() const { return m_; }
    std::string name() const { return m_.name() + "-Pinf"; }

    bool is_fixed(const Elem& x) const { return x == m_.fixed(); }
    Elem coord(const Point& p, std::size_t i) const { return i < p.coords.size() ? p.coords[i] : m_.fixed(); }

    Point normalize(std::vector<Elem> v) const {
        auto it = std::find_if(v.begin(), v.end(), [&](const Elem& x) { return !is_fixed(x); });
        if (it == v.end()) throw Error("AllZero", "every coordinate is the fixed point");
        Group g = m_.normalizer(*it);
        for (auto& x : v) x = m_.act(g, x);
        while (is_fixed(v.back())) v.pop_back();
        return {std::move(v)};
    }

    std::size_t level(const Point& p) const {
        std::size_t i = 0;
        while (is_fixed(p.coords[i])) ++i;
        return i;
    }
    bool in_skeleton(std::size_t n, const Point& p) const { return level(p) >= n; }

    Point unit(std::size_t j) const {
        std::vector<Elem> v(j, m_.fixed());
        v.push_back(m_.refs().front());
        return {std::move(v)};
    }

    Point shift(const Point& p, std::size_t by) const {
        std::vector<Elem> v(by, m_.fixed());
        v.insert(v.end(), p.coords.begin(), p.coords.end());
        return {std::move(v)};
    }

    Point point(std::size_t i) const { return enum_->at(i); }
    Open base(std::size_t i) const {
        auto [a, k] = cantor_unpair(i);
        return nbhd(point(a), k);
    }

    bool member(const Point& p, const Open& o) const {
        const Elem& xc = coord(p, o.chart);
        if (is_fixed(xc) || m_.ref(xc) != o.ref) return false;
        Group g = m_.normalizer(xc);
        for (const auto& [i, c] : o.constraints)
            if (!m_.contains(c, m_.act(g, coord(p, i)))) return false;
        return true;
    }

    // points whose first r coordinates are s lie in the closure of a cylinder constraining indices < r
    std::size_t tail_hint(const Open& o) const {
        std::size_t r = o.chart + 1;
        if (!o.constraints.empty()) r = std::max(r, o.constraints.rbegin()->first + 1);
        return r;
    }

    Open nbhd(const Point& p, unsigned k) const {
        Open o{level(p), p.coords[level(p)], {}};
        std::size_t top = std::max<std::size_t>(k, p.length());
        for (std::size_t i = 0; i <= top; ++i)
            if (i != o.chart) o.constraints.emplace(i, m_.nbhd(coord(p, i), k));
        return o;
    }

    // Clopen cylinder around c constraining the coordinates below `support`.
    Open box(const Point& c, std::size_t support, unsigned r) const {
        Open o{level(c), c.coords[level(c)], {}};
        for (std::size_t i = 0; i < support; ++i)
            if (i != o.chart) o.constraints.emplace(i, m_.clopen_nbhd(coord(c, i), r));
        return o;
    }

    // Exact: a point of a ∩ b, or nothing.
    std::optional<Point> meets(const Open& a, const Open& b) const {
        const auto &da = a.constraints, &db = b.constraints;
        auto gs = m_.gs_all();
        if (a.chart == b.chart) {
            if (a.ref != b.ref) return std::nullopt;
        } else {
            if (auto it = da.find(b.chart); it != da.end()) gs = m_.gs_meet(gs, m_.gs_pulls_into(b.ref, it->second));
            if (auto it = db.find(a.chart); it != db.end()) gs = m_.gs_meet(gs, m_.gs_maps_into(a.ref, it->second));
        }
        for (const auto& [i, o] : da) {
            auto it = db.find(i);
            if (it == db.end() || i == a.chart || i == b.chart) continue;
            gs = m_.gs_meet(gs, m_.gs_overlap(o, it->second));
        }
        if (m_.gs_empty(gs)) return std::nullopt;
        Group h = m_.identity();
        if (a.chart == b.chart) {
            if (!m_.gs_contains(gs, h)) return std::nullopt;
        } else {
            h = m_.gs_pick(gs);
        }
        Group hinv = m_.inverse(h);
        std::size_t len = std::max(a.chart, b.chart) + 1;
        if (!da.empty()) len = std::max(len, da.rbegin()->first + 1);
        if (!db.empty()) len = std::max(len, db.rbegin()->first + 1);
        std::vector<Elem> x(len, m_.fixed());
        for (std::size_t i = 0; i < len; ++i) {
            auto ia = da.find(i);
            auto ib = db.find(i);
            if (i == a.chart) x[i] = a.ref;
            else if (i == b.chart) x[i] = m_.act(hinv, b.ref);
            else if (ia != da.end() && ib != db.end()) x[i] = m_.pick_overlap(ia->second, h, ib->second);
            else if (ia != da.end()) x[i] = m_.pick(ia->second);
            else if (ib != db.end()) x[i] = m_.act(hinv, m_.pick(ib->second));
        }
        Point w = normalize(std::move(x));
        if (!member(w, a) || !member(w, b)) throw Error("InternalError", "cylinder meet witness fails membership");
        return w;
    }

    // Exact closure test; assumes every bounded carrier open contracts to s under the group.
    bool closure_member(const Point& p, const Open& o) const {
        const Elem& xc = coord(p, o.chart);
        if (is_fixed(xc)) {
            return std::all_of(o.constraints.begin(), o.constraints.end(),
                               [&](const auto& kv) { return is_fixed(coord(p, kv.first)); });
        }
        if (m_.ref(xc) != o.ref) return false;
        Group g = m_.normalizer(xc);
        for (const auto& [i, c] : o.constraints)
            if (!m_.closure_contains(c, m_.act(g, coord(p, i)))) return false;
        return true;
    }

    // Exact a ⊆ b.
    bool subset(const Open& a, const Open& b) const {
        if (!meets(a, a)) return true;
        const auto &da = a.constraints, &db = b.constraints;
        if (a.chart == b.chart) {
            if (a.ref != b.ref) return false;
            for (const auto& [i, p] : db) {
                auto it = da.find(i);
                if (it == da.end() || !m_.open_subset(it->second, p)) return false;
            }
            return true;
        }
        auto it = da.find(b.chart);
        if (it == da.end()) return false;
        auto hs = m_.normalizers(it->second);
        if (!hs || m_.ref(m_.pick(it->second)) != b.ref) return false;
        for (const auto& [i, p] : db) {
            if (i == a.chart) {
                if (!m_.image_within(*hs, a.ref, p)) return false;
                continue;
            }
            auto jt = da.find(i);
            if (jt == da.end() || !m_.image_within(*hs, jt->second, p)) return false;
        }
        return true;
    }

    // Fills the fixed coordinates of a with contraction(t)·b.
    Point perturb(const Point& a, const Point& b, unsigned t) const {
        std::size_t len = std::max(a.length(), b.length());
        std::vector<Elem> v(len, m_.fixed());
        Group g = m_.contraction(t);
        for (std::size_t i = 0; i < len; ++i) {
            const Elem& x = coord(a, i);
            v[i] = is_fixed(x) ? m_.act(g, coord(b, i)) : x;
        }
        return normalize(std::move(v));
    }

    std::optional<Open> restrict_to_skeleton(const Open& o, std::size_t n) const {
        if (o.chart < n || !meets(o, o)) return std::nullopt;
        Open r{o.chart - n, o.ref, {}};
        for (const auto& [i, c] : o.constraints) {
            if (i < n) {
                if (!m_.contains(c, m_.fixed())) return std::nullopt;
            } else {
                r.constraints.emplace(i - n, c);
            }
        }
        return r;
    }

    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const {
        auto ra = restrict_to_skeleton(a, n), rb = restrict_to_skeleton(b, n);
        if (!ra || !rb) return std::nullopt;
        auto w = meets(*ra, *rb);
        if (!w) return std::nullopt;
        return shift(*w, n);
    }

    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const {
        auto z = meets_in(o, o, n);
        if (!z || i == 0) return z;
        Point q = shift(point(i - 1), n + i % 3);
        for (unsigned t = 1; t <= 256; ++t) {
            Point c = perturb(*z, q, t);
            if (member(c, o) && level(c) >= n) return c;
        }
        return z;
    }

    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const { return shift(point(i), n); }

private:
    // weight: s counts 1, a reference 2, other elements per the model
    static typename LayeredEnum<Point>::Layer layer_fn(const M& m) {
        return [m](unsigned w) {
            std::vector<Point> out;
            std::function<std::vector<Elem>(unsigned)> vals = [m](unsigned v) {
                auto all = m.values_of_weight(v);
                std::erase(all, m.fixed());
                return all;
            };
            for (unsigned lead = 0; lead + 2 <= w; ++lead) {
                unsigned rest = w - lead - 2;
                auto tails = weighted_tails<Elem>(rest, vals, m.fixed());
                for (const Elem& r : m.refs())
                    for (const auto& t : tails) {
                        std::vector<Elem> v(lead, m.fixed());
                        v.push_back(r);
                        v.insert(v.end(), t.begin(), t.end());
                        out.push_back({std::move(v)});
                    }
            }
            return out;
        };
    }

    M m_;
    std::shared_ptr<LayeredEnum<Point>> enum_;
};

}  // namespace qpinf

#pragma once

#include "qpinf/models.hpp"
#include "qpinf/orbit_space.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qpinf {

struct AxiomCheck {
    std::string axiom;
    bool passed = true;
    std::size_t samples = 0;
    std::string counterexample;
};

struct AxiomReport {
    std::string model;
    std::vector<AxiomCheck> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const AxiomCheck& at(std::string_view prefix) const {
        for (const auto& c : checks)
            if (c.axiom.starts_with(prefix)) return c;
        throw Error("NotFound", "no check " + std::string(prefix));
    }
};

struct AxiomBudget {
    std::size_t points = 24;
    std::size_t samples = 16;
    unsigned levels = 6;
};

namespace detail {

inline std::string show(long v) { return std::to_string(v); }
inline std::string show(int v) { return std::to_string(v); }
inline std::string show(const Rational& v) { return to_string(v); }
inline std::string show(const ZInf& v) { return to_string(v); }

template <class M>
std::vector<typename M::Elem> moving_points(const M& m, std::size_t n) {
    std::vector<typename M::Elem> out;
    for (std::size_t i = 0; out.size() < n && i < 4 * n; ++i)
        if (m.element(i) != m.fixed()) out.push_back(m.element(i));
    return out;
}

template <class M>
AxiomCheck check_regular(const M& m, const AxiomBudget& b) {
    AxiomCheck c{"(i) regular and infinite"};
    for (std::size_t i = 0; i < b.points; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m.element(i) == m.element(j)) {
                c.passed = false;
                c.counterexample = "enumeration repeats " + show(m.element(i));
                return c;
            }
    for (std::size_t i = 0; i < b.points; ++i) {
        auto x = m.element(i);
        for (unsigned k = 0; k < b.levels; ++k) {
            auto u = m.nbhd(x, k);
            bool found = false;
            for (unsigned j = k; j <= k + 8 && !found; ++j) {
                auto v = m.nbhd(x, j);
                found = true;
                for (std::size_t t = 0; t < 4 * b.points && found; ++t) {
                    auto y = m.element(t);
                    if (m.closure_contains(v, y) && !m.contains(u, y)) found = false;
                    if (auto s = m.sample_open(u, t % b.samples))
                        if (m.closure_contains(v, *s) && !m.contains(u, *s)) found = false;
                }
            }
            ++c.samples;
            if (!found) {
                c.passed = false;
                c.counterexample = "no closed neighbourhood inside O_" + std::to_string(k) + "(" + show(x) + ")";
                return c;
            }
        }
    }
    return c;
}

template <class M>
AxiomCheck check_fixed(const M& m, const AxiomBudget& b) {
    AxiomCheck c{"(ii) unique fixed point"};
    for (std::size_t g = 0; g < b.points; ++g)
        if (m.act(m.group(g), m.fixed()) != m.fixed()) {
            c.passed = false;
            c.counterexample = "s is moved by " + show(m.group(g));
            return c;
        }
    for (const auto& x : moving_points(m, b.points)) {
        bool moved = false;
        for (std::size_t g = 0; g < b.points && !moved; ++g) moved = m.act(m.group(g), x) != x;
        ++c.samples;
        if (!moved) {
            c.passed = false;
            c.counterexample = show(x) + " is fixed by every sampled group element";
            return c;
        }
    }
    return c;
}

template <class M>
AxiomCheck check_orbit_map(const M& m, const AxiomBudget& b) {
    AxiomCheck c{"(iii) orbit maps injective and open"};
    auto xs = moving_points(m, b.points);
    for (const auto& x : xs) {
        for (std::size_t g = 0; g < b.samples; ++g)
            for (std::size_t h = 0; h < g; ++h) {
                auto gg = m.group(g), hh = m.group(h);
                if (gg != hh && m.act(gg, x) == m.act(hh, x)) {
                    c.passed = false;
                    c.counterexample = "g=" + show(gg) + " and h=" + show(hh) + " agree on " + show(x);
                    return c;
                }
            }
        for (std::size_t g = 0; g < b.samples; ++g) {
            auto gg = m.group(g);
            auto gx = m.act(gg, x);
            for (unsigned k = 0; k < b.levels; ++k) {
                auto target = m.group_nbhd(gg, k);
                bool open = false;
                for (unsigned j = 0; j <= k + 32 && !open; ++j) {
                    auto u = m.nbhd(gx, j);
                    open = true;
                    for (std::size_t t = 0; t < b.samples && open; ++t) {
                        auto y = m.sample_open(u, t);
                        if (!y) break;
                        auto h = m.solve(x, *y);
                        open = h && m.act(*h, x) == *y && m.group_contains(target, *h);
                    }
                }
                ++c.samples;
                if (!open) {
                    c.passed = false;
                    c.counterexample = "image of a neighbourhood of " + show(gg) + " under alpha_" + show(x) +
                                       " contains no neighbourhood of " + show(gx);
                    return c;
                }
            }
        }
    }
    return c;
}

template <class M>
AxiomCheck check_orbit_closure(const M& m, const AxiomBudget& b) {
    AxiomCheck c{"(iv) s in the closure of every orbit"};
    for (const auto& x : moving_points(m, b.points))
        for (unsigned k = 0; k < b.levels; ++k) {
            auto w = m.nbhd(m.fixed(), k);
            bool hit = false;
            for (std::size_t g = 0; g < b.points && !hit; ++g) hit = m.contains(w, m.act(m.group(g), x));
            for (unsigned t = 0; t <= 256 && !hit; ++t) hit = m.contains(w, m.act(m.contraction(t), x));
            ++c.samples;
            if (!hit) {
                c.passed = false;
                c.counterexample = "orbit of " + show(x) + " misses O_" + std::to_string(k) + "(s)";
                return c;
            }
        }
    return c;
}

// ∃U∋y ∀W∋s ∃V∋s: α_u(α_x^{-1}(V)) ⊆ W for u ∈ U. Probes u among samples of U and
// among preimages h^{-1}z of points z outside W.
template <class M>
AxiomCheck check_uniformity(const M& m, const AxiomBudget& b) {
    AxiomCheck c{"(v) uniform contraction"};
    auto xs = moving_points(m, b.points / 2 + 1);
    std::size_t ny = b.points / 2 + 1;
    for (const auto& x : xs)
        for (std::size_t iy = 0; iy < ny; ++iy) {
            auto y = m.element(iy);
            bool some_u = false;
            std::string bad;
            for (unsigned j = 0; j < b.levels + 4 && !some_u; ++j) {
                auto u = m.nbhd(y, j);
                bool all_w = true;
                std::vector<typename M::Elem> usamples;
                for (std::size_t iu = 0; iu < b.samples; ++iu)
                    if (auto uu = m.sample_open(u, iu)) usamples.push_back(*uu);
                for (unsigned k = 0; k < b.levels && all_w; ++k) {
                    auto w = m.nbhd(m.fixed(), k);
                    bool some_v = false;
                    for (unsigned e = 0; e <= 7 && !some_v; ++e) {
                        auto v = m.nbhd(m.fixed(), k + (1u << e) - 1);
                        bool good = true;
                        for (std::size_t iv = 0; iv < b.samples && good; ++iv) {
                            auto vv = m.sample_open(v, iv);
                            if (!vv) break;
                            auto h = m.solve(x, *vv);
                            if (!h) continue;
                            std::vector<typename M::Elem> probes = usamples;
                            for (std::size_t iz = 0; iz < b.samples; ++iz) {
                                auto z = m.element(iz);
                                if (m.contains(w, z)) continue;
                                auto pre = m.act(m.inverse(*h), z);
                                if (m.contains(u, pre)) probes.push_back(pre);
                            }
                            for (const auto& uu : probes)
                                if (!m.contains(w, m.act(*h, uu))) good = false;
                        }
                        some_v = good;
                    }
                    if (!some_v) {
                        all_w = false;
                        bad = "W=O_" + std::to_string(k) + "(s)";
                    }
                }
                some_u = all_w;
            }
            ++c.samples;
            if (!some_u) {
                c.passed = false;
                c.counterexample = "x=" + show(x) + ", y=" + show(y) + ", " + bad;
                return c;
            }
        }
    return c;
}

}  // namespace detail

template <class M>
AxiomReport verify_singular_axioms(const M& m, const AxiomBudget& b = {}) {
    AxiomReport r{m.name(), {}};
    r.checks.push_back(detail::check_regular(m, b));
    r.checks.push_back(detail::check_fixed(m, b));
    r.checks.push_back(detail::check_orbit_map(m, b));
    r.checks.push_back(detail::check_orbit_closure(m, b));
    r.checks.push_back(detail::check_uniformity(m, b));
    return r;
}

template <class M>
OrbitSpace<M> build_projective_presentation(const M& m, const AxiomBudget& b = {}) {
    auto r = verify_singular_axioms(m, b);
    for (const auto& c : r.checks)
        if (!c.passed) throw Error("AxiomFailure", m.name() + " fails " + c.axiom + ": " + c.counterexample);
    return OrbitSpace<M>(m);
}

// Sampled checks of the quotient lemmas: closed orbits, skeleton tails in closures of
// cylinders, and cylinders V ⊆ U with cl V ⊆ U ∪ Y_n.
template <class M>
AxiomReport check_quotient_preconditions(const OrbitSpace<M>& s, const AxiomBudget& b = {}) {
    using Point = typename OrbitSpace<M>::Point;
    AxiomReport r{s.name(), {}};
    std::vector<Point> pts;
    for (std::size_t i = 0; i < b.points; ++i) pts.push_back(s.point(i));

    AxiomCheck closed{"closed orbits"};
    for (const auto& x : pts)
        for (const auto& y : pts) {
            if (x == y) continue;
            bool sep = false;
            for (unsigned k = 0; k <= 64 && !sep; ++k) sep = !s.member(x, s.nbhd(y, k));
            ++closed.samples;
            if (!sep && closed.passed) {
                closed.passed = false;
                closed.counterexample = "no neighbourhood of point " + std::to_string(closed.samples) + " misses the other orbit";
            }
        }
    r.checks.push_back(closed);

    AxiomCheck tails{"skeleton tail in cylinder closure"};
    for (std::size_t i = 0; i < b.points; ++i) {
        auto u = s.nbhd(pts[i], i % b.levels);
        std::size_t top = u.constraints.empty() ? u.chart + 1 : std::max(u.chart, u.constraints.rbegin()->first) + 1;
        for (std::size_t t = 0; t < b.samples; ++t) {
            Point q = s.shift(pts[t], top);
            bool in = s.closure_member(q, u) && s.meets(s.nbhd(q, 48), u).has_value();
            ++tails.samples;
            if (!in && tails.passed) {
                tails.passed = false;
                tails.counterexample = "Y_" + std::to_string(top) + " point outside the closure";
            }
        }
    }
    r.checks.push_back(tails);

    AxiomCheck retract{"closed shrinking"};
    for (std::size_t i = 0; i < b.points; ++i) {
        const Point& x = pts[i];
        std::size_t n = s.level(x) + 1 + i % 3;
        auto u = s.nbhd(x, i % b.levels);
        std::size_t top = std::max(n, u.constraints.empty() ? 0 : u.constraints.rbegin()->first + 1);
        std::optional<typename OrbitSpace<M>::Open> v;
        for (unsigned rad = 0; rad <= 128 && !v; ++rad) {
            auto cand = s.box(x, top, rad);
            if (s.subset(cand, u)) v = cand;
        }
        ++retract.samples;
        if (!v) {
            retract.passed = false;
            retract.counterexample = "no clopen cylinder inside a neighbourhood of point " + std::to_string(i);
            break;
        }
        for (std::size_t t = 0; t < b.samples; ++t) {
            for (unsigned e = 1; e <= 8; ++e) {
                Point q = s.perturb(x, pts[t], e * 4);
                if (s.closure_member(q, *v) && !s.member(q, u) && s.level(q) < n) {
                    retract.passed = false;
                    retract.counterexample = "closure escapes U off Y_" + std::to_string(n);
                }
            }
            Point q = pts[t];
            if (s.closure_member(q, *v) && !s.member(q, u) && s.level(q) < n) {
                retract.passed = false;
                retract.counterexample = "closure escapes U off Y_" + std::to_string(n);
            }
        }
    }
    r.checks.push_back(retract);
    return r;
}

}  // namespace qpinf

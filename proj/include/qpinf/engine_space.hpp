#pragma once

#include "qpinf/codec.hpp"
#include "qpinf/models.hpp"
#include "qpinf/orbit_space.hpp"
#include "qpinf/presentations.hpp"
#include "qpinf/projective.hpp"

#include "json.hpp"

#include <concepts>
#include <optional>
#include <string>
#include <vector>

namespace qpinf {

using Json = nlohmann::json;

// What the back-and-forth engine needs from a side: exact predicates, clopen boxes whose
// closure adds exactly X_support, and perturbations converging to their first argument.
template <class S>
concept EngineSpace = requires(const S& s, const typename S::Point& p, const typename S::Open& o, std::size_t n,
                               unsigned k, const Json& j) {
    typename S::Point;
    typename S::Open;
    { s.name() } -> std::convertible_to<std::string>;
    { s.point(n) } -> std::convertible_to<typename S::Point>;
    { s.level(p) } -> std::convertible_to<std::size_t>;
    { s.has_level(n) } -> std::same_as<bool>;
    { s.nbhd(p, k) } -> std::convertible_to<typename S::Open>;
    // box(c, L, r): clopen off X_L, members of level <= level(c), closure = box ∪ X_L
    { s.box(p, n, k) } -> std::convertible_to<typename S::Open>;
    { s.member(p, o) } -> std::same_as<bool>;
    { s.closure_member(p, o) } -> std::same_as<bool>;
    // p ∈ cl(o ∩ X_n)
    { s.closure_member_in(p, o, n) } -> std::same_as<bool>;
    { s.subset(o, o) } -> std::same_as<bool>;
    { s.meets(o, o) } -> std::same_as<bool>;
    // o ∩ X_n ≠ ∅
    { s.meets_level(o, n) } -> std::same_as<bool>;
    // least L such that boxes of support L separate p from other points / fit inside o
    { s.reach(p) } -> std::convertible_to<std::size_t>;
    { s.reach(o) } -> std::convertible_to<std::size_t>;
    { s.unit(n) } -> std::convertible_to<typename S::Point>;
    { s.perturb(p, p, k) } -> std::convertible_to<typename S::Point>;
    { s.jitter(p, n, k) } -> std::convertible_to<typename S::Point>;
    { s.skeleton_sample(n, n) } -> std::same_as<std::optional<typename S::Point>>;
    { s.to_json(p) } -> std::same_as<Json>;
    { s.point_from_json(j) } -> std::convertible_to<typename S::Point>;
    { s.open_json(o) } -> std::same_as<Json>;
};

// QP^inf with skeleton X'_n = Y_{marks[n]}, marks strictly increasing from 0 and continued with
// step 1 past its end. ProjEngineSpace(m): X'_0 = X, X'_n = Y_{n+m} for n >= 1.
class ProjEngineSpace {
public:
    using Point = ProjPoint;
    using Open = BasicOpen;

    explicit ProjEngineSpace(std::size_t offset = 0) : marks_{0, offset + 1} {}
    static ProjEngineSpace with_marks(std::vector<std::size_t> marks);

    const std::vector<std::size_t>& marks() const { return marks_; }
    std::string name() const;
    Point point(std::size_t i) const { return pres_.point(i); }
    std::size_t level(const Point& p) const { return level_of(p.level()); }
    bool has_level(std::size_t) const { return true; }
    std::size_t real(std::size_t l) const {
        return l < marks_.size() ? marks_[l] : marks_.back() + (l - marks_.size() + 1);
    }
    // largest l with real(l) <= r
    std::size_t level_of(std::size_t r) const;
    Open nbhd(const Point& p, unsigned k) const { return nbhd_base(p, k); }
    Open box(const Point& c, std::size_t support, unsigned r) const {
        return qpinf::box(c, real(support), clopen_radius(r));
    }
    bool member(const Point& p, const Open& o) const { return qpinf::member(p, o); }
    bool closure_member(const Point& p, const Open& o) const { return qpinf::closure_member(p, o); }
    bool closure_member_in(const Point& p, const Open& o, std::size_t n) const;
    bool subset(const Open& a, const Open& b) const { return qpinf::subset(a, b); }
    bool meets(const Open& a, const Open& b) const { return qpinf::meets(a, b).has_value(); }
    bool meets_level(const Open& o, std::size_t n) const { return pres_.meets_in(o, o, real(n)).has_value(); }
    std::size_t reach(const Point& p) const { return reach_real(p.length()); }
    std::size_t reach(const Open& o) const;
    Point unit(std::size_t l) const { return qpinf::unit(real(l)); }
    Point perturb(const Point& v, const Point& d, unsigned t) const {
        return qpinf::perturb(v, d, pow2(-static_cast<long>(t)));
    }
    Point jitter(const Point& v, std::size_t s, unsigned t) const {
        return perturb(v, qpinf::unit(v.length() + s), t);
    }
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const { return shift(point(i), real(n)); }

    Json to_json(const Point& p) const;
    Point point_from_json(const Json& j) const;
    Json open_json(const Open& o) const;

private:
    // least l >= 1 with real(l) >= r
    std::size_t reach_real(std::size_t r) const;

    std::vector<std::size_t> marks_;
    QPPresentation pres_;
};

// Q with X_0 = Q and X_n = ∅; clopen intervals with irrational ends.
class QLineEngineSpace {
public:
    using Point = Rational;
    using Open = Interval;

    std::string name() const { return "Qline"; }
    Point point(std::size_t i) const { return pres_.point(i); }
    std::size_t level(const Point&) const { return 0; }
    bool has_level(std::size_t l) const { return l == 0; }
    Open nbhd(const Point& p, unsigned k) const { return pres_.nbhd(p, k); }
    Open box(const Point& c, std::size_t, unsigned r) const { return centered(c, clopen_radius(r + 1)); }
    bool member(const Point& p, const Open& o) const { return o.contains(p); }
    bool closure_member(const Point& p, const Open& o) const { return o.closure_contains(p); }
    bool closure_member_in(const Point& p, const Open& o, std::size_t n) const {
        return n == 0 && o.closure_contains(p);
    }
    bool subset(const Open& a, const Open& b) const { return a.subset_of(b); }
    bool meets(const Open& a, const Open& b) const { return !a.disjoint(b); }
    bool meets_level(const Open& o, std::size_t n) const { return n == 0 && !o.empty(); }
    std::size_t reach(const Point&) const { return 1; }
    std::size_t reach(const Open&) const { return 1; }
    Point unit(std::size_t l) const {
        if (l != 0) throw Error("LevelOutOfRange", "Qline has only level 0");
        return Rational(0);
    }
    Point perturb(const Point& v, const Point& d, unsigned t) const {
        return v + pow2(-static_cast<long>(t)) * (d == v ? Rational(1) : d - v);
    }
    Point jitter(const Point& v, std::size_t s, unsigned t) const {
        return v + pow2(-static_cast<long>(t)) * Rational(static_cast<long>(s + 1));
    }
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const {
        if (n > 0) return std::nullopt;
        return point(i);
    }

    Json to_json(const Point& p) const { return qpinf::to_string(p); }
    Point point_from_json(const Json& j) const { return parse_rational(j.get<std::string>()); }
    Json open_json(const Open& o) const { return encode(o); }

private:
    QLinePresentation pres_;
};

namespace detail {
inline Json elem_json(const Rational& q) { return qpinf::to_string(q); }
inline Json elem_json(const ZInf& z) { return qpinf::to_string(z); }
inline void elem_from_json(const Json& j, Rational& q) { q = parse_rational(j.get<std::string>()); }
void elem_from_json(const Json& j, ZInf& z);
inline Json carrier_open_json(const Interval& o) { return encode(o); }
inline Json carrier_open_json(const ZOpen& o) { return encode(o); }
}  // namespace detail

// Orbit space of a singular model with its canonical skeleton.
template <class M>
class OrbitEngineSpace {
public:
    using Space = OrbitSpace<M>;
    using Point = typename Space::Point;
    using Open = typename Space::Open;

    explicit OrbitEngineSpace(M model = {}) : s_(std::move(model)) {}

    const Space& space() const { return s_; }
    std::string name() const { return s_.name(); }
    Point point(std::size_t i) const { return s_.point(i); }
    std::size_t level(const Point& p) const { return s_.level(p); }
    bool has_level(std::size_t) const { return true; }
    Open nbhd(const Point& p, unsigned k) const { return s_.nbhd(p, k); }
    Open box(const Point& c, std::size_t support, unsigned r) const { return s_.box(c, support, r); }
    bool member(const Point& p, const Open& o) const { return s_.member(p, o); }
    bool closure_member(const Point& p, const Open& o) const { return s_.closure_member(p, o); }
    bool closure_member_in(const Point& p, const Open& o, std::size_t n) const {
        if (s_.level(p) < n) return false;
        auto r = s_.restrict_to_skeleton(o, n);
        if (!r) return false;
        Point q{std::vector(p.coords.begin() + static_cast<std::ptrdiff_t>(n), p.coords.end())};
        return s_.closure_member(q, *r);
    }
    bool subset(const Open& a, const Open& b) const { return s_.subset(a, b); }
    bool meets(const Open& a, const Open& b) const { return s_.meets(a, b).has_value(); }
    bool meets_level(const Open& o, std::size_t n) const { return s_.meets_in(o, o, n).has_value(); }
    std::size_t reach(const Point& p) const { return p.length(); }
    std::size_t reach(const Open& o) const {
        std::size_t r = o.chart + 1;
        if (!o.constraints.empty()) r = std::max(r, o.constraints.rbegin()->first + 1);
        return r;
    }
    Point unit(std::size_t l) const { return s_.unit(l); }
    Point perturb(const Point& v, const Point& d, unsigned t) const { return s_.perturb(v, d, t); }
    Point jitter(const Point& v, std::size_t s, unsigned t) const { return s_.perturb(v, s_.unit(v.length() + s), t); }
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const { return s_.skeleton_sample(n, i); }

    Json to_json(const Point& p) const {
        Json a = Json::array();
        for (const auto& x : p.coords) a.push_back(detail::elem_json(x));
        return a;
    }
    Point point_from_json(const Json& j) const {
        std::vector<typename M::Elem> v;
        for (const auto& e : j) {
            typename M::Elem x;
            detail::elem_from_json(e, x);
            v.push_back(x);
        }
        return s_.normalize(std::move(v));
    }
    Json open_json(const Open& o) const {
        Json c = Json::object();
        for (const auto& [i, iv] : o.constraints) c[std::to_string(i)] = detail::carrier_open_json(iv);
        return {{"chart", o.chart}, {"ref", detail::elem_json(o.ref)}, {"constraints", c}};
    }

private:
    Space s_;
};

static_assert(EngineSpace<ProjEngineSpace>);
static_assert(EngineSpace<QLineEngineSpace>);
static_assert(EngineSpace<OrbitEngineSpace<ZbarAdd>>);

}  // namespace qpinf

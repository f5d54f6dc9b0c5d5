#pragma once

#include "qpinf/errors.hpp"
#include "qpinf/presentation.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qpinf {

enum class Outcome { Pass, Fail, Inconclusive };

std::string to_string(Outcome o);

// One closure verdict, replayable through the presentation: p ∈ cl(open ∩ X_n) or not.
template <SpacePresentation S>
struct ClosureCertificate {
    std::string clause;
    typename S::Point point;
    typename S::Open open;
    std::size_t n = 0;
    unsigned depth = 0;
    bool inside = false;
};

template <SpacePresentation S>
bool replay(const S& s, const ClosureCertificate<S>& c) {
    auto v = in_closure(s, c.point, c.open, c.depth, c.n);
    if (c.inside != is_in(v)) return false;
    if (!c.inside && !is_out(v)) return false;
    return verify(s, c.point, c.open, c.depth, c.n, v);
}

template <SpacePresentation S>
struct SkeletonReport {
    std::string kind;
    Outcome verdict = Outcome::Pass;
    std::vector<ClosureCertificate<S>> certificates;
    std::string counterexample;
    std::size_t checked = 0;

    bool passed() const { return verdict == Outcome::Pass; }
    void fail(std::string why) {
        if (verdict == Outcome::Fail) return;
        verdict = Outcome::Fail;
        counterexample = std::move(why);
    }
    void inconclusive(std::string why) {
        if (verdict != Outcome::Pass) return;
        verdict = Outcome::Inconclusive;
        counterexample = std::move(why);
    }
    void absorb(const SkeletonReport& o) {
        if (o.verdict == Outcome::Fail) fail(o.kind + ": " + o.counterexample);
        else if (o.verdict == Outcome::Inconclusive) inconclusive(o.kind + ": " + o.counterexample);
        certificates.insert(certificates.end(), o.certificates.begin(), o.certificates.end());
        checked += o.checked;
    }
};

struct SkeletonBudget {
    std::size_t points = 16;
    std::size_t opens = 16;
    std::size_t samples = 12;
    unsigned levels = 3;
    unsigned depth = 48;
    std::size_t horizon = 16;
    std::uint64_t seed = 1;
};

// Same space, skeleton X'_n = X_{index(n)}; index need not be monotone.
template <SpacePresentation S>
class Reskeletoned {
public:
    using Point = typename S::Point;
    using Open = typename S::Open;

    Reskeletoned(S inner, std::function<std::size_t(std::size_t)> index, std::string tag)
        : s_(std::move(inner)), index_(std::move(index)), tag_(std::move(tag)) {}

    const S& inner() const { return s_; }
    std::string name() const { return s_.name() + "/" + tag_; }
    Point point(std::size_t i) const { return s_.point(i); }
    Open base(std::size_t i) const { return s_.base(i); }
    bool member(const Point& p, const Open& o) const { return s_.member(p, o); }
    bool in_skeleton(std::size_t n, const Point& p) const { return s_.in_skeleton(index_(n), p); }
    std::size_t level(const Point& p) const {
        std::size_t n = 0;
        while (n < 64 && in_skeleton(n + 1, p)) ++n;
        return n;
    }
    Open nbhd(const Point& p, unsigned k) const { return s_.nbhd(p, k); }
    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const { return s_.meets_in(a, b, index_(n)); }
    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const { return s_.sample_in(o, index_(n), i); }
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const { return s_.skeleton_sample(index_(n), i); }
    std::optional<Point> boundary_candidate(const Open& o, std::size_t i) const
        requires requires(const S& x) { x.boundary_candidate(o, i); }
    {
        return s_.boundary_candidate(o, i);
    }
    // least n with index(n) reaching the inner hint
    std::size_t tail_hint(const Open& o) const
        requires requires(const S& x) { x.tail_hint(o); }
    {
        std::size_t h = s_.tail_hint(o);
        for (std::size_t n = 0; n <= 2 * h + 64; ++n)
            if (index_(n) >= h) return n;
        return h;
    }

private:
    S s_;
    std::function<std::size_t(std::size_t)> index_;
    std::string tag_;
};

// X'_n = X_{floor(n/2)}: every set repeated twice.
template <SpacePresentation S>
Reskeletoned<S> padded(S s) {
    return {std::move(s), [](std::size_t n) { return n / 2; }, "padded"};
}

// X'_1 and X'_2 swapped, so X'_2 ⊄ X'_1.
template <SpacePresentation S>
Reskeletoned<S> swapped(S s) {
    return {std::move(s), [](std::size_t n) { return n == 1 ? 2 : n == 2 ? 1 : n; }, "swapped"};
}

// Finite discrete space {0..size-1}; X_0 = X, X_n = ∅ for n ≥ 1.
class FiniteDiscrete {
public:
    using Point = std::size_t;
    using Open = std::size_t;

    explicit FiniteDiscrete(std::size_t size) : size_(size) {}
    std::string name() const { return "discrete" + std::to_string(size_); }
    Point point(std::size_t i) const { return i % size_; }
    Open base(std::size_t i) const { return i % size_; }
    bool member(const Point& p, const Open& o) const { return p == o; }
    std::size_t level(const Point&) const { return 0; }
    bool in_skeleton(std::size_t n, const Point&) const { return n == 0; }
    Open nbhd(const Point& p, unsigned) const { return p; }
    std::optional<Point> meets_in(const Open& a, const Open& b, std::size_t n) const {
        if (n > 0 || a != b) return std::nullopt;
        return a;
    }
    std::optional<Point> sample_in(const Open& o, std::size_t n, std::size_t i) const {
        if (n > 0 || i > 0) return std::nullopt;
        return o;
    }
    std::optional<Point> skeleton_sample(std::size_t n, std::size_t i) const {
        if (n > 0 || i >= size_) return std::nullopt;
        return i;
    }

private:
    std::size_t size_;
};

}  // namespace qpinf

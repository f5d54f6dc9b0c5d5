#pragma once

#include "qpinf/verdict.hpp"

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qpinf {

// A countable space with a countable base and a designated skeleton X_0 ⊇ X_1 ⊇ ...
// point(i) is injective and fixes the order ⪯; nbhd(p, k) is the neighbourhood base O_k(p).
template <class S>
concept SpacePresentation = requires(const S& s, const typename S::Point& p, const typename S::Open& o,
                                     std::size_t n, unsigned k) {
    typename S::Point;
    typename S::Open;
    { s.name() } -> std::convertible_to<std::string>;
    { s.point(n) } -> std::convertible_to<typename S::Point>;
    { s.base(n) } -> std::convertible_to<typename S::Open>;
    { s.member(p, o) } -> std::same_as<bool>;
    { s.level(p) } -> std::convertible_to<std::size_t>;
    { s.in_skeleton(n, p) } -> std::same_as<bool>;
    { s.nbhd(p, k) } -> std::convertible_to<typename S::Open>;
    // a point of o ∩ o' ∩ X_n, or nothing if that set is empty
    { s.meets_in(o, o, n) } -> std::same_as<std::optional<typename S::Point>>;
    // i-th sample of o ∩ X_n (nothing if the set is empty)
    { s.sample_in(o, n, n) } -> std::same_as<std::optional<typename S::Point>>;
    // i-th sample of X_n (nothing if X_n is empty)
    { s.skeleton_sample(n, n) } -> std::same_as<std::optional<typename S::Point>>;
};

template <SpacePresentation S>
using PresVerdict = Verdict<typename S::Point, typename S::Open>;

// Closure of o ∩ X_n at p: a witness in o ∩ X_n ∩ O_depth(p), or a separating O_k(p).
template <SpacePresentation S>
PresVerdict<S> in_closure(const S& s, const typename S::Point& p, const typename S::Open& o, unsigned depth,
                          std::size_t n = 0) {
    if (s.member(p, o) && s.in_skeleton(n, p)) return Witnessed<typename S::Point>{p};
    if (auto w = s.meets_in(s.nbhd(p, depth), o, n)) return Witnessed<typename S::Point>{*w};
    for (unsigned k = 0; k <= depth; ++k) {
        auto nb = s.nbhd(p, k);
        if (!s.meets_in(nb, o, n)) return Separated<typename S::Open>{nb, k};
    }
    return Undecided{};
}

template <SpacePresentation S>
bool verify(const S& s, const typename S::Point& p, const typename S::Open& o, unsigned depth, std::size_t n,
            const PresVerdict<S>& v) {
    if (auto w = std::get_if<Witnessed<typename S::Point>>(&v))
        return s.member(w->witness, o) && s.in_skeleton(n, w->witness) && s.member(w->witness, s.nbhd(p, depth));
    if (auto sep = std::get_if<Separated<typename S::Open>>(&v))
        return sep->k <= depth && sep->separator == s.nbhd(p, sep->k) && !s.meets_in(sep->separator, o, n);
    return false;
}

// First point in ⪯ order inside every `inside`, certified outside the closure of every
// `outside`, of exactly the requested level.
template <SpacePresentation S>
std::optional<typename S::Point> pick_point(const S& s, const std::vector<typename S::Open>& inside,
                                            const std::vector<typename S::Open>& outside, std::size_t level,
                                            std::size_t budget, unsigned depth = 8) {
    for (std::size_t i = 0; i < budget; ++i) {
        auto p = s.point(i);
        if (s.level(p) != level) continue;
        bool ok = true;
        for (const auto& o : inside) ok = ok && s.member(p, o);
        for (const auto& o : outside) ok = ok && is_out(in_closure(s, p, o, depth));
        if (ok) return p;
    }
    return std::nullopt;
}

}  // namespace qpinf

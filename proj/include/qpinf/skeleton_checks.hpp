#pragma once

#include "qpinf/skeleton.hpp"

namespace qpinf {

namespace detail {

// tail_hint(o): a level m with X_m ⊆ cl(o), proposed by the presentation and still checked
template <class S>
concept HasTailHint = requires(const S& s, const typename S::Open& o) {
    { s.tail_hint(o) } -> std::convertible_to<std::size_t>;
};

template <class S>
concept HasBoundaryCandidates = requires(const S& s, const typename S::Open& o, std::size_t i) {
    { s.boundary_candidate(o, i) } -> std::same_as<std::optional<typename S::Point>>;
};

inline std::vector<std::size_t> open_indices(const SkeletonBudget& b) {
    std::mt19937_64 g(b.seed);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.opens; ++i) out.push_back(i < b.opens / 2 ? i : g() % (8 * b.opens));
    return out;
}

// points worth testing against an open: enumerated points, skeleton samples, and boundary hints
template <SpacePresentation S>
std::vector<typename S::Point> candidates(const S& s, const typename S::Open& o, const SkeletonBudget& b) {
    std::vector<typename S::Point> out;
    for (std::size_t t = 0; t < b.points; ++t) out.push_back(s.point(t));
    for (unsigned n = 1; n <= b.levels + 1; ++n)
        for (std::size_t t = 0; t < b.samples; ++t)
            if (auto y = s.skeleton_sample(n, t)) out.push_back(*y);
    if constexpr (HasBoundaryCandidates<S>)
        for (std::size_t t = 0; t < b.samples; ++t)
            if (auto y = s.boundary_candidate(o, t)) out.push_back(*y);
    return out;
}

enum class Bundle { AllIn, Separated, Undecided };

// Are the sampled points of X_m all in cl(U ∩ X_n)?
template <SpacePresentation S>
Bundle closure_bundle(const S& s, const typename S::Open& u, std::size_t n, std::size_t m, const SkeletonBudget& b,
                      const std::string& clause, std::vector<ClosureCertificate<S>>& certs,
                      std::optional<ClosureCertificate<S>>& refutation) {
    std::vector<ClosureCertificate<S>> local;
    bool undecided = false;
    for (std::size_t i = 0; i < b.samples; ++i) {
        auto y = s.skeleton_sample(m, i);
        if (!y) break;
        auto v = in_closure(s, *y, u, b.depth, n);
        bool ok = verify(s, *y, u, b.depth, n, v);
        ClosureCertificate<S> c{clause, *y, u, n, b.depth, is_in(v)};
        if (is_in(v) && ok) {
            local.push_back(std::move(c));
        } else if (is_out(v) && ok) {
            refutation = std::move(c);
            return Bundle::Separated;
        } else {
            undecided = true;
        }
    }
    if (undecided) return Bundle::Undecided;
    certs.insert(certs.end(), local.begin(), local.end());
    return Bundle::AllIn;
}

// Finds m in [from, from+horizon] with X_m ⊆ cl(U ∩ X_n) on samples; X_m = ∅ counts only if allow_empty.
template <SpacePresentation S>
std::optional<std::size_t> find_tail(const S& s, const typename S::Open& u, std::size_t n, std::size_t from, bool allow_empty,
               const SkeletonBudget& b, const std::string& what, SkeletonReport<S>& r) {
    std::optional<ClosureCertificate<S>> refutation;
    bool undecided = false, exhausted = false;
    std::vector<std::size_t> levels;
    for (std::size_t m = from; m <= from + b.horizon; ++m) levels.push_back(m);
    if constexpr (HasTailHint<S>) {
        std::size_t h = s.tail_hint(u);
        if (h > from + b.horizon) levels.push_back(h);
    }
    std::size_t last = from;
    for (auto m : levels) {
        last = m;
        if (!s.skeleton_sample(m, 0)) {
            if (allow_empty) return m;
            exhausted = true;  // the skeleton decreases, so every later X_m is empty too
            break;
        }
        auto res = closure_bundle(s, u, n, m, b, r.kind, r.certificates, refutation);
        if (res == Bundle::AllIn) return m;
        undecided = undecided || res == Bundle::Undecided;
    }
    std::string none = what + ": no X_m with m <= " + std::to_string(last) + " lies in the closure" +
                       (allow_empty ? "" : " and is nonempty");
    if (refutation && !undecided && exhausted) {
        r.certificates.push_back(*refutation);
        r.fail(none);
    } else if (refutation && !undecided) {
        r.inconclusive(none + " (search bounded)");
    } else {
        r.inconclusive(what + ": closure of sampled points undecided");
    }
    return std::nullopt;
}

}  // namespace detail

// Least m >= n with ∅ ≠ X_m ⊆ cl(U ∩ X_n) on samples, with its certificates.
template <SpacePresentation S>
std::pair<std::optional<std::size_t>, SkeletonReport<S>> closure_tail(const S& s, const typename S::Open& u, std::size_t n,
                                                                      const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"closure-tail"};
    auto m = detail::find_tail(s, u, n, n, false, b, "open", r);
    return {m, std::move(r)};
}

template <SpacePresentation S>
SkeletonReport<S> check_vanishing(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"vanishing"};
    for (std::size_t i = 0; i < b.points; ++i) {
        auto p = s.point(i);
        ++r.checked;
        if (!s.in_skeleton(0, p)) r.fail("point #" + std::to_string(i) + " is not in X_0");
        bool escapes = false;
        for (std::size_t n = 0; n < b.horizon; ++n) {
            if (s.in_skeleton(n + 1, p) && !s.in_skeleton(n, p))
                r.fail("point #" + std::to_string(i) + " lies in X_" + std::to_string(n + 1) + " but not in X_" + std::to_string(n));
            escapes = escapes || !s.in_skeleton(n + 1, p);
        }
        if (!escapes) r.inconclusive("point #" + std::to_string(i) + " stays in X_n up to the horizon");
    }
    for (std::size_t n = 1; n <= b.levels + 1; ++n)
        for (std::size_t i = 0; i < b.samples; ++i) {
            auto y = s.skeleton_sample(n, i);
            if (!y) break;
            ++r.checked;
            for (std::size_t m = 0; m <= n; ++m)
                if (!s.in_skeleton(m, *y))
                    r.fail("sample " + std::to_string(i) + " of X_" + std::to_string(n) + " is not in X_" + std::to_string(m));
        }
    return r;
}

template <SpacePresentation S>
SkeletonReport<S> check_superconnecting(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"superconnecting"};
    for (auto i : detail::open_indices(b)) {
        auto u = s.base(i);
        if (!s.meets_in(u, u, 0)) continue;
        ++r.checked;
        detail::find_tail(s, u, 0, 0, false, b, "base open #" + std::to_string(i), r);
    }
    return r;
}

template <SpacePresentation S>
SkeletonReport<S> check_inductively_superconnecting(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"inductively-superconnecting"};
    for (std::size_t n = 0; n <= b.levels; ++n)
        for (auto i : detail::open_indices(b)) {
            auto u = s.base(i);
            if (!s.meets_in(u, u, n)) continue;
            ++r.checked;
            detail::find_tail(s, u, n, n, false, b, "base open #" + std::to_string(i) + " in X_" + std::to_string(n), r);
        }
    return r;
}

// Clause (i): cl U ⊇ some X_m. Clause (ii): X \ X_n regular, via V ∋ x with cl V ⊆ U ∪ X_n.
template <SpacePresentation S>
SkeletonReport<S> check_coregular(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"coregular"};
    for (auto i : detail::open_indices(b)) {
        auto u = s.base(i);
        if (!s.meets_in(u, u, 0)) continue;
        ++r.checked;
        detail::find_tail(s, u, 0, 0, true, b, "base open #" + std::to_string(i), r);
    }
    for (std::size_t n = 1; n <= b.levels; ++n)
        for (std::size_t i = 0; i < b.points; ++i) {
            auto x = s.point(i);
            if (s.in_skeleton(n, x)) continue;
            unsigned k = static_cast<unsigned>(i % 4);
            auto u = s.nbhd(x, k);
            ++r.checked;
            bool found = false, undecided = false;
            std::optional<ClosureCertificate<S>> escape;
            for (unsigned j = k; j <= k + 8 && !found; ++j) {
                auto v = s.nbhd(x, j);
                std::vector<ClosureCertificate<S>> local;
                bool bad = false, open_question = false;
                for (const auto& y : detail::candidates(s, v, b)) {
                    if (s.member(y, u) || s.in_skeleton(n, y)) continue;
                    auto verdict = in_closure(s, y, v, b.depth, 0);
                    bool ok = verify(s, y, v, b.depth, 0, verdict);
                    ClosureCertificate<S> c{"coregular", y, v, 0, b.depth, is_in(verdict)};
                    if (is_out(verdict) && ok) {
                        local.push_back(std::move(c));
                    } else if (is_in(verdict) && ok) {
                        bad = true;
                        escape = std::move(c);
                        break;
                    } else {
                        open_question = true;
                    }
                }
                if (!bad && !open_question) {
                    found = true;
                    r.certificates.insert(r.certificates.end(), local.begin(), local.end());
                }
                undecided = undecided || (!bad && open_question);
            }
            if (found) continue;
            if (!undecided && escape) {
                r.certificates.push_back(*escape);
                r.fail("X \\ X_" + std::to_string(n) + " is not regular at point #" + std::to_string(i) +
                       ": every sampled V has closure leaving U");
            } else {
                r.inconclusive("no certified V at point #" + std::to_string(i));
            }
        }
    return r;
}

// X_m nowhere dense in X_n, on sampled opens meeting X_n.
template <SpacePresentation S>
SkeletonReport<S> check_nowhere_dense(const S& s, std::size_t n, std::size_t m, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"nowhere-dense"};
    auto probe = [&](const typename S::Open& u, const std::string& what) {
        if (!s.meets_in(u, u, n)) return;
        ++r.checked;
        bool escape = false;
        for (std::size_t t = 0; t < b.samples && !escape; ++t) {
            auto z = s.sample_in(u, n, t);
            escape = z && s.member(*z, u) && s.in_skeleton(n, *z) && !s.in_skeleton(m, *z);
        }
        if (!escape)
            r.fail(what + ": sampled points of U ∩ X_" + std::to_string(n) + " all lie in X_" + std::to_string(m));
    };
    for (auto i : detail::open_indices(b)) probe(s.base(i), "base open #" + std::to_string(i));
    // opens around points of X_n, so the check never runs empty
    for (std::size_t t = 0; t < b.samples; ++t) {
        auto y = s.skeleton_sample(n, t);
        if (!y) break;
        probe(s.nbhd(*y, static_cast<unsigned>(1 + t % 4)), "O_" + std::to_string(1 + t % 4) + " of sample #" +
                                                                 std::to_string(t) + " of X_" + std::to_string(n));
    }
    return r;
}

template <SpacePresentation S>
SkeletonReport<S> check_nowhere_dense(const S& s, std::size_t n, const SkeletonBudget& b = {}) {
    return check_nowhere_dense(s, n, n + 1, b);
}

template <SpacePresentation S>
SkeletonReport<S> check_superskeleton(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"superskeleton"};
    r.absorb(check_vanishing(s, b));
    r.absorb(check_coregular(s, b));
    r.absorb(check_inductively_superconnecting(s, b));
    return r;
}

template <SpacePresentation S>
SkeletonReport<S> check_canonical(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"canonical"};
    r.absorb(check_superskeleton(s, b));
    for (std::size_t n = 0; n <= b.levels; ++n) r.absorb(check_nowhere_dense(s, n, b));
    return r;
}

// n_0 = 0, n_{k+1} = least index whose set is certified nowhere dense in X_{n_k}.
template <SpacePresentation S>
std::vector<std::size_t> canonicalize(const S& s, std::size_t count, const SkeletonBudget& b = {}) {
    auto pre = check_superskeleton(s, b);
    if (!pre.passed()) throw Error("PreconditionFailed", s.name() + " is not a superskeleton: " + pre.counterexample);
    std::vector<std::size_t> seq{0};
    while (seq.size() < count) {
        std::size_t last = seq.back();
        std::optional<std::size_t> next;
        for (std::size_t m = last + 1; m <= last + b.horizon && !next; ++m)
            if (check_nowhere_dense(s, last, m, b).passed()) next = m;
        if (!next) throw Error("HorizonExhausted", "no nowhere dense successor of X_" + std::to_string(last));
        seq.push_back(*next);
    }
    return seq;
}

template <SpacePresentation S>
SkeletonReport<S> check_crowded(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"crowded"};
    for (std::size_t n = 0; n <= b.levels; ++n)
        for (std::size_t i = 0; i < b.points; ++i) {
            auto x = s.skeleton_sample(n, i);
            if (!x) break;
            for (unsigned k : {0u, 3u, 9u}) {
                auto o = s.nbhd(*x, k);
                ++r.checked;
                bool other = false;
                for (std::size_t t = 0; t < b.samples && !other; ++t) {
                    auto z = s.sample_in(o, n, t);
                    other = z && !(*z == *x) && s.member(*z, o) && s.in_skeleton(n, *z);
                }
                if (!other)
                    r.fail("sample " + std::to_string(i) + " of X_" + std::to_string(n) + " is isolated in O_" + std::to_string(k));
            }
        }
    return r;
}

// O = O_j(x) ⊆ O_k(x) is certified regular open when every sampled y ∈ cl O \ O has a
// nearby point outside cl O.
template <SpacePresentation S>
SkeletonReport<S> check_semiregular(const S& s, const SkeletonBudget& b = {}) {
    SkeletonReport<S> r{"semiregular"};
    for (std::size_t i = 0; i < b.points; ++i) {
        auto x = s.point(i);
        unsigned k = static_cast<unsigned>(i % 3);
        ++r.checked;
        bool certified = false;
        for (unsigned j = k + 1; j <= k + 4 && !certified; ++j) {
            auto o = s.nbhd(x, j);
            std::vector<ClosureCertificate<S>> local;
            bool ok = true;
            for (const auto& y : detail::candidates(s, o, b)) {
                if (s.member(y, o)) continue;
                auto v = in_closure(s, y, o, b.depth, 0);
                if (!verify(s, y, o, b.depth, 0, v)) {
                    ok = false;
                    break;
                }
                local.push_back({"semiregular", y, o, 0, b.depth, is_in(v)});
                if (is_out(v)) continue;
                bool outside = false;
                auto near = s.nbhd(y, b.depth);
                for (std::size_t t = 1; t < b.samples && !outside; ++t) {
                    auto z = s.sample_in(near, 0, t);
                    if (!z || !s.member(*z, near)) continue;
                    auto w = in_closure(s, *z, o, b.depth, 0);
                    if (is_out(w) && verify(s, *z, o, b.depth, 0, w)) {
                        outside = true;
                        local.push_back({"semiregular", *z, o, 0, b.depth, false});
                    }
                }
                if (!outside) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                certified = true;
                r.certificates.insert(r.certificates.end(), local.begin(), local.end());
            }
        }
        if (!certified) r.inconclusive("no certified regular open inside O_" + std::to_string(k) + " of point #" + std::to_string(i));
    }
    return r;
}

}  // namespace qpinf

#include "doctest.h"
#include "qpinf/presentations.hpp"
#include "qpinf/singular.hpp"
#include "qpinf/skeleton_checks.hpp"

using namespace qpinf;

namespace {

template <class S>
void all_replay(const S& s, const SkeletonReport<S>& r) {
    for (const auto& c : r.certificates) CHECK(replay(s, c));
}

SkeletonBudget small() {
    SkeletonBudget b;
    b.points = 10;
    b.opens = 10;
    b.samples = 6;
    return b;
}

}  // namespace

TEST_CASE("QPinf canonical skeleton passes every clause") {
    QPPresentation q;
    auto b = small();
    for (auto r : {check_vanishing(q, b), check_superconnecting(q, b), check_inductively_superconnecting(q, b),
                   check_coregular(q, b), check_crowded(q, b), check_semiregular(q, b)}) {
        CHECK_MESSAGE(r.passed(), r.kind, ": ", r.counterexample);
        CHECK(r.checked > 0);
        all_replay(q, r);
    }
    auto c = check_canonical(q, b);
    CHECK_MESSAGE(c.passed(), c.counterexample);
    CHECK(canonicalize(q, 4, b) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("tail level of the chart-0 open with 1 -> (0,1)") {
    QPPresentation q;
    BasicOpen u{0, {{1, Interval{QuadIrrational(0), QuadIrrational(1)}}}};
    auto [m, rep] = closure_tail(q, u, 0, small());
    REQUIRE(m);
    CHECK(*m == 2);
    CHECK(*m == skeleton_tail_level(u));
    CHECK(!rep.certificates.empty());
    all_replay(q, rep);
}

TEST_CASE("qline: regular but not superconnected") {
    auto l = qline_presentation();
    auto b = small();
    CHECK(check_vanishing(l, b).passed());
    auto sc = check_superconnecting(l, b);
    CHECK(sc.verdict == Outcome::Fail);
    REQUIRE(!sc.certificates.empty());
    CHECK_FALSE(sc.certificates.back().inside);
    CHECK(replay(l, sc.certificates.back()));
    auto cr = check_coregular(l, b);
    CHECK_MESSAGE(cr.passed(), cr.counterexample);
    all_replay(l, cr);
    try {
        canonicalize(l, 3, b);
        FAIL("expected PreconditionFailed");
    } catch (const Error& e) {
        CHECK(e.kind() == "PreconditionFailed");
    }
}

TEST_CASE("Golomb with the trivial skeleton") {
    auto g = golomb_presentation();
    auto b = small();
    auto sc = check_superconnecting(g, b);
    CHECK(sc.verdict == Outcome::Fail);
    CHECK(replay(g, sc.certificates.back()));
    auto cr = check_coregular(g, b);
    CHECK(cr.verdict == Outcome::Fail);
    REQUIRE(!cr.certificates.empty());
    const auto& bad = cr.certificates.back();
    CHECK(bad.inside);
    CHECK(replay(g, bad));
    CHECK(g.closure_member(bad.point, bad.open));
}

TEST_CASE("corrupted and padded skeletons") {
    auto b = small();
    auto sw = swapped(QPPresentation{});
    auto v = check_vanishing(sw, b);
    CHECK(v.verdict == Outcome::Fail);
    CHECK(v.counterexample.find("X_2 but not in X_1") != std::string::npos);

    auto pad = padded(QPPresentation{});
    CHECK(check_vanishing(pad, b).passed());
    CHECK(check_nowhere_dense(pad, 0, 1, b).verdict == Outcome::Fail);
    CHECK(check_nowhere_dense(pad, 0, 2, b).passed());
    CHECK(canonicalize(pad, 4, b) == std::vector<std::size_t>{0, 2, 4, 6});
}

TEST_CASE("a finite discrete space is not crowded") {
    FiniteDiscrete d(5);
    auto r = check_crowded(d, small());
    CHECK(r.verdict == Outcome::Fail);
    CHECK(r.counterexample.find("isolated") != std::string::npos);
}

TEST_CASE("Zbar projective space has a canonical superskeleton") {
    OrbitSpace<ZbarAdd> z;
    auto b = small();
    auto c = check_canonical(z, b);
    CHECK_MESSAGE(c.passed(), c.counterexample);
    all_replay(z, c);
    CHECK(check_crowded(z, b).passed());
    CHECK(canonicalize(z, 3, b) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("superskeleton implies coregular and superconnecting") {
    auto b = small();
    auto meta = [&](const auto& s) {
        if (!check_superskeleton(s, b).passed()) return;
        CHECK(check_coregular(s, b).passed());
        CHECK(check_superconnecting(s, b).passed());
    };
    meta(QPPresentation{});
    meta(OrbitSpace<ZbarAdd>{});
    meta(OrbitSpace<QPos>{});
    meta(qline_presentation());
    meta(padded(QPPresentation{}));
}

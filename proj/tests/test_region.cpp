#include "doctest.h"
#include "qpinf/errors.hpp"
#include "qpinf/region.hpp"
#include "support/random_objects.hpp"

using namespace qpinf;
using namespace qpinf::testing;

namespace {

Interval I(Rational a, Rational b) { return {QuadIrrational(a), QuadIrrational(b)}; }

struct Fixture {
    std::size_t l = 3, p = 4;
    ProjPoint c = normalize({1, ratio(1, 3), -2});
    BasicOpen seed = box(c, 3, clopen_radius(2));
    BasicOpen inside = box(c, 3, clopen_radius(0));
    Region region;

    Fixture() {
        region.ladder = clopen_with_boundary(l, p, Region{{seed}, {}}, Region{{seed}, {}}, Region{}, c);
    }
};

// union over the first n rungs plus seed; clearance argument covers the rest
bool brute_member(const ProjPoint& q, const LadderRegion& l, std::size_t n) {
    for (const auto& s : l.seed())
        if (member(q, s)) return true;
    for (std::size_t m = 0; m < n; ++m)
        if (member(q, l.rung(m).ball)) return true;
    return false;
}

}  // namespace

TEST_CASE("in_closure examples") {
    Region r{{BasicOpen{0, {{1, I(0, 1)}}}}, {}};
    auto v = in_closure(unit(2), r, 6);
    CHECK(std::holds_alternative<InClosure>(v));
    CHECK(verify_closure(unit(2), r, 6, v));
    auto p = normalize({1, 5});
    auto w = in_closure(p, r, 4);
    REQUIRE(std::holds_alternative<NotInClosure>(w));
    CHECK(verify_closure(p, r, 4, w));
    auto q = normalize({1, ratio(1, 2)});
    auto u = in_closure(q, r, 4);
    REQUIRE(std::holds_alternative<InClosure>(u));
    CHECK(std::get<InClosure>(u).witness == q);
}

TEST_CASE("ladder targets repeat every point") {
    Fixture f;
    const LadderRegion& l = *f.region.ladder;
    std::size_t hits = 0;
    for (std::size_t m = 0; m < 300; ++m) {
        CHECK(l.target(m).level() == f.l);
        hits += l.target(m) == unit(f.l);
    }
    CHECK(hits >= 3);
}

TEST_CASE("rungs: centres, balls and metric containment") {
    Fixture f;
    const LadderRegion& l = *f.region.ladder;
    std::mt19937_64 g(11);
    for (std::size_t m = 0; m < 24; ++m) {
        const Rung& r = l.rung(m);
        CHECK(r.center.level() == l.attach_level());
        CHECK(member(r.center, r.ball));
        CHECK(subset(r.ball, f.seed));
        CHECK(skeleton_tail_level(r.ball) >= l.bound_level());
        for (int s = 0; s < 10; ++s) {
            auto x = random_member(g, r.ball, 8);
            CHECK(metric_off_skeleton(x, r.target, l.bound_level()) < pow2(1 - static_cast<long>(m)));
        }
    }
}

TEST_CASE("member_region") {
    Fixture f;
    const LadderRegion& l = *f.region.ladder;
    CHECK(member_region(f.c, f.region));
    CHECK_FALSE(member_region(unit(5), f.region));
    std::mt19937_64 g(12);
    for (int i = 0; i < 300; ++i) {
        ProjPoint q = i % 2 ? random_point(g, 4) : random_member(g, nbhd_base(f.c, 1 + i % 4), 6);
        CHECK(member_region(q, f.region) == brute_member(q, l, 64));
    }
}

TEST_CASE("degenerate clopen_with_boundary certifies two-sidedly") {
    Fixture f;
    auto rep = certify_boundary(f.region, f.l, 20, 8, 5);
    CHECK(rep.ok);
    CHECK(rep.boundary_samples == 20);
    CHECK(rep.interior_samples > 0);
}

TEST_CASE("avoid is respected by every rung") {
    ProjPoint c = normalize({1, 0, 0});
    BasicOpen inside = box(c, 3, clopen_radius(0));
    BasicOpen seed = box(c, 3, clopen_radius(4));
    BasicOpen avoid{0, {{1, I(ratio(1, 4), ratio(1, 3))}, {2, I(-1, 1)}}};
    REQUIRE_FALSE(meets(seed, avoid));
    auto ladder = clopen_with_boundary(3, 4, Region{{seed}, {}}, Region{{inside}, {}}, Region{{avoid}, {}}, c);
    for (std::size_t m = 0; m < 64; ++m) CHECK_FALSE(meets(ladder->rung(m).ball, avoid));
}

TEST_CASE("construction preconditions") {
    ProjPoint c = normalize({1, 2});
    BasicOpen b = box(c, 2, clopen_radius(1));
    CHECK_THROWS_AS(clopen_with_boundary(3, 3, Region{{b}, {}}, Region{{b}, {}}, Region{}, c), Error);
    CHECK_THROWS_AS(clopen_with_boundary(1, 3, Region{{b}, {}}, Region{{b}, {}}, Region{}, unit(2)), Error);
}

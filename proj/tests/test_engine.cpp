#include "qpinf/engine.hpp"
#include "qpinf/skeleton_checks.hpp"

#include "doctest.h"

#include <chrono>
#include <tuple>

using namespace qpinf;

namespace {

// Independent rank key: Num(n) -> (n, 0, 0), Pair(i, j) -> (i + j, 1, i).
std::tuple<std::size_t, int, std::size_t> oracle_key(const GammaIndex& g) {
    return g.pair ? std::tuple{g.i + g.j, 1, g.i} : std::tuple{g.i, 0, std::size_t{0}};
}

template <class E, class S>
void require_clean(const E& e, const S& s) {
    for (const auto& r : s.ledger)
        CHECK_MESSAGE(r.verdict == Outcome::Pass, to_string(r.stage), " ", r.clause, " ", r.certificate.dump());
    auto pm = e.extract_partial_map(s);
    CHECK(pm.injective);
    CHECK(pm.level_preserving);
    CHECK(pm.continuous);
    for (const auto& f : pm.failures) MESSAGE(f);
}

}  // namespace

TEST_CASE("gamma order") {
    auto e = gamma_enumerate(6);
    std::vector<std::string> s;
    for (const auto& g : e) s.push_back(to_string(g));
    CHECK(s == std::vector<std::string>{"0", "(0,0)", "1", "(0,1)", "(1,0)", "2"});
    CHECK(gamma_less(GammaIndex::num(1), GammaIndex::of(0, 1)));
    CHECK(gamma_less(GammaIndex::of(0, 1), GammaIndex::of(1, 0)));
    auto all = gamma_enumerate(300);
    for (std::size_t a = 0; a < all.size(); ++a) {
        CHECK(gamma_rank(all[a]) == a);
        CHECK(gamma_at(a) == all[a]);
        CHECK(parse_gamma(to_string(all[a])) == all[a]);
        for (std::size_t b = 0; b < all.size(); b += 7) {
            CHECK(gamma_less(all[a], all[b]) == (oracle_key(all[a]) < oracle_key(all[b])));
            CHECK((gamma_cmp(all[a], all[b]) == 0) == (a == b));
        }
    }
}

TEST_CASE("engine QP -> QP, A = B = empty") {
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p;
    Engine e(p);
    auto t0 = std::chrono::steady_clock::now();
    auto s = e.run(60);
    MESSAGE("60 stages in ", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");
    require_clean(e, s);
    CHECK(s.lev.at(GammaIndex::of(0, 0)) >= 2 + s.lev.at(GammaIndex::num(0)));
}

TEST_CASE("engine Qline -> QP embedding lands in level 0") {
    ExtensionProblem<QLineEngineSpace, ProjEngineSpace> p;
    Engine e(p);
    // past rank 54 the source carries equal boxes for (5, 0) and (5, 1)
    auto s = e.run(80);
    require_clean(e, s);
    for (const auto& [n, y] : s.y) CHECK(p.target.level(y) == 0);
}

TEST_CASE("engine QP <-> Zbar projective space, homeomorphism mode") {
    ExtensionProblem<ProjEngineSpace, OrbitEngineSpace<ZbarAdd>> p;
    p.mode = Mode::Homeo;
    CHECK_THROWS_AS(Engine(p).init(), Error);
    SkeletonBudget sb;
    sb.points = 8;
    sb.opens = 8;
    sb.samples = 4;
    p.source_canonical = check_canonical(QPPresentation{}, sb).passed();
    REQUIRE(p.source_canonical);
    Engine e(p);
    auto s = e.run(60);
    require_clean(e, s);
    std::size_t back = 0;
    for (const auto& [n, y] : s.y) back += e.role(n) == Role::Backward;
    CHECK(back > 0);
    // each backward stage takes the least unused target point
    for (std::size_t i = 0; i < back; ++i) {
        bool seen = false;
        for (const auto& [n, y] : s.y) seen = seen || y == p.target.point(i);
        CHECK_MESSAGE(seen, "target point ", i, " missing from the image");
    }
}

TEST_CASE("engine honours a finite partial map f: A -> B") {
    ProjEngineSpace q;
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p;
    auto same_level = [&](const ProjPoint& a, std::size_t from) {
        for (std::size_t i = from;; ++i) {
            auto b = q.point(i);
            if (q.level(b) == q.level(a) && b != a) return b;
        }
    };
    p.A = {q.point(3), q.unit(2)};
    p.B = {same_level(p.A[0], 5), same_level(p.A[1], 0)};
    REQUIRE(q.level(p.A[1]) == 2);
    Engine e(p);
    auto s = e.run(50);
    require_clean(e, s);
    CHECK(s.x.at(1) == p.A[0]);
    CHECK(s.y.at(1) == p.B[0]);
    CHECK(s.x.at(2) == p.A[1]);
    CHECK(s.y.at(2) == p.B[1]);

    auto bad = p;
    bad.B.pop_back();
    CHECK_THROWS_AS(Engine(bad).init(), Error);
}

TEST_CASE("engine on the shifted skeleton") {
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p{ProjEngineSpace(1), ProjEngineSpace(0)};
    Engine e(p);
    auto s = e.run(40);
    require_clean(e, s);
}

TEST_CASE("selection of a point outside prior closures") {
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p;
    Engine e(p);
    auto s = e.run(12);
    auto side = e.yside(s);
    GammaIndex g = GammaIndex::num(99);
    detail::Window<ProjEngineSpace> w;
    auto v = select_outside(side, s.lev, {}, 1, w, p.target.unit(3), 64, g);
    CHECK(p.target.level(v) == 1);

    PairKey k = s.V.begin()->first;
    std::size_t M = s.lev.at(GammaIndex::of(k.first, k.second));
    detail::Window<ProjEngineSpace> w2;
    Json trace = Json::array();
    auto u = select_outside(side, s.lev, {k}, 0, w2, p.target.unit(M + 1), 64, g, &trace);
    CHECK(p.target.level(u) == 0);
    CHECK_FALSE(p.target.closure_member(u, s.V.at(k).open));
    CHECK(trace.size() == 1);
    CHECK_THROWS_AS(select_outside(side, s.lev, {k}, M, w2, p.target.unit(M + 1), 64, g), StageFailure);
}

TEST_CASE("engine state round-trips through JSON and resumes verbatim") {
    ExtensionProblem<ProjEngineSpace, OrbitEngineSpace<ZbarAdd>> p;
    Engine e(p);
    auto s20 = e.run(20);
    auto j = e.state_json(s20);
    auto back = e.state_from_json(Json::parse(j.dump()));
    CHECK(e.state_json(back).dump() == j.dump());
    e.resume(back, 35);
    auto s35 = e.run(35);
    CHECK(e.state_json(back).dump() == e.state_json(s35).dump());
    for (std::size_t i = 0; i < s20.ledger.size(); ++i)
        CHECK(to_json(s20.ledger[i]).dump() == to_json(s35.ledger[i]).dump());
}

TEST_CASE("marked skeleton levels") {
    auto s = ProjEngineSpace::with_marks({0, 4, 6});
    CHECK(s.real(0) == 0);
    CHECK(s.real(1) == 4);
    CHECK(s.real(3) == 7);
    for (std::size_t r = 0; r < 12; ++r) {
        std::size_t l = 0;
        while (s.real(l + 1) <= r) ++l;
        CHECK(s.level(unit(r)) == l);
    }
    CHECK(ProjEngineSpace(2).real(3) == 5);
    CHECK(ProjEngineSpace(2).name() == "QPinf+2");
    CHECK_THROWS_AS(ProjEngineSpace::with_marks({0, 3, 3}), Error);
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p{s, s};
    Engine e(p);
    require_clean(e, e.run(30));
}

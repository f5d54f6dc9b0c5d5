#include "qpinf/presentation.hpp"
#include "qpinf/singular.hpp"
#include "support/random_objects.hpp"

#include "doctest.h"

#include <set>

using namespace qpinf;
using qpinf::testing::random_box;
using qpinf::testing::random_point;

static_assert(SpacePresentation<OrbitSpace<QMult>>);
static_assert(SpacePresentation<OrbitSpace<ZbarAdd>>);

namespace {

using QOrbit = OrbitSpace<QMult>;
using ZOrbit = OrbitSpace<ZbarAdd>;

QOrbit::Point lift(const ProjPoint& p) { return {p.coords()}; }
QOrbit::Open lift(const BasicOpen& b) { return {b.chart, Rational(1), b.constraints}; }

ZInf fin(long z) { return {false, z}; }
constexpr ZInf inf{true, 0};

// brute orbit test for translations: equal up to one common shift of the finite entries
bool same_z_orbit(const std::vector<ZInf>& a, const std::vector<ZInf>& b) {
    for (long g = -8; g <= 8; ++g) {
        bool eq = true;
        for (std::size_t i = 0; i < std::max(a.size(), b.size()) && eq; ++i) {
            ZInf x = i < a.size() ? a[i] : inf, y = i < b.size() ? b[i] : inf;
            eq = x.inf ? y.inf : (!y.inf && x.z + g == y.z);
        }
        if (eq) return true;
    }
    return false;
}

std::vector<std::vector<ZInf>> small_z_sequences() {
    std::vector<ZInf> vals{inf, fin(-2), fin(-1), fin(0), fin(1), fin(2)};
    std::vector<std::vector<ZInf>> out;
    for (auto a : vals)
        for (auto b : vals)
            for (auto c : vals)
                if (!(a.inf && b.inf && c.inf)) out.push_back({a, b, c});
    return out;
}

ZOpen random_zopen(std::mt19937_64& g) {
    long n = static_cast<long>(g() % 7) - 3;
    return {g() % 3 == 0, n};
}

ZOrbit::Open random_zcyl(std::mt19937_64& g, std::size_t max_index = 3) {
    ZOrbit::Open o{g() % (max_index + 1), fin(0), {}};
    for (std::size_t i = 0; i <= max_index; ++i)
        if (i != o.chart && g() % 2 == 0) o.constraints[i] = random_zopen(g);
    return o;
}

}  // namespace

TEST_CASE("axiom checks on the example models") {
    auto q = verify_singular_axioms(QMult{});
    CHECK_MESSAGE(q.ok(), q.checks[0].counterexample);
    for (const auto& c : q.checks) CHECK_MESSAGE(c.passed, c.axiom, ": ", c.counterexample);
    auto qp = verify_singular_axioms(QPos{});
    for (const auto& c : qp.checks) CHECK_MESSAGE(c.passed, c.axiom, ": ", c.counterexample);
    auto z = verify_singular_axioms(ZbarAdd{});
    for (const auto& c : z.checks) CHECK_MESSAGE(c.passed, c.axiom, ": ", c.counterexample);

    auto t = verify_singular_axioms(QTrivial{});
    CHECK_FALSE(t.ok());
    CHECK_FALSE(t.at("(iii)").passed);
    CHECK_FALSE(t.at("(iv)").passed);

    ZbarAdd two;
    two.two_sided = true;
    auto ts = verify_singular_axioms(two);
    CHECK(ts.at("(i)").passed);
    CHECK(ts.at("(iii)").passed);
    CHECK(ts.at("(iv)").passed);
    CHECK_FALSE(ts.at("(v)").passed);
    CHECK(ts.at("(v)").counterexample.find("y=inf") != std::string::npos);
}

TEST_CASE("presentation is refused when an axiom fails") {
    try {
        build_projective_presentation(QTrivial{});
        FAIL("expected AxiomFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == "AxiomFailure");
    }
    CHECK_NOTHROW(build_projective_presentation(ZbarAdd{}));
}

TEST_CASE("Q-mult quotient agrees with the projective model") {
    QOrbit s;
    std::mt19937_64 g(11);
    for (int t = 0; t < 200; ++t) {
        ProjPoint p = random_point(g);
        BasicOpen a = random_box(g, 4, t % 2 == 0), b = random_box(g, 4, t % 3 == 0);
        CHECK(s.member(lift(p), lift(a)) == member(p, a));
        CHECK(s.closure_member(lift(p), lift(a)) == closure_member(p, a));
        CHECK(s.meets(lift(a), lift(b)).has_value() == meets(a, b).has_value());
        CHECK(s.subset(lift(a), lift(b)) == subset(a, b));
        unsigned k = t % 5;
        CHECK(s.nbhd(lift(p), k) == lift(nbhd_base(p, k)));
        CHECK(s.normalize(p.coords()) == lift(p));
    }
    for (std::size_t i = 0; i < 200; ++i) {
        ProjPoint p = normalize(s.point(i).coords);
        CHECK(lift(p) == s.point(i));
    }
}

TEST_CASE("Zbar representatives match a brute orbit partition") {
    ZOrbit s;
    auto seqs = small_z_sequences();
    for (const auto& a : seqs)
        for (const auto& b : seqs)
            CHECK((s.normalize(a) == s.normalize(b)) == same_z_orbit(a, b));
    for (const auto& a : seqs) {
        auto r = s.normalize(a);
        CHECK(s.normalize(r.coords) == r);
        CHECK(r.coords[s.level(r)] == fin(0));
    }
    std::set<ZOrbit::Point> seen;
    for (std::size_t i = 0; i < 300; ++i) {
        auto p = s.point(i);
        CHECK(s.normalize(p.coords) == p);
        CHECK(seen.insert(p).second);
    }
}

TEST_CASE("Q-pos representatives prefer +1 and keep sign classes apart") {
    OrbitSpace<QPos> s;
    auto p = s.normalize({Rational(0), Rational(-3), Rational(6)});
    CHECK(p.coords == std::vector<Rational>{0, -1, 2});
    auto q = s.normalize({Rational(0), Rational(3), Rational(6)});
    CHECK(q.coords == std::vector<Rational>{0, 1, 2});
    CHECK(s.point(0).coords == std::vector<Rational>{1});
    CHECK(s.point(1).coords == std::vector<Rational>{-1});
    std::set<OrbitSpace<QPos>::Point> seen;
    for (std::size_t i = 0; i < 300; ++i) CHECK(seen.insert(s.point(i)).second);
}

TEST_CASE("Zbar cylinder algebra against brute force") {
    ZOrbit s;
    std::mt19937_64 g(5);
    std::vector<ZOrbit::Point> pts;
    std::vector<ZInf> vals{inf, fin(-4), fin(-3), fin(-2), fin(-1), fin(0), fin(1), fin(2), fin(3), fin(4), fin(9)};
    for (auto a : vals)
        for (auto b : vals)
            for (auto c : vals)
                for (auto d : {inf, fin(0), fin(5)})
                    if (!(a.inf && b.inf && c.inf && d.inf)) pts.push_back(s.normalize({a, b, c, d}));
    for (int t = 0; t < 150; ++t) {
        auto a = random_zcyl(g), b = random_zcyl(g);
        auto w = s.meets(a, b);
        bool brute = std::any_of(pts.begin(), pts.end(), [&](const auto& p) { return s.member(p, a) && s.member(p, b); });
        if (brute) CHECK(w.has_value());
        if (w) CHECK((s.member(*w, a) && s.member(*w, b)));
        if (s.subset(a, b))
            for (const auto& p : pts)
                if (s.member(p, a)) CHECK(s.member(p, b));
        for (int r = 0; r < 6; ++r) {
            const auto& p = pts[g() % pts.size()];
            bool probe = true;
            for (unsigned k = 0; k <= 24 && probe; ++k) probe = s.meets(s.nbhd(p, k), a).has_value();
            CHECK(s.closure_member(p, a) == probe);
        }
    }
}

TEST_CASE("Zbar clopen box has boundary exactly the skeleton level") {
    ZOrbit s;
    auto c = s.normalize({fin(0), fin(3), inf, fin(-1)});
    auto v = s.box(c, 5, 2);
    CHECK(s.member(c, v));
    for (std::size_t i = 0; i < 400; ++i) {
        auto p = s.point(i);
        bool cl = s.closure_member(p, v);
        CHECK(cl == (s.member(p, v) || s.level(p) >= 5));
    }
}

TEST_CASE("quotient preconditions on samples") {
    auto q = check_quotient_preconditions(QOrbit{});
    for (const auto& c : q.checks) CHECK_MESSAGE(c.passed, c.axiom, ": ", c.counterexample);
    auto z = check_quotient_preconditions(ZOrbit{});
    for (const auto& c : z.checks) CHECK_MESSAGE(c.passed, c.axiom, ": ", c.counterexample);
}

TEST_CASE("generic closure on the Zbar quotient") {
    ZOrbit s;
    auto o = s.nbhd(s.normalize({fin(0), fin(2)}), 3);
    auto y = s.unit(1);
    auto v = in_closure(s, y, o, 40);
    CHECK(is_out(v));
    CHECK(verify(s, y, o, 40, 0, v));
    auto tail = ZOrbit::Open{0, fin(0), {{1, ZOpen{true, 0}}}};
    auto w = in_closure(s, s.unit(2), tail, 40);
    CHECK(is_in(w));
    CHECK(verify(s, s.unit(2), tail, 40, 0, w));
}

#include "qpinf/homogeneity.hpp"

#include "doctest.h"

#include <random>

using namespace qpinf;

namespace {

std::string first(const std::vector<std::string>& v) { return v.empty() ? "" : v.front(); }

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

// Blocks straight from the definitions, for sets of unit vectors e_{off + i} (level = off + i).
struct OracleBlock {
    std::vector<std::size_t> A, Aeq, Aplus, Aminus, B, Beq, Bplus, Bminus;
};

std::vector<OracleBlock> oracle_blocks(std::size_t offA, std::size_t offB, const SetBijection& f,
                                       const std::vector<std::size_t>& n, std::size_t count) {
    std::vector<OracleBlock> out(n.size() - 1);
    for (std::size_t k = 0; k + 1 < n.size(); ++k) {
        auto& o = out[k];
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t la = offA + i, lfa = offB + f.fwd(i);
            if (n[k] <= la && la < n[k + 1]) {
                o.A.push_back(i);
                (lfa >= n[k + 1] ? o.Aplus : lfa < n[k] ? o.Aminus : o.Aeq).push_back(i);
            }
            std::size_t lb = offB + i, lfb = offA + f.inv(i);
            if (n[k] <= lb && lb < n[k + 1]) {
                o.B.push_back(i);
                (lfb >= n[k + 1] ? o.Bplus : lfb < n[k] ? o.Bminus : o.Beq).push_back(i);
            }
        }
    }
    return out;
}

void same_blocks(const LevelPartition& p, const std::vector<OracleBlock>& o) {
    REQUIRE(p.blocks.size() == o.size());
    for (std::size_t k = 0; k < o.size(); ++k) {
        CHECK(p.blocks[k].A == o[k].A);
        CHECK(p.blocks[k].Aeq == o[k].Aeq);
        CHECK(p.blocks[k].Aplus == o[k].Aplus);
        CHECK(p.blocks[k].Aminus == o[k].Aminus);
        CHECK(p.blocks[k].B == o[k].B);
        CHECK(p.blocks[k].Beq == o[k].Beq);
        CHECK(p.blocks[k].Bplus == o[k].Bplus);
        CHECK(p.blocks[k].Bminus == o[k].Bminus);
    }
}

void require_clean(const HomogeneityRun& r) {
    for (const auto& row : r.state.ledger)
        CHECK_MESSAGE(row.verdict == Outcome::Pass, to_string(row.stage), " ", row.clause, " ", row.certificate.dump());
    CHECK(r.map.ok());
    CHECK(r.restricts_to_f);
}

}  // namespace

TEST_CASE("depth of finite sets, {e_n} and level-0 sprays") {
    auto fin = DiscreteSet::finite("F", {unit(3), normalize({Rational(1), Rational(2)})});
    auto c = classify_depth(fin, 8);
    CHECK(c.verdict == Depth::Shallow);
    CHECK(c.exact);
    CHECK(c.m == 4);
    CHECK(replay(fin, c));

    auto e = unit_vectors();
    auto d = classify_depth(e, 8);
    CHECK(d.verdict == Depth::Deep);
    REQUIRE(d.deep_trace.size() == 9);
    for (std::size_t m = 0; m <= 8; ++m) {
        std::vector<std::size_t> expect(m);
        for (std::size_t i = 0; i < m; ++i) expect[i] = i;
        CHECK(d.deep_trace[m] == expect);
    }
    CHECK(replay(e, d));

    auto spray = level_zero_spray();
    auto s = classify_depth(spray, 8);
    CHECK(s.verdict == Depth::Shallow);
    CHECK(s.m == 1);
    CHECK(replay(spray, s));
    auto s3 = classify_depth(shifted(spray, 2), 8);
    CHECK(s3.verdict == Depth::Shallow);
    CHECK(s3.m == 3);
    CHECK(replay(shifted(spray, 2), s3));

    DiscreteSet mixed{"mixed", [](std::size_t i) { return i % 2 ? level_zero_spray().at(i / 2) : unit(i / 2); },
                      std::nullopt};
    CHECK(classify_depth(mixed, 8).verdict == Depth::Unknown);
}

TEST_CASE("shallow witnesses: closures meet exactly in Y_support, and supersets stay witnesses") {
    auto spray = level_zero_spray();
    auto c = classify_depth(spray, 6);
    REQUIRE(c.witness.size() == 2);
    CHECK_FALSE(meets(c.witness[0], c.witness[1]));
    QPPresentation q;
    for (std::size_t i = 0; i < 12; ++i) {
        auto y = q.skeleton_sample(c.support, i);
        REQUIRE(y);
        CHECK(closure_member(*y, c.witness[0]));
        CHECK(closure_member(*y, c.witness[1]));
    }
    auto bigger = c;
    bigger.witness.push_back(nbhd_base(unit(1), 3));
    CHECK(replay(spray, bigger));
    auto broken = c;
    broken.not_in_closure.pop_back();
    CHECK_FALSE(replay(spray, broken));
    for (auto k : discreteness_certificate(spray, 20)) CHECK(k > 0);
    for (auto k : discreteness_certificate(unit_vectors(), 20)) CHECK(k > 0);
}

TEST_CASE("block shuffles are bijections") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto f = SetBijection::block_shuffle(seed, 3);
        for (std::size_t i = 0; i < 40; ++i) {
            CHECK(f.inv(f.fwd(i)) == i);
            CHECK(f.fwd(i) / 3 == i / 3);
        }
    }
}

TEST_CASE("index sequence: identity") {
    auto e = unit_vectors();
    auto p = build_index_sequence(e, e, SetBijection::identity(), 6);
    CHECK(p.n_seq == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
    CHECK(p.ok());
    for (const auto& b : p.blocks) {
        CHECK(b.Aeq == b.A);
        CHECK(b.Aplus.empty());
        CHECK(b.Aminus.empty());
    }
    same_blocks(p, oracle_blocks(0, 0, SetBijection::identity(), p.n_seq, p.prefix));
    CHECK(kind_of([&] { build_index_sequence(e, level_zero_spray(), SetBijection::identity(), 6); }) ==
          "PreconditionFailed");
}

TEST_CASE("index sequence: f(e_n) = e_{n+1} has one-point A+ blocks") {
    auto a = unit_vectors(), b = unit_vectors(1);
    auto f = SetBijection::identity();
    auto p = build_index_sequence(a, b, f, 8);
    CHECK(p.n_seq == std::vector<std::size_t>{0, 2, 4, 6, 8, 10});
    CHECK_MESSAGE(p.ok(), first(p.violations));
    same_blocks(p, oracle_blocks(0, 1, f, p.n_seq, p.prefix));
    for (std::size_t k = 0; k < p.blocks.size(); ++k) CHECK(p.blocks[k].Aplus == std::vector<std::size_t>{2 * k + 1});

    auto r = reskeletonize(a, b, f, p);
    CHECK_MESSAGE(r.ok(), first(r.violations));
    CHECK_FALSE(r.pure);
    CHECK(r.layers_checked > 0);
    for (std::size_t k = 1; k < r.U.size(); ++k) {
        REQUIRE(r.U[k].size() == 1);
        const auto& piece = r.U[k][0];
        CHECK(member(a.at(piece.center), piece.box));
        for (auto [i, kk] : piece.excluded) CHECK_FALSE(meets(nbhd_base(a.at(i), kk), piece.box));
        CHECK(r.in_Y(k, a.at(2 * k + 1)));
        CHECK_FALSE(r.in_Y(k, a.at(2 * k)));
    }
    CHECK(kind_of([&] { extend_bijection(a, b, f, 20); }) == "Unsupported");
}

TEST_CASE("partition claims on randomized level-shifting bijections") {
    auto e = unit_vectors();
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto f = SetBijection::block_shuffle(seed, 2 + seed % 3);
        auto p = build_index_sequence(e, e, f, 10);
        CHECK_MESSAGE(p.ok(), first(p.violations));
        CHECK(p.claims_checked > 0);
        same_blocks(p, oracle_blocks(0, 0, f, p.n_seq, p.prefix));
        auto r = reskeletonize(e, e, f, p);
        CHECK_MESSAGE(r.ok(), first(r.violations));
    }
    auto bad = partition_levels(e, e, SetBijection::block_shuffle(1, 4), {0, 1, 2, 3, 4, 5});
    CHECK_FALSE(bad.ok());
}

TEST_CASE("identity reskeleton is a canonical superskeleton") {
    auto e = unit_vectors();
    auto p = build_index_sequence(e, e, SetBijection::identity(), 5);
    auto r = reskeletonize(e, e, SetBijection::identity(), p);
    CHECK(r.pure);
    CHECK(r.marks == std::vector<std::size_t>{0, 2, 3, 4, 5, 6});
    for (const auto& u : r.U) CHECK(u.empty());
    auto rep = certify_canonical(ProjEngineSpace::with_marks(r.marks), SkeletonBudget{6, 6, 4});
    CHECK_MESSAGE(rep.passed(), rep.counterexample);
}

TEST_CASE("extend_bijection: finite sets") {
    QPPresentation q;
    auto a = DiscreteSet::finite("A", {q.point(4), q.point(9)});
    auto b = DiscreteSet::finite("B", {unit(2), q.point(1)});
    auto run = extend_bijection(a, b, SetBijection::permutation({1, 0}), 60);
    require_clean(run);
    CHECK(run.state.x.at(1) == a.at(0));
    CHECK(run.state.y.at(1) == b.at(1));

    auto empty = DiscreteSet::finite("none", {});
    require_clean(extend_bijection(empty, empty, SetBijection::identity(), 30));
}

TEST_CASE("extend_bijection: deep pair with a level-shifting f") {
    auto e = unit_vectors();
    std::uint64_t seed = 0;
    auto f = SetBijection::block_shuffle(seed, 2);
    while (f.fwd(0) == 0 && f.fwd(2) == 2) f = SetBijection::block_shuffle(++seed, 2);
    auto run = extend_bijection(e, e, f, 45);
    REQUIRE(run.reskeleton);
    CHECK(run.reskeleton->pure);
    CHECK(run.problem.source_canonical);
    require_clean(run);
    CHECK_FALSE(run.anchored.empty());
}

TEST_CASE("extend_bijection: infinite shallow pair, mixed depth") {
    auto s = level_zero_spray();
    auto run = extend_bijection(s, shifted(s, 1), SetBijection::identity(), 30);
    require_clean(run);
    CHECK(run.problem.source.real(1) == 3);
    CHECK(kind_of([&] { extend_bijection(unit_vectors(), s, SetBijection::identity(), 10); }) == "MixedDepth");
}

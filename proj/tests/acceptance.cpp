// One line per acceptance criterion; exit status 1 if any criterion fails.
// Usage: acceptance [path-to-qpinf_cli]

#include "qpinf/cli.hpp"
#include "qpinf/engine.hpp"
#include "qpinf/homogeneity.hpp"
#include "qpinf/singular.hpp"
#include "qpinf/skeleton_checks.hpp"

#include "support/random_objects.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace qpinf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome1 {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string secs(double s) {
    std::ostringstream o;
    o.precision(2);
    o << std::fixed << s << " s";
    return o.str();
}

template <class E, class S>
void clean_ledger(const E& e, const S& s, Outcome1& out) {
    for (const auto& r : s.ledger)
        if (r.verdict != qpinf::Outcome::Pass) out.fail(to_string(r.stage) + " [" + r.clause + "] " + r.certificate.dump());
    auto pm = e.extract_partial_map(s);
    if (!pm.ok()) out.fail("partial map: " + (pm.failures.empty() ? std::string("not ok") : pm.failures.front()));
}

// 1. common skeleton tails of random finite families of basic opens
Outcome1 superconnected() {
    Outcome1 out;
    auto t0 = Clock::now();
    std::mt19937_64 g(101);
    std::size_t families = 0, witnesses = 0;
    while (families < 200) {
        std::vector<BasicOpen> fam;
        std::size_t size = 1 + g() % 5;
        while (fam.size() < size) {
            auto b = testing::random_box(g, 4, g() % 2 == 0);
            if (!b.empty()) fam.push_back(b);
        }
        ++families;
        std::size_t m = 0;
        for (const auto& b : fam) m = std::max(m, skeleton_tail_level(b));
        for (int t = 0; t < 4; ++t) {
            auto y = shift(testing::random_point(g), m + g() % 3);
            auto w = nbhd_base(y, static_cast<unsigned>(g() % 8));
            for (const auto& b : fam) {
                auto d = density_witness(b, y, w);
                ++witnesses;
                if (!member(d, b) || !member(d, w) || !closure_member(y, b)) out.fail("family " + std::to_string(families));
            }
        }
    }
    double s = since(t0);
    if (s >= 60) out.fail("runtime " + secs(s));
    if (out.ok) out.detail = "200 families, " + std::to_string(witnesses) + " density witnesses, " + secs(s);
    return out;
}

RunConfig config(std::string command, std::string source, std::string target = "") {
    RunConfig c;
    c.command = std::move(command);
    c.source = std::move(source);
    c.target = std::move(target);
    return c;
}

// 2. canonical superskeleton suites on QP^inf at sample budget 100, closure depth 8
Outcome1 canonical_superskeleton() {
    Outcome1 out;
    auto c = config("verify", "qp");
    c.samples = 100;
    c.depth = 8;
    c.checks = {"vanishing", "inductively_superconnecting", "coregular", "nowhere_dense"};
    auto t0 = Clock::now();
    auto r = run(c);
    std::size_t checked = 0;
    for (std::size_t i = 1; i < r.records.size(); ++i) {
        const auto& rec = r.records[i];
        checked += rec.at("certificate").value("checked", std::size_t{0});
        if (rec.at("verdict") != "pass")
            out.fail(rec.at("clause").get<std::string>() + ": " + rec.at("certificate").value("counterexample", ""));
    }
    if (out.ok) out.detail = std::to_string(r.records.size() - 1) + " suites, " + std::to_string(checked) + " checks, " + secs(since(t0));
    return out;
}

// 3. QP -> QP, A = B = ∅, 60 Γ-indices
Outcome1 engine_self_run() {
    Outcome1 out;
    ExtensionProblem<ProjEngineSpace, ProjEngineSpace> p;
    Engine e(p);
    auto t0 = Clock::now();
    auto s = e.run(60);
    double t = since(t0);
    clean_ledger(e, s, out);
    std::set<std::string> clauses;
    for (const auto& r : s.ledger) clauses.insert(r.clause);
    for (const char* c : {"1a", "1b", "1c", "1d", "1e", "1f", "1g", "2a", "2b", "2c", "2d", "2e", "2f", "2g", "2h", "2i"})
        if (!clauses.count(c)) out.fail("clause " + std::string(c) + " never checked");
    auto pm = e.extract_partial_map(s);
    if (!pm.injective || !pm.level_preserving || !pm.continuous) out.fail("partial map");
    if (t >= 300) out.fail("runtime " + secs(t));
    if (out.ok)
        out.detail = std::to_string(s.ledger.size()) + " ledger rows, " + std::to_string(pm.rows.size()) + " points, " +
                     std::to_string(pm.implications) + " continuity implications, " + secs(t);
    return out;
}

// 4. Qline ↪ QP, 60 stages
Outcome1 universality() {
    Outcome1 out;
    ExtensionProblem<QLineEngineSpace, ProjEngineSpace> p;
    Engine e(p);
    auto s = e.run(60);
    clean_ledger(e, s, out);
    for (const auto& [n, y] : s.y)
        if (p.target.level(y) != 0) out.fail("image of x_" + std::to_string(n) + " leaves level 0");
    if (out.ok) out.detail = std::to_string(s.y.size()) + " pairs, all images at level 0";
    return out;
}

// 5. Zbar P^inf: axioms, canonical superskeleton, Homeo QP <-> Zbar P^inf
Outcome1 cross_model() {
    Outcome1 out;
    auto ax = verify_singular_axioms(ZbarAdd{});
    if (!ax.ok()) out.fail("singular model axioms");
    SkeletonBudget sb;
    sb.points = sb.opens = 8;
    sb.samples = 6;
    auto canon_z = check_canonical(OrbitSpace<ZbarAdd>{}, sb);
    if (!canon_z.passed()) out.fail("Zbar P^inf canonical: " + canon_z.counterexample);
    auto canon_q = check_canonical(QPPresentation{}, sb);
    ExtensionProblem<ProjEngineSpace, OrbitEngineSpace<ZbarAdd>> p;
    p.mode = Mode::Homeo;
    p.source_canonical = canon_q.passed();
    Engine e(p);
    auto s = e.run(60);
    clean_ledger(e, s, out);
    std::size_t back = 0;
    for (const auto& [n, y] : s.y) back += e.role(n) == Role::Backward;
    if (back == 0) out.fail("no backward stage");
    for (std::size_t i = 0; i < back; ++i) {
        bool seen = false;
        for (const auto& [n, y] : s.y) seen = seen || y == p.target.point(i);
        if (!seen) out.fail("target point #" + std::to_string(i) + " missing from the image");
    }
    if (out.ok)
        out.detail = "axioms (i)-(v) pass, canonical skeleton certified, " + std::to_string(back) +
                     " backward stages, first " + std::to_string(back) + " target points in the image";
    return out;
}

// 6. random finite pairs with random bijections
Outcome1 finite_homogeneity() {
    Outcome1 out;
    std::mt19937_64 g(606);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 1 + g() % 4;
        auto pick = [&] {
            std::vector<ProjPoint> v;
            while (v.size() < n) {
                auto p = testing::random_point(g, 4);
                if (std::find(v.begin(), v.end(), p) == v.end()) v.push_back(p);
            }
            return v;
        };
        auto a = DiscreteSet::finite("A", pick());
        auto b = DiscreteSet::finite("B", pick());
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g);
        try {
            auto r = extend_bijection(a, b, SetBijection::permutation(perm), 60);
            for (const auto& row : r.state.ledger)
                if (row.verdict != qpinf::Outcome::Pass) out.fail("pair " + std::to_string(t) + " " + row.clause);
            if (!r.map.ok()) out.fail("pair " + std::to_string(t) + ": partial map");
            if (!r.restricts_to_f || r.anchored.size() != n) out.fail("pair " + std::to_string(t) + ": h does not restrict to f");
        } catch (const Error& e) {
            out.fail("pair " + std::to_string(t) + ": " + e.what());
        }
    }
    if (out.ok) out.detail = "20 pairs, 60 stages each, h restricted to A equals f";
    return out;
}

// 7. deep/shallow classification, claims on randomized level-shifting bijections
Outcome1 depth_pipeline() {
    Outcome1 out;
    QPPresentation q;
    auto expect = [&](const DiscreteSet& s, Depth d) {
        auto c = classify_depth(s, 12);
        if (c.verdict != d) out.fail(s.name + " classified " + to_string(c.verdict));
        else if (!replay(s, c)) out.fail(s.name + ": certificate does not replay");
    };
    expect(unit_vectors(), Depth::Deep);
    expect(DiscreteSet::finite("finite", {q.point(3), unit(2), q.point(11)}), Depth::Shallow);
    expect(level_zero_spray(), Depth::Shallow);
    expect(shifted(level_zero_spray(), 3), Depth::Shallow);

    auto e = unit_vectors();
    std::size_t claims = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto f = SetBijection::block_shuffle(seed, 2 + seed % 4);
        auto p = build_index_sequence(e, e, f, 10);
        claims += p.claims_checked;
        if (!p.ok()) out.fail("seed " + std::to_string(seed) + ": " + p.violations.front());
        // blocks straight from the definitions: a_i = e_i has level i
        for (std::size_t k = 0; k + 1 < p.n_seq.size(); ++k) {
            std::vector<std::size_t> A, plus, minus, eq;
            for (std::size_t i = 0; i < p.prefix; ++i) {
                if (i < p.n_seq[k] || i >= p.n_seq[k + 1]) continue;
                A.push_back(i);
                std::size_t l = f.fwd(i);
                (l >= p.n_seq[k + 1] ? plus : l < p.n_seq[k] ? minus : eq).push_back(i);
            }
            const auto& blk = p.blocks[k];
            if (blk.A != A || blk.Aplus != plus || blk.Aminus != minus || blk.Aeq != eq)
                out.fail("seed " + std::to_string(seed) + ": block " + std::to_string(k) + " differs from the definition");
        }
    }
    if (out.ok) out.detail = "1 deep + 3 shallow classified and replayed, 20 bijections, " + std::to_string(claims) + " claim identities";
    return out;
}

// 8. Golomb closures, b <= 30, CRT horizon 10^4
Outcome1 golomb() {
    Outcome1 out;
    auto t0 = Clock::now();
    std::size_t progressions = 0, certified = 0;
    for (unsigned long b = 1; b <= 30; ++b)
        for (unsigned long a = 1; a <= b; ++a) {
            if (gcd(mpz_class(a), mpz_class(b)) != 1) continue;
            ++progressions;
            mpz_class rad = prime_radical(mpz_class(b));
            for (unsigned long m = 1; m <= 12; ++m) {
                auto c = golomb_closure_contains({mpz_class(a), mpz_class(b)}, rad * m, 10000);
                ++certified;
                if (!c.contains || c.refutation)
                    out.fail(std::to_string(a) + "+" + std::to_string(b) + "N misses " + mpz_class(rad * m).get_str());
            }
        }
    double s = since(t0);
    if (s >= 60) out.fail("runtime " + secs(s));
    if (out.ok)
        out.detail = std::to_string(progressions) + " progressions, " + std::to_string(certified) + " multiples, 0 refutations, " + secs(s);
    return out;
}

std::vector<RunConfig> artifact_configs() {
    auto v = config("verify", "qp");
    v.samples = 12;
    auto emb = config("embed", "qline", "qp");
    auto hom = config("homeo", "qp", "zbar");
    auto cls = config("classify", "e", "e");
    cls.map = "swap";
    auto fin = config("classify", "finite:4", "finite:4");
    fin.map = "reverse";
    auto gol = config("golomb", "golomb");
    gol.horizon = 8;
    gol.depth = 500;
    gol.samples = 4;
    auto ax = config("axioms", "zbar");
    for (auto* c : {&emb, &hom, &cls, &fin}) c->stages = 60;
    return {v, config("verify", "qline"), emb, hom, cls, fin, gol, ax};
}

// 9. replay of every emitted certificate; seeded skeleton corruptions are caught
Outcome1 soundness() {
    Outcome1 out;
    std::size_t replayed = 0;
    for (const auto& c : artifact_configs()) {
        auto r = run(c);
        auto re = replay(parse_jsonl(to_jsonl(r.records)));
        replayed += re.records.size() - 1;
        if (re.exit_code != 0 || re.records.size() != r.records.size()) out.fail(c.command + " " + c.source + " does not replay");
    }
    std::mt19937_64 g(909);
    const std::vector<std::string> kinds{"swap", "repeat", "collapse", "lag", "padded", "constant"};
    std::vector<std::string> caught;
    for (int t = 0; t < 5; ++t) {
        auto kind = kinds[g() % kinds.size()];
        std::string id = "qp~" + kind + (kind == "swap" || kind == "repeat" || kind == "collapse" ? ":" + std::to_string(1 + g() % 3) : "");
        auto c = config("verify", id);
        c.samples = 12;
        auto r = run(c);
        std::string why;
        for (const auto& rec : r.records)
            if (rec.at("verdict") == "fail" && why.empty()) why = rec.at("certificate").value("counterexample", "");
        if (r.exit_code != 1 || why.empty()) out.fail(id + " not caught");
        caught.push_back(id);
    }
    if (out.ok) {
        out.detail = std::to_string(replayed) + " records replayed; caught";
        for (const auto& id : caught) out.detail += " " + id;
    }
    return out;
}

// 10. byte-identical artifacts, in process and through the executable
Outcome1 determinism(const std::string& cli) {
    Outcome1 out;
    for (const auto& c : artifact_configs())
        if (to_jsonl(run(c).records) != to_jsonl(run(c).records)) out.fail(c.command + " " + c.source);
    std::size_t files = 0;
    if (!cli.empty()) {
        auto dir = std::filesystem::temp_directory_path() / "qpinf_acceptance";
        std::filesystem::create_directories(dir);
        const std::vector<std::string> args{"--command embed --source qline --target qp --stages 60",
                                            "--command classify --source e --target e --map swap --stages 40",
                                            "--command verify --source qp --samples 16 --seed 7"};
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string text[2];
            for (int k = 0; k < 2; ++k) {
                auto path = (dir / ("run" + std::to_string(i) + "_" + std::to_string(k) + ".jsonl")).string();
                auto cmd = "\"" + cli + "\" " + args[i] + " --out \"" + path + "\"";
                int rc = std::system(cmd.c_str());
                if (rc == -1) out.fail("cannot start " + cli);
                text[k] = read_file(path);
                ++files;
            }
            if (text[0] != text[1] || text[0].empty()) out.fail("artifact differs: " + args[i]);
        }
        std::filesystem::remove_all(dir);
    }
    if (out.ok) out.detail = std::to_string(artifact_configs().size()) + " configs twice in process, " + std::to_string(files) + " CLI artifacts";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        const char* name;
        std::function<Outcome1()> check;
    };
    std::vector<Criterion> all{
        {"superconnectedness of QP^inf", superconnected},
        {"canonical superskeleton of QP^inf", canonical_superskeleton},
        {"engine self-run QP -> QP", engine_self_run},
        {"universality Qline -> QP", universality},
        {"cross-model homeomorphism QP <-> Zbar P^inf", cross_model},
        {"finite homogeneity", finite_homogeneity},
        {"deep/shallow pipeline", depth_pipeline},
        {"Golomb closure", golomb},
        {"checker soundness", soundness},
        {"determinism", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Outcome1 o;
        try {
            o = all[i].check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.ok;
        std::cout << "criterion " << i + 1 << " " << (o.ok ? "PASS" : "FAIL") << ": " << all[i].name << " (" << o.detail << ")"
                  << std::endl;
    }
    return failed ? 1 : 0;
}

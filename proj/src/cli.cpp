#include "qpinf/cli.hpp"

#include "qpinf/codec.hpp"
#include "qpinf/engine.hpp"
#include "qpinf/homogeneity.hpp"
#include "qpinf/singular.hpp"
#include "qpinf/skeleton_checks.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace qpinf {

namespace {

const std::vector<std::string> kCommands{"verify", "embed", "homeo", "classify", "golomb", "axioms"};
const std::vector<std::string> kSuite{"vanishing", "superconnecting", "inductively_superconnecting", "coregular",
                                      "nowhere_dense",  "crowded",   "semiregular"};
const std::set<std::string> kUncountable{"C", "R", "Rbar", "complex", "reals"};

Json record(const std::string& stage, const std::string& clause, Outcome v, Json cert) {
    return {{"stage", stage}, {"clause", clause}, {"verdict", to_string(v)}, {"certificate", std::move(cert)}};
}

Outcome verdict_of(const Json& r) {
    auto v = r.at("verdict").get<std::string>();
    return v == "pass" ? Outcome::Pass : v == "fail" ? Outcome::Fail : Outcome::Inconclusive;
}

[[noreturn]] void config_error(const std::string& where, const std::string& key, const std::string& what) {
    throw Error("ConfigError", where + ": '" + key + "' " + what);
}

std::pair<std::string, std::string> split(const std::string& s, char c) {
    auto i = s.find(c);
    if (i == std::string::npos) return {s, ""};
    return {s.substr(0, i), s.substr(i + 1)};
}

std::size_t to_index(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoul(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error("ConfigError", "bad number '" + s + "' in " + what);
}

SkeletonBudget skeleton_budget(const RunConfig& c) {
    SkeletonBudget b;
    b.points = b.opens = b.samples = c.samples;
    b.depth = c.depth;
    b.horizon = c.horizon;
    b.seed = c.seed;
    return b;
}

// ---- presentations --------------------------------------------------------------------

std::function<std::size_t(std::size_t)> mutation(const std::string& spec) {
    auto [kind, arg] = split(spec, ':');
    std::size_t j = arg.empty() ? 1 : to_index(arg, spec);
    if (kind == "swap") return [j](std::size_t n) { return n == j ? j + 1 : n == j + 1 ? j : n; };
    if (kind == "repeat") return [j](std::size_t n) { return n == j + 1 ? j : n; };
    if (kind == "collapse") return [j](std::size_t n) { return std::min(n, j); };
    if (kind == "constant") return [](std::size_t) { return std::size_t{0}; };
    if (kind == "padded") return [](std::size_t n) { return n / 2; };
    if (kind == "lag") return [](std::size_t n) { return n == 0 ? 0 : n - 1; };
    if (kind == "shift") return [j](std::size_t n) { return n == 0 ? 0 : n + j; };
    throw Error("ConfigError", "unknown skeleton mutation '" + spec + "'");
}

template <class F>
void with_presentation(const std::string& id, F&& f) {
    if (kUncountable.count(id)) throw Error("UnsupportedModel", id + " is uncountable");
    auto [base, mut] = split(id, '~');
    if (!mut.empty()) {
        if (base != "qp") throw Error("ConfigError", "skeleton mutations apply to qp only");
        f(Reskeletoned<QPPresentation>(QPPresentation{}, mutation(mut), mut));
        return;
    }
    if (id == "qp") return f(QPPresentation{});
    if (id == "qline") return f(qline_presentation());
    if (id == "golomb") return f(golomb_presentation());
    if (id == "kirch") return f(kirch_presentation());
    if (id == "zbar") return f(OrbitSpace<ZbarAdd>{});
    if (id == "qmult") return f(OrbitSpace<QMult>{});
    if (id == "qpos") return f(OrbitSpace<QPos>{});
    if (base.starts_with("discrete:")) return f(FiniteDiscrete(to_index(base.substr(9), id)));
    throw Error("ConfigError", "unknown presentation '" + id + "'");
}

template <SpacePresentation S>
Json cert_json(const ClosureCertificate<S>& c) {
    return {{"clause", c.clause}, {"point", encode(c.point)}, {"open", encode(c.open)},
            {"n", c.n},           {"depth", c.depth},          {"inside", c.inside}};
}

template <SpacePresentation S>
ClosureCertificate<S> cert_from_json(const Json& j) {
    ClosureCertificate<S> c{j.at("clause").get<std::string>(), decoded<typename S::Point>(j.at("point")),
                            decoded<typename S::Open>(j.at("open")), j.at("n").get<std::size_t>(),
                            j.at("depth").get<unsigned>(), j.at("inside").get<bool>()};
    return c;
}

template <SpacePresentation S>
Json report_record(const std::string& stage, const SkeletonReport<S>& r) {
    Json certs = Json::array();
    for (const auto& c : r.certificates) certs.push_back(cert_json(c));
    Json body{{"kind", r.kind}, {"checked", r.checked}, {"certificates", certs}};
    if (!r.counterexample.empty()) body["counterexample"] = r.counterexample;
    return record("verify", stage, r.verdict, body);
}

template <SpacePresentation S>
std::vector<Json> verify_suite(const S& s, const RunConfig& c) {
    auto b = skeleton_budget(c);
    std::vector<Json> out;
    auto checks = c.checks.empty() ? kSuite : c.checks;
    for (const auto& name : checks) {
        if (name == "vanishing") out.push_back(report_record(name, check_vanishing(s, b)));
        else if (name == "superconnecting") out.push_back(report_record(name, check_superconnecting(s, b)));
        else if (name == "inductively_superconnecting")
            out.push_back(report_record(name, check_inductively_superconnecting(s, b)));
        else if (name == "coregular") out.push_back(report_record(name, check_coregular(s, b)));
        else if (name == "crowded") out.push_back(report_record(name, check_crowded(s, b)));
        else if (name == "semiregular") out.push_back(report_record(name, check_semiregular(s, b)));
        else if (name == "canonical") out.push_back(report_record(name, check_canonical(s, b)));
        else if (name == "nowhere_dense")
            for (std::size_t n = 0; n <= b.levels; ++n)
                out.push_back(report_record("nowhere_dense:" + std::to_string(n), check_nowhere_dense(s, n, b)));
        else throw Error("ConfigError", "unknown check '" + name + "'");
    }
    return out;
}

// ---- engine spaces --------------------------------------------------------------------

template <class F>
void with_engine_space(const std::string& id, F&& f) {
    if (kUncountable.count(id)) throw Error("UnsupportedModel", id + " is uncountable");
    if (id == "qp") return f(ProjEngineSpace{});
    if (id.starts_with("qp+")) return f(ProjEngineSpace(to_index(id.substr(3), id)));
    if (id == "qline") return f(QLineEngineSpace{});
    if (id == "zbar") return f(OrbitEngineSpace<ZbarAdd>{});
    throw Error("ConfigError", "unknown engine space '" + id + "'");
}

SkeletonReport<Reskeletoned<QPPresentation>> canonical_report(const ProjEngineSpace& s, const SkeletonBudget& b) {
    return certify_canonical(s, b);
}
SkeletonReport<QLinePresentation> canonical_report(const QLineEngineSpace&, const SkeletonBudget& b) {
    return check_canonical(qline_presentation(), b);
}
SkeletonReport<OrbitSpace<ZbarAdd>> canonical_report(const OrbitEngineSpace<ZbarAdd>& s, const SkeletonBudget& b) {
    return check_canonical(s.space(), b);
}

EngineBudget engine_budget(const RunConfig& c) {
    EngineBudget b;
    b.samples = std::max<std::size_t>(1, std::min<std::size_t>(c.samples, 8));
    return b;
}

template <EngineSpace SX, EngineSpace SY>
ExtensionProblem<SX, SY> engine_problem(const SX& sx, const SY& sy, const RunConfig& c, std::optional<Json>* canon) {
    ExtensionProblem<SX, SY> p{sx, sy};
    p.mode = c.command == "homeo" ? Mode::Homeo : Mode::Embed;
    if (p.mode == Mode::Homeo) {
        SkeletonBudget b;
        b.points = b.opens = 8;
        b.samples = 6;
        b.seed = c.seed;
        auto r = canonical_report(sx, b);
        p.source_canonical = r.passed();
        if (canon) *canon = report_record("canonical", r);
    }
    return p;
}

template <EngineSpace SX, EngineSpace SY>
Json map_record(const PartialMap<SX, SY>& pm) {
    Json cert{{"rows", pm.rows.size()},
              {"implications", pm.implications},
              {"injective", pm.injective},
              {"level_preserving", pm.level_preserving},
              {"continuous", pm.continuous},
              {"failures", pm.failures}};
    return record("summary", "partial_map", pm.ok() ? Outcome::Pass : Outcome::Fail, cert);
}

Json failure_record(const std::string& stage, const std::string& clause, const Error& e) {
    return record(stage, clause, Outcome::Fail, {{"error", e.kind()}, {"what", e.what()}});
}

std::vector<Json> engine_command(const RunConfig& c) {
    std::vector<Json> out;
    std::string target = c.target.empty() ? "qp" : c.target;
    with_engine_space(c.source, [&](const auto& sx) {
        with_engine_space(target, [&](const auto& sy) {
            std::optional<Json> canon;
            auto p = engine_problem(sx, sy, c, &canon);
            if (canon) {
                (*canon)["stage"] = "init";
                out.push_back(*canon);
            }
            Engine e(p, engine_budget(c));
            typename decltype(e)::State s;
            try {
                s = e.init();
                while (s.cursor < c.stages) e.step(s);
            } catch (const StageFailure& f) {
                for (const auto& r : s.ledger) out.push_back(to_json(r));
                out.push_back(failure_record(to_string(f.stage()), f.clause(), f));
                return;
            } catch (const Error& f) {
                for (const auto& r : s.ledger) out.push_back(to_json(r));
                out.push_back(failure_record(s.ledger.empty() ? "init" : to_string(s.next()), f.kind(), f));
                return;
            }
            for (const auto& r : s.ledger) out.push_back(to_json(r));
            out.push_back(map_record(e.extract_partial_map(s)));
        });
    });
    return out;
}

// Rebuilds the state stage by stage from 1a/2a/2c rows and re-derives every row.
template <EngineSpace SX, EngineSpace SY>
std::vector<Json> replay_engine(const Engine<SX, SY>& e, const std::vector<Json>& rows) {
    using State = typename Engine<SX, SY>::State;
    const auto& X = e.problem().source;
    const auto& Y = e.problem().target;
    std::vector<Json> out;
    State s;
    std::size_t i = 0;
    while (i < rows.size()) {
        const auto& first = rows[i];
        std::string st = first.at("stage").get<std::string>();
        if (st == "summary") {
            auto again = map_record(e.extract_partial_map(s));
            bool same = again.dump() == first.dump();
            out.push_back(record(st, first.at("clause"), same ? Outcome::Pass : Outcome::Fail, {{"recomputed", same}}));
            ++i;
            continue;
        }
        GammaIndex g;
        try {
            g = parse_gamma(st);
        } catch (const Error&) {
            out.push_back(record(st, first.at("clause"), Outcome::Inconclusive, {{"skipped", "not an engine stage"}}));
            ++i;
            continue;
        }
        std::size_t j = i;
        std::map<std::string, Json> by_clause;
        while (j < rows.size() && rows[j].at("stage") == st) {
            by_clause[rows[j].at("clause").get<std::string>()] = rows[j];
            ++j;
        }
        bool ok = true;
        std::string why;
        try {
            if (!g.pair) {
                const auto& a = by_clause.at("1a").at("certificate");
                s.x[g.n()] = X.point_from_json(a.at("x"));
                s.y[g.n()] = Y.point_from_json(a.at("y"));
                s.lev[g] = a.at("level").template get<std::size_t>();
            } else {
                s.lev[g] = by_clause.at("2a").at("certificate").at("level").template get<std::size_t>();
                const auto& cc = by_clause.at("2c").at("certificate");
                PairKey k{g.i, g.j};
                s.U[k] = detail::region_from_json(X, cc.at("U"));
                s.V[k] = detail::region_from_json(Y, cc.at("V"));
                if (detail::region_json(X, s.U[k]) != cc.at("U") || detail::region_json(Y, s.V[k]) != cc.at("V"))
                    ok = false, why = "region does not rebuild from (center, support, radius)";
            }
            auto again = e.check_stage_invariants(s, g);
            std::size_t matched = 0;
            for (const auto& r : again) {
                auto it = by_clause.find(r.clause);
                if (it == by_clause.end() || to_json(r) != it->second) {
                    ok = false;
                    why = "row " + r.clause + " differs";
                } else {
                    ++matched;
                }
            }
            if (matched != by_clause.size() && ok) ok = false, why = "unexpected rows";
            if (!g.pair) {
                const auto& d = by_clause.at("1d").at("certificate");
                for (const auto& [key, k] : d.at("not_in_Ubar").items()) {
                    auto kk = parse_gamma(key);
                    if (X.meets(X.nbhd(s.x.at(g.n()), k.template get<unsigned>()), s.U.at({kk.i, kk.j}).open))
                        ok = false, why = "separation fails for U" + key;
                }
                for (const auto& [key, k] : d.at("not_in_Vbar").items()) {
                    auto kk = parse_gamma(key);
                    if (Y.meets(Y.nbhd(s.y.at(g.n()), k.template get<unsigned>()), s.V.at({kk.i, kk.j}).open))
                        ok = false, why = "separation fails for V" + key;
                }
            }
        } catch (const std::exception& ex) {
            ok = false;
            why = ex.what();
        }
        for (std::size_t t = i; t < j; ++t) {
            Json cert{{"rederived", ok}};
            if (!ok) cert["why"] = why;
            out.push_back(record(st, rows[t].at("clause"), ok ? Outcome::Pass : Outcome::Fail, cert));
        }
        s.cursor = gamma_rank(g) + 1;
        i = j;
    }
    return out;
}

// ---- discrete sets --------------------------------------------------------------------

DiscreteSet discrete_set(const std::string& id, std::uint64_t seed) {
    auto [base, by] = split(id, '>');
    if (!by.empty()) {
        if (by.empty() || by[0] != '>') throw Error("ConfigError", "bad set '" + id + "'");
        return shifted(discrete_set(base, seed), to_index(by.substr(1), id));
    }
    if (id == "e") return unit_vectors();
    if (id == "e1") return unit_vectors(1);
    if (id == "spray") return level_zero_spray();
    if (id.starts_with("finite:")) {
        std::size_t n = to_index(id.substr(7), id);
        std::mt19937_64 g(seed);
        std::vector<ProjPoint> pts;
        while (pts.size() < n) {
            auto p = sample_point(g, 4);
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        }
        return DiscreteSet::finite(id, std::move(pts));
    }
    throw Error("ConfigError", "unknown discrete set '" + id + "'");
}

SetBijection set_map(const std::string& spec, std::uint64_t seed, std::optional<std::size_t> size) {
    auto [kind, arg] = split(spec, ':');
    if (kind == "identity") return SetBijection::identity();
    if (kind == "swap") return SetBijection::block_shuffle(seed, 2);
    if (kind == "shuffle") return SetBijection::block_shuffle(seed, arg.empty() ? 3 : to_index(arg, spec));
    if (kind == "reverse") {
        if (!size) throw Error("ConfigError", "reverse needs finite sets");
        std::vector<std::size_t> p(*size);
        for (std::size_t i = 0; i < *size; ++i) p[i] = *size - 1 - i;
        return SetBijection::permutation(p);
    }
    throw Error("ConfigError", "unknown map '" + spec + "'");
}

HomogeneityBudget homogeneity_budget(const RunConfig& c) {
    HomogeneityBudget b;
    b.horizon = c.horizon;
    b.engine = engine_budget(c);
    b.skeleton.seed = c.seed;
    return b;
}

std::vector<Json> classify_command(const RunConfig& c) {
    std::vector<Json> out;
    auto a = discrete_set(c.source, c.seed);
    auto depth_record = [&](const char* side, const DiscreteSet& s, const DepthCertificate& d) {
        Json cert = to_json(d);
        cert["set"] = s.name;
        out.push_back(record("classify", side, d.verdict == Depth::Unknown ? Outcome::Inconclusive : Outcome::Pass, cert));
    };
    auto da = classify_depth(a, c.horizon);
    depth_record("source", a, da);
    if (c.target.empty()) return out;
    auto b = discrete_set(c.target, c.seed + 1);
    auto db = classify_depth(b, c.horizon);
    depth_record("target", b, db);
    auto f = set_map(c.map, c.seed, a.size);
    if (da.verdict == Depth::Deep && db.verdict == Depth::Deep) {
        auto p = build_index_sequence(a, b, f, c.horizon);
        out.push_back(record("partition", "claims", p.ok() ? Outcome::Pass : Outcome::Fail, to_json(p)));
        auto r = reskeletonize(a, b, f, p);
        out.push_back(record("reskeleton", "layers", r.ok() ? Outcome::Pass : Outcome::Fail, to_json(r)));
    }
    if (c.stages == 0) return out;
    try {
        auto run = extend_bijection(a, b, f, c.stages, homogeneity_budget(c));
        for (const auto& r : run.state.ledger) out.push_back(to_json(r));
        out.push_back(map_record(run.map));
        out.push_back(record("summary", "restricts_to_f", run.restricts_to_f ? Outcome::Pass : Outcome::Fail,
                             {{"anchored", run.anchored}}));
    } catch (const Error& e) {
        bool refused = e.kind() == "Unsupported" || e.kind() == "DepthUnknown";
        out.push_back(record("extend", e.kind(), refused ? Outcome::Inconclusive : Outcome::Fail, {{"what", e.what()}}));
    }
    return out;
}

// ---- golomb and axioms ----------------------------------------------------------------

std::vector<Json> golomb_command(const RunConfig& c) {
    std::vector<Json> out;
    std::size_t horizon = std::max<std::size_t>(c.depth, 1);
    for (unsigned long b = 1; b <= c.horizon; ++b)
        for (unsigned long a = 1; a <= b; ++a) {
            if (gcd(mpz_class(a), mpz_class(b)) != 1) continue;
            Progression u{mpz_class(a), mpz_class(b)};
            mpz_class rad = prime_radical(u.b);
            bool all = true;
            Json ts = Json::array();
            for (std::size_t m = 1; m <= c.samples; ++m) {
                mpz_class t = rad * static_cast<unsigned long>(m);
                auto g = golomb_closure_contains(u, t, horizon);
                all = all && g.contains;
                Json w = Json::array();
                for (const auto& [o, x] : g.sample_witnesses) w.push_back({{"nbhd", encode(o)}, {"point", encode(x)}});
                Json e{{"t", encode(t)}, {"contains", g.contains}, {"checked", g.neighbourhoods_checked}, {"witnesses", w}};
                if (g.refutation) e["refutation"] = encode(*g.refutation);
                ts.push_back(e);
            }
            out.push_back(record("golomb", std::to_string(a) + "+" + std::to_string(b) + "N", all ? Outcome::Pass : Outcome::Fail,
                                 {{"u", encode(u)}, {"radical", encode(rad)}, {"horizon", horizon}, {"multiples", ts}}));
        }
    return out;
}

template <class F>
void with_model(const std::string& id, F&& f) {
    if (kUncountable.count(id)) throw Error("UnsupportedModel", id + " is uncountable");
    if (id == "qmult") return f(QMult{});
    if (id == "qpos") return f(QPos{});
    if (id == "qtrivial") return f(QTrivial{});
    if (id == "zbar") return f(ZbarAdd{});
    if (id == "zbar2") {
        ZbarAdd z;
        z.two_sided = true;
        return f(z);
    }
    throw Error("ConfigError", "unknown model '" + id + "'");
}

std::vector<Json> axioms_command(const RunConfig& c) {
    std::vector<Json> out;
    AxiomBudget b;
    b.samples = c.samples;
    with_model(c.source, [&](const auto& m) {
        for (const auto& chk : verify_singular_axioms(m, b).checks)
            out.push_back(record("axioms", chk.axiom, chk.passed ? Outcome::Pass : Outcome::Fail,
                                 {{"model", m.name()}, {"samples", chk.samples}, {"counterexample", chk.counterexample}}));
    });
    return out;
}

std::vector<Json> body(const RunConfig& c) {
    if (c.command == "verify") {
        std::vector<Json> out;
        with_presentation(c.source, [&](const auto& s) { out = verify_suite(s, c); });
        return out;
    }
    if (c.command == "embed" || c.command == "homeo") return engine_command(c);
    if (c.command == "classify") return classify_command(c);
    if (c.command == "golomb") return golomb_command(c);
    return axioms_command(c);
}

// Recomputes deterministic records and compares them verbatim.
std::vector<Json> compare_rerun(const std::vector<Json>& old, const std::vector<Json>& again) {
    std::vector<Json> out;
    for (std::size_t i = 0; i < old.size(); ++i) {
        bool same = i < again.size() && again[i] == old[i];
        out.push_back(record(old[i].at("stage"), old[i].at("clause"), same ? Outcome::Pass : Outcome::Fail,
                             {{"recomputed", same}}));
    }
    return out;
}

}  // namespace

// ---- config ---------------------------------------------------------------------------

RunConfig config_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw Error("ConfigError", where + ": expected an object");
    RunConfig c;
    auto str = [&](const char* k, std::string& dst) {
        if (!j.contains(k)) return;
        if (!j[k].is_string()) config_error(where, k, "must be a string");
        dst = j[k].get<std::string>();
    };
    auto pos = [&](const char* k, auto& dst) {
        if (!j.contains(k)) return;
        if (!j[k].is_number_unsigned() && !(j[k].is_number_integer() && j[k].get<long long>() >= 0))
            config_error(where, k, "must be a non-negative integer");
        dst = j[k].get<std::remove_reference_t<decltype(dst)>>();
    };
    static const std::set<std::string> known{"command", "source", "target", "map",  "checks", "stages",
                                             "depth",   "samples", "horizon", "seed", "out"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) config_error(where, k, "is not a RunConfig field");
    str("command", c.command);
    str("source", c.source);
    str("target", c.target);
    str("map", c.map);
    str("out", c.out);
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) config_error(where, "checks", "must be an array of strings");
        for (const auto& x : j["checks"]) {
            if (!x.is_string()) config_error(where, "checks", "must be an array of strings");
            c.checks.push_back(x.get<std::string>());
        }
    }
    pos("stages", c.stages);
    pos("depth", c.depth);
    pos("samples", c.samples);
    pos("horizon", c.horizon);
    pos("seed", c.seed);
    return c;
}

Json to_json(const RunConfig& c) {
    return {{"command", c.command}, {"source", c.source},   {"target", c.target}, {"map", c.map},
            {"checks", c.checks},   {"stages", c.stages},   {"depth", c.depth},   {"samples", c.samples},
            {"horizon", c.horizon}, {"seed", c.seed}};
}

void validate(const RunConfig& c, const std::string& where) {
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
        config_error(where, "command", "must be one of verify, embed, homeo, classify, golomb, axioms");
    if (c.depth == 0) config_error(where, "depth", "must be positive");
    if (c.samples == 0) config_error(where, "samples", "must be positive");
    if (c.horizon == 0) config_error(where, "horizon", "must be positive");
    if (c.stages == 0 && c.command != "classify") config_error(where, "stages", "must be positive");
}

int exit_code_of(const std::vector<Json>& records) {
    bool unknown = false;
    for (const auto& r : records) {
        auto v = verdict_of(r);
        if (v == Outcome::Fail) return 1;
        if (v == Outcome::Inconclusive) unknown = true;
    }
    return unknown ? 2 : 0;
}

RunOutput run(const RunConfig& c) {
    validate(c);
    RunOutput out;
    out.records.push_back(record("header", "config", Outcome::Pass, {{"format", 1}, {"config", to_json(c)}}));
    auto rows = body(c);
    out.records.insert(out.records.end(), rows.begin(), rows.end());
    out.exit_code = exit_code_of(out.records);
    return out;
}

RunOutput replay(const std::vector<Json>& records) {
    if (records.empty() || records[0].at("stage") != "header") throw Error("ReplayError", "missing header record");
    auto c = config_from_json(records[0].at("certificate").at("config"), "header");
    validate(c, "header");
    RunOutput out;
    out.records.push_back(record("header", "replay", Outcome::Pass, {{"format", 1}, {"config", to_json(c)}}));
    std::vector<Json> rows(records.begin() + 1, records.end());
    std::vector<Json> checked;

    if (c.command == "verify") {
        with_presentation(c.source, [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            auto again = verify_suite(s, c);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& r = rows[i];
                std::size_t n = 0;
                bool ok = true;
                for (const auto& cj : r.at("certificate").at("certificates")) {
                    ok = ok && replay(s, cert_from_json<S>(cj));
                    ++n;
                }
                bool same = i < again.size() && again[i] == r;
                checked.push_back(record(r.at("stage"), r.at("clause"), ok && same ? Outcome::Pass : Outcome::Fail,
                                         {{"certificates", n}, {"replayed", ok}, {"recomputed", same}}));
            }
        });
    } else if (c.command == "embed" || c.command == "homeo") {
        std::string target = c.target.empty() ? "qp" : c.target;
        with_engine_space(c.source, [&](const auto& sx) {
            with_engine_space(target, [&](const auto& sy) {
                auto p = engine_problem(sx, sy, c, nullptr);
                p.source_canonical = true;  // replay re-derives rows; init preconditions are not rerun
                Engine e(p, engine_budget(c));
                std::vector<Json> engine_rows;
                for (const auto& r : rows) {
                    auto st = r.at("stage").get<std::string>();
                    if (st == "init") {
                        std::optional<Json> canon;
                        engine_problem(sx, sy, c, &canon);
                        (*canon)["stage"] = "init";
                        checked.push_back(record("init", r.at("clause"), *canon == r ? Outcome::Pass : Outcome::Fail,
                                                 {{"recomputed", *canon == r}}));
                    } else if (r.at("certificate").contains("error")) {
                        checked.push_back(record(st, r.at("clause"), Outcome::Inconclusive, {{"skipped", "failure record"}}));
                    } else {
                        engine_rows.push_back(r);
                    }
                }
                auto re = replay_engine(e, engine_rows);
                checked.insert(checked.end(), re.begin(), re.end());
            });
        });
    } else if (c.command == "classify") {
        auto again = classify_command(c);
        auto cmp = compare_rerun(rows, again);
        auto a = discrete_set(c.source, c.seed);
        auto b = c.target.empty() ? a : discrete_set(c.target, c.seed + 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].at("stage") != "classify") continue;
            const auto& cj = rows[i].at("certificate");
            DepthCertificate d;
            auto v = cj.at("verdict").get<std::string>();
            d.verdict = v == "shallow" ? Depth::Shallow : v == "deep" ? Depth::Deep : Depth::Unknown;
            d.horizon = cj.at("horizon").get<std::size_t>();
            d.prefix = cj.at("prefix").get<std::size_t>();
            if (d.verdict == Depth::Shallow) {
                for (const auto& w : cj.at("witness")) d.witness.push_back(decoded<BasicOpen>(w));
                for (const auto& n : cj.at("not_in_closure"))
                    d.not_in_closure.push_back({n.at(0).get<std::size_t>(), n.at(1).get<std::size_t>(), n.at(2).get<unsigned>()});
            }
            if (d.verdict == Depth::Deep) d.deep_trace = cj.at("deep_trace").get<std::vector<std::vector<std::size_t>>>();
            bool ok = d.verdict == Depth::Unknown || replay(rows[i].at("clause") == "source" ? a : b, d);
            if (!ok) cmp[i] = record("classify", rows[i].at("clause"), Outcome::Fail, {{"replayed", false}});
        }
        checked = cmp;
    } else if (c.command == "golomb") {
        auto g = golomb_presentation();
        for (const auto& r : rows) {
            const auto& cj = r.at("certificate");
            auto u = decoded<Progression>(cj.at("u"));
            auto horizon = cj.at("horizon").get<std::size_t>();
            bool ok = true;
            for (const auto& m : cj.at("multiples")) {
                auto t = decoded<mpz_class>(m.at("t"));
                for (const auto& w : m.at("witnesses")) {
                    auto o = decoded<Progression>(w.at("nbhd"));
                    auto x = decoded<mpz_class>(w.at("point"));
                    ok = ok && g.member(x, u) && g.member(x, o) && g.member(t, o);
                }
                if (m.contains("refutation")) {
                    auto o = decoded<Progression>(m.at("refutation"));
                    ok = ok && g.member(t, o) && !g.meets_in(u, o, 0);
                }
                auto again = golomb_closure_contains(u, t, horizon);
                ok = ok && again.contains == m.at("contains").get<bool>() &&
                     again.neighbourhoods_checked == m.at("checked").get<std::size_t>();
            }
            checked.push_back(record(r.at("stage"), r.at("clause"), ok ? Outcome::Pass : Outcome::Fail, {{"replayed", ok}}));
        }
    } else {
        checked = compare_rerun(rows, axioms_command(c));
    }
    out.records.insert(out.records.end(), checked.begin(), checked.end());
    out.exit_code = exit_code_of(out.records);
    return out;
}

std::string to_jsonl(const std::vector<Json>& records) {
    std::string s;
    for (const auto& r : records) s += r.dump() + "\n";
    return s;
}

std::vector<Json> parse_jsonl(const std::string& text) {
    std::vector<Json> out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw Error("ParseError", "line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("IOError", "cannot write " + tmp);
        f << text;
        if (!f) throw Error("IOError", "write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("IOError", "cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace qpinf

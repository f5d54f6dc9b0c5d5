#include "doctest.h"

#include "qpinf/cli.hpp"
#include "qpinf/errors.hpp"

#include <filesystem>

using namespace qpinf;

namespace {

RunConfig cfg(std::string command, std::string source, std::string target = "") {
    RunConfig c;
    c.command = std::move(command);
    c.source = std::move(source);
    c.target = std::move(target);
    c.samples = 4;
    c.stages = 30;
    return c;
}

const Json* find(const std::vector<Json>& rs, const std::string& clause) {
    for (const auto& r : rs)
        if (r.at("clause") == clause) return &r;
    return nullptr;
}

std::string verdict(const std::vector<Json>& rs, const std::string& clause) {
    auto* r = find(rs, clause);
    return r ? r->at("verdict").get<std::string>() : "missing";
}

std::string error_kind(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

}  // namespace

TEST_CASE("config records round-trip and reject bad fields by name") {
    auto c = cfg("classify", "e", "e1");
    c.checks = {"vanishing"};
    c.seed = 77;
    auto back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));

    Json bad = {{"command", "verify"}, {"sampels", 3}};
    try {
        config_from_json(bad, "run.json");
        FAIL("accepted an unknown key");
    } catch (const Error& e) {
        CHECK(e.kind() == "ConfigError");
        CHECK(std::string(e.what()).find("run.json: 'sampels'") != std::string::npos);
    }
    CHECK(error_kind([] { config_from_json(Json{{"stages", -3}}); }) == "ConfigError");
    CHECK(error_kind([] { config_from_json(Json{{"source", 5}}); }) == "ConfigError");
    CHECK(error_kind([] { validate(cfg("prove", "qp")); }) == "ConfigError");
    CHECK(error_kind([] { run(cfg("verify", "R")); }) == "UnsupportedModel");
    CHECK(error_kind([] { run(cfg("axioms", "C")); }) == "UnsupportedModel");
    CHECK(error_kind([] { run(cfg("verify", "nowhere")); }) == "ConfigError");
}

TEST_CASE("exit codes: fail dominates inconclusive dominates pass") {
    auto r = [](const char* v) { return Json{{"stage", "s"}, {"clause", "c"}, {"verdict", v}, {"certificate", {}}}; };
    CHECK(exit_code_of({r("pass"), r("pass")}) == 0);
    CHECK(exit_code_of({r("pass"), r("inconclusive")}) == 2);
    CHECK(exit_code_of({r("inconclusive"), r("fail"), r("pass")}) == 1);
    CHECK(exit_code_of({}) == 0);
}

TEST_CASE("JSONL helpers") {
    std::vector<Json> rs{{{"a", "1/2"}}, {{"b", {1, 2}}}};
    auto text = to_jsonl(rs);
    CHECK(text == "{\"a\":\"1/2\"}\n{\"b\":[1,2]}\n");
    CHECK(parse_jsonl(text) == rs);
    CHECK(error_kind([] { parse_jsonl("{}\n{oops\n"); }) == "ParseError");

    auto path = (std::filesystem::temp_directory_path() / "qpinf_cli_test.jsonl").string();
    write_atomic(path, text);
    CHECK(read_file(path) == text);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
}

TEST_CASE("verify: qline is coregular but not superconnecting; qp passes") {
    auto q = run(cfg("verify", "qline"));
    CHECK(q.records.front().at("stage") == "header");
    CHECK(verdict(q.records, "coregular") == "pass");
    CHECK(verdict(q.records, "superconnecting") == "fail");
    CHECK(q.exit_code == 1);

    auto c = cfg("verify", "qp");
    c.checks = {"vanishing", "inductively_superconnecting", "coregular", "nowhere_dense"};
    auto p = run(c);
    for (const auto& r : p.records) CHECK_MESSAGE(r.at("verdict") == "pass", r.dump());
    CHECK(p.exit_code == 0);
}

TEST_CASE("corrupted skeleta are caught with counterexamples") {
    for (std::string m : {"qp~swap:1", "qp~swap:2", "qp~repeat:1", "qp~collapse:2", "qp~constant", "qp~lag", "qp~padded"}) {
        CAPTURE(m);
        auto c = cfg("verify", m);
        c.checks = {"vanishing", "nowhere_dense"};
        auto out = run(c);
        CHECK(out.exit_code == 1);
        bool explained = false;
        for (const auto& r : out.records)
            if (r.at("verdict") == "fail") explained = explained || !r.at("certificate").value("counterexample", "").empty();
        CHECK(explained);
    }
}

TEST_CASE("runs are byte-identical") {
    for (auto c : {cfg("verify", "qp"), cfg("embed", "qline", "qp"), cfg("classify", "e", "e"), cfg("golomb", "golomb")}) {
        CAPTURE(c.command);
        if (c.command == "golomb") c.horizon = 5, c.depth = 60;
        if (c.command == "classify") c.map = "swap";
        CHECK(to_jsonl(run(c).records) == to_jsonl(run(c).records));
    }
}

TEST_CASE("homeo QP <-> Zbar is clean and replays") {
    auto out = run(cfg("homeo", "qp", "zbar"));
    CHECK(out.exit_code == 0);
    CHECK(verdict(out.records, "canonical") == "pass");
    CHECK(verdict(out.records, "partial_map") == "pass");
    auto re = replay(out.records);
    CHECK(re.exit_code == 0);
    CHECK(re.records.size() == out.records.size());
}

TEST_CASE("every command replays") {
    auto cl = cfg("classify", "finite:4", "finite:4");
    cl.map = "reverse";
    auto gol = cfg("golomb", "golomb");
    gol.horizon = 6;
    gol.depth = 80;
    for (const auto& c : {cfg("verify", "qline"), cfg("embed", "qp+1", "qp"), cfg("axioms", "qtrivial"), cl, gol,
                          cfg("classify", "spray", "spray>>2")}) {
        CAPTURE(c.command);
        CAPTURE(c.source);
        auto out = run(c);
        auto re = replay(parse_jsonl(to_jsonl(out.records)));
        for (const auto& r : re.records) CHECK_MESSAGE(r.at("verdict") == "pass", r.dump());
        CHECK(re.records.size() == out.records.size());
    }
}

TEST_CASE("replay rejects tampered records") {
    auto emb = run(cfg("embed", "qp", "qp")).records;
    for (auto& r : emb)
        if (r.at("clause") == "1a" && r.at("stage") == "2") {
            r["certificate"]["y"] = Json::array({"1/1", "1/3"});
            break;
        }
    CHECK(replay(emb).exit_code == 1);

    auto ver = run(cfg("verify", "qline")).records;
    for (auto& r : ver)
        if (r.at("clause") == "superconnecting") r["verdict"] = "pass";
    CHECK(replay(ver).exit_code == 1);

    auto gc = cfg("golomb", "golomb");
    gc.horizon = 4;
    gc.depth = 40;
    auto gol = run(gc).records;
    auto& w = gol.back()["certificate"]["multiples"][0]["witnesses"][0]["point"];
    w = "0";
    CHECK(replay(gol).exit_code == 1);

    auto ax = run(cfg("axioms", "zbar")).records;
    ax.back()["certificate"]["samples"] = 1;
    CHECK(replay(ax).exit_code == 1);
}

TEST_CASE("classify refuses what it cannot certify") {
    auto c = cfg("classify", "e", "e1");
    c.stages = 5;
    auto out = run(c);
    CHECK(verdict(out.records, "Unsupported") == "inconclusive");
    CHECK(out.exit_code == 2);

    auto mixed = run(cfg("classify", "e", "spray"));
    CHECK(verdict(mixed.records, "MixedDepth") == "fail");
}

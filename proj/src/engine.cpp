#include "qpinf/engine.hpp"

namespace qpinf {

std::string to_string(Mode m) { return m == Mode::Embed ? "embed" : "homeo"; }

std::string to_string(Role r) {
    switch (r) {
    case Role::Anchored: return "anchored";
    case Role::Forward: return "forward";
    case Role::Backward: return "backward";
    }
    return "?";
}

Json to_json(const LedgerRow& r) {
    Json j;
    j["stage"] = to_string(r.stage);
    j["clause"] = r.clause;
    j["verdict"] = to_string(r.verdict);
    j["certificate"] = r.certificate;
    return j;
}

LedgerRow ledger_row_from_json(const Json& j) {
    LedgerRow r;
    r.stage = parse_gamma(j.at("stage").get<std::string>());
    r.clause = j.at("clause").get<std::string>();
    auto v = j.at("verdict").get<std::string>();
    r.verdict = v == to_string(Outcome::Pass) ? Outcome::Pass : v == to_string(Outcome::Fail) ? Outcome::Fail : Outcome::Inconclusive;
    r.certificate = j.at("certificate");
    return r;
}

}  // namespace qpinf

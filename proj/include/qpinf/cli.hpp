#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpinf {

using Json = nlohmann::json;

struct RunConfig {
    std::string command;            // verify | embed | homeo | classify | golomb | axioms
    std::string source = "qp";      // presentation, engine space, discrete set or model id
    std::string target;             // engine target or second discrete set
    std::string map = "identity";   // classify: identity | swap | shuffle:B | reverse
    std::vector<std::string> checks;  // verify: subset of the suite, empty = all
    std::size_t stages = 60;
    unsigned depth = 8;
    std::size_t samples = 12;
    std::size_t horizon = 16;
    std::uint64_t seed = 1;
    std::string out;
};

// Throws Error("ConfigError") naming the offending key.
RunConfig config_from_json(const Json& j, const std::string& where = "config");
Json to_json(const RunConfig& c);
void validate(const RunConfig& c, const std::string& where = "config");

// One record per line: {stage, clause, verdict, certificate}; the first is the header.
struct RunOutput {
    std::vector<Json> records;
    int exit_code = 0;
};

RunOutput run(const RunConfig& c);
// Re-checks every certificate of a previous run's records.
RunOutput replay(const std::vector<Json>& records);

// 0 all pass, 1 any fail, 2 otherwise any inconclusive/unknown.
int exit_code_of(const std::vector<Json>& records);
std::string to_jsonl(const std::vector<Json>& records);
std::vector<Json> parse_jsonl(const std::string& text);
void write_atomic(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace qpinf

#include "qpinf/cli.hpp"
#include "qpinf/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"qpinf: skeleton checks, back-and-forth extensions and homogeneity certificates"};
    qpinf::RunConfig c;
    std::string config, replay;
    auto* o_command = app.add_option("--command", c.command, "verify | embed | homeo | classify | golomb | axioms");
    auto* o_source = app.add_option("--source", c.source, "presentation, engine space, discrete set or model");
    auto* o_target = app.add_option("--target", c.target, "target engine space or discrete set");
    auto* o_map = app.add_option("--map", c.map, "classify: identity | swap | shuffle:B | reverse");
    auto* o_checks = app.add_option("--check", c.checks, "verify: restrict to these checks");
    auto* o_stages = app.add_option("--stages", c.stages, "engine stages");
    auto* o_depth = app.add_option("--depth", c.depth, "refinement depth");
    auto* o_samples = app.add_option("--samples", c.samples, "samples per check");
    auto* o_horizon = app.add_option("--horizon", c.horizon, "level / modulus horizon");
    auto* o_seed = app.add_option("--seed", c.seed, "RNG seed");
    app.add_option("--out", c.out, "write JSONL here instead of stdout");
    app.add_option("--config", config, "JSON file with RunConfig fields; flags override it");
    app.add_option("--replay", replay, "re-check the certificates of a previous JSONL run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        qpinf::RunOutput out;
        if (!replay.empty()) {
            out = qpinf::replay(qpinf::parse_jsonl(qpinf::read_file(replay)));
        } else {
            if (!config.empty()) {
                auto flags = c;
                c = qpinf::config_from_json(qpinf::Json::parse(qpinf::read_file(config)), config);
                if (o_command->count()) c.command = flags.command;
                if (o_source->count()) c.source = flags.source;
                if (o_target->count()) c.target = flags.target;
                if (o_map->count()) c.map = flags.map;
                if (o_checks->count()) c.checks = flags.checks;
                if (o_stages->count()) c.stages = flags.stages;
                if (o_depth->count()) c.depth = flags.depth;
                if (o_samples->count()) c.samples = flags.samples;
                if (o_horizon->count()) c.horizon = flags.horizon;
                if (o_seed->count()) c.seed = flags.seed;
                if (!flags.out.empty()) c.out = flags.out;
            }
            qpinf::validate(c, config.empty() ? "flags" : config);
            out = qpinf::run(c);
        }
        auto text = qpinf::to_jsonl(out.records);
        if (c.out.empty()) std::cout << text;
        else qpinf::write_atomic(c.out, text);
        return out.exit_code;
    } catch (const qpinf::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

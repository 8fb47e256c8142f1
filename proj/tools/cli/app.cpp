// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/handles.hpp"

namespace mrcli {

namespace {

// MRSDE_LOG = error | info | debug; anything else falls back to info.
void configure_logging() {
    static const auto logger = [] {
        auto l = spdlog::stderr_logger_mt("mrsde");
        l->set_pattern("[%l] %v");
        spdlog::set_default_logger(l);
        return l;
    }();
    const char* env = std::getenv("MRSDE_LOG");
    const std::string level = env ? env : "info";
    if (level == "error") logger->set_level(spdlog::level::err);
    else if (level == "debug") logger->set_level(spdlog::level::debug);
    else logger->set_level(spdlog::level::info);
    if (env && level != "error" && level != "info" && level != "debug")
        spdlog::warn("MRSDE_LOG='{}' not recognised, using info", level);
}

std::vector<std::size_t> parse_nfe_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size() || item[0] == '-')
            throw ConfigError("--nfe", "expected a comma-separated list of positive integers");
        out.push_back(static_cast<std::size_t>(v));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    configure_logging();

    CLI::App app{"Mean-reverting diffusion fast samplers: experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> nfe_text;
    std::optional<std::size_t> workers;

    const std::map<std::string, std::pair<std::string, std::function<void(const ExperimentConfig&)>>> commands = {
        {"sample", {"Run sampling chains; writes trajectories.csv and summary.json", cmd_sample}},
        {"convergence-study",
         {"Error against a fine or closed-form reference over an NFE list; writes order_study.csv",
          cmd_convergence_study}},
        {"compare-baselines",
         {"MR samplers against posterior sampling and Euler-Maruyama; writes compare.csv", cmd_compare_baselines}},
        {"trajectory", {"Shared-basis PCA projection of sampling paths; writes trajectory_2d.csv", cmd_trajectory}},
        {"radius-report",
         {"Per-step Taylor convergence ratio per parameterization; writes radius.csv", cmd_radius_report}},
    };

    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
        sub->add_option("--seed", seed, "Master seed (overrides sampler.seed)");
        sub->add_option("--out", out_dir, "Output directory (overrides outputs.dir)");
        sub->add_option("--nfe", nfe_text, "Comma-separated NFE list (overrides nfe_list)");
        sub->add_option("--workers", workers, "Concurrent chains (overrides workers)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        Overrides overrides;
        overrides.seed = seed;
        overrides.out = out_dir;
        overrides.workers = workers;
        if (nfe_text) overrides.nfe = parse_nfe_list(*nfe_text);

        auto doc = read_config_file(config_path);
        apply_overrides(doc, overrides);
        const ExperimentConfig cfg = parse_config(doc);

        for (const auto& [name, entry] : commands) {
            if (app.got_subcommand(name)) {
                entry.second(cfg);
                return kExitOk;
            }
        }
        return kExitConfig;
    } catch (const RunError& e) {
        spdlog::error("{}", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitNumerical;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("mrsde");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mrcli

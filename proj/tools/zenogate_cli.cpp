// Copyright 2026 The zenogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// zenogate: runs the configured experiments and writes CSV, SVG and a JSON
// check summary. Exit status 0 iff every check passes, 1 if a check fails,
// 2 on configuration or input errors.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "zenogate/experiments/experiments.hpp"

namespace {

using namespace zenogate::experiments;

const std::map<std::string, std::string> kDescriptions{
    {"fig2", "no-emission probability of the CNOT pulse over a grid of Omega and gamma_cav"},
    {"cnot", "single gate run with amplitudes, fidelity and regime ratios"},
    {"scaling", "mean first-emission time and gate duration against Omega, with log-log fits"},
    {"vsystem", "mean dark period of the V-system against the weak drive, quadrature and Monte Carlo"},
    {"dfs", "decoherence-free states, complement decay rates and the measurement-time estimate"},
};

int run(const ExperimentConfig &cfg) {
    const ExperimentReport rep = run_experiment(cfg);
    for (const auto &line : rep.lines) std::cout << line << "\n";
    for (const auto &w : rep.warnings) std::cout << "warning: " << w << "\n";
    for (const auto &c : rep.checks) {
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
    }
    for (const auto &path : write_report(rep, cfg.text("run.out"))) {
        std::cout << "wrote " << path.string() << "\n";
    }
    if (!rep.passed()) {
        nlohmann::json summary = rep.checks_json();
        summary.erase("checks");
        std::cerr << summary.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Zeno-protected two-atom cavity gate experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_max;
    std::optional<int> jobs;
    app.add_option("--config", config_path, "INI file with experiment settings")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (run.out)");
    app.add_option("--seed", seed, "root seed (run.seed)");
    app.add_option("--n-max", n_max, "Fock truncation (system.n_max)");
    app.add_option("--jobs", jobs, "worker threads (run.jobs)");

    std::map<std::string, std::map<std::string, std::string>> flags;
    std::map<std::string, CLI::App *> commands;
    for (const auto &name : experiment_names()) {
        CLI::App *sub = app.add_subcommand(name, kDescriptions.at(name));
        commands[name] = sub;
        for (const auto &key : config_keys(name)) {
            sub->add_option("--" + key.name, flags[name][key.name], key.help)
                ->default_str(key.default_value);
        }
    }

    std::string csv_path;
    std::string svg_path;
    CLI::App *replot_cmd = app.add_subcommand("replot", "rebuild an SVG from a CSV written by this tool");
    replot_cmd->add_option("csv", csv_path, "input CSV")->required()->check(CLI::ExistingFile);
    replot_cmd->add_option("-o,--output", svg_path, "output SVG (default: CSV path with .svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (replot_cmd->parsed()) {
            std::ifstream in(csv_path, std::ios::binary);
            std::stringstream text;
            text << in.rdbuf();
            const auto svg = replot(text.str());
            if (!svg) {
                std::cerr << "error: this experiment has no plot\n";
                return 2;
            }
            if (svg_path.empty()) {
                svg_path = csv_path.substr(0, csv_path.rfind('.')) + ".svg";
            }
            std::ofstream(svg_path, std::ios::binary) << *svg;
            std::cout << "wrote " << svg_path << "\n";
            return 0;
        }
        for (const auto &[name, sub] : commands) {
            if (!sub->parsed()) continue;
            ExperimentConfig cfg(name);
            if (!config_path.empty()) cfg.load_ini(config_path);
            for (const auto &[key, value] : flags[name]) {
                if (sub->count("--" + key) > 0) cfg.set(key, value);
            }
            if (out_dir) cfg.set("run.out", *out_dir);
            if (seed) cfg.set("run.seed", std::to_string(*seed));
            if (jobs) cfg.set("run.jobs", std::to_string(*jobs));
            if (n_max) {
                if (!cfg.has("system.n_max")) {
                    std::cerr << "error: --n-max does not apply to '" << name << "'\n";
                    return 2;
                }
                cfg.set("system.n_max", std::to_string(*n_max));
            }
            return run(cfg);
        }
    } catch (const zenogate::InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

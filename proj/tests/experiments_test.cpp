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

#include "zenogate/experiments/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace zenogate::experiments {
namespace {

std::filesystem::path scratch(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("zenogate_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const Check *find_check(const ExperimentReport &rep, const std::string &fragment) {
    for (const auto &c : rep.checks)
        if (c.name.find(fragment) != std::string::npos) return &c;
    return nullptr;
}

TEST(Config, DefaultsMatchTheDocumentedGrid) {
    const ExperimentConfig cfg("fig2");
    EXPECT_EQ(cfg.real("grid.omega_min"), 0.002);
    EXPECT_EQ(cfg.real("grid.omega_max"), 0.2);
    EXPECT_EQ(cfg.integer("grid.omega_points"), 16);
    EXPECT_EQ(cfg.real_list("grid.gamma_cav_values"), (std::vector<double>{0, 1e-4, 1e-3, 1e-2}));
    EXPECT_EQ(cfg.real("system.kappa"), 1.0);
    EXPECT_EQ(cfg.integer("system.n_max"), 2);
}

TEST(Config, IniRoundTrip) {
    ExperimentConfig cfg("scaling");
    cfg.set("grid.omega_points", "5");
    cfg.set("system.kappa", "0.5");
    const auto dir = scratch("ini");
    std::ofstream(dir / "c.ini") << cfg.to_ini();
    ExperimentConfig back("scaling");
    back.load_ini((dir / "c.ini").string());
    EXPECT_EQ(back.to_ini(), cfg.to_ini());
    EXPECT_EQ(back.integer("grid.omega_points"), 5);
}

TEST(Config, DiagnosticsNameTheLineOrField) {
    const auto dir = scratch("bad");
    std::ofstream(dir / "syntax.ini") << "[system]\nkappa = 1\nthis line is broken\n";
    std::ofstream(dir / "type.ini") << "[system]\nkappa = fast\n";
    std::ofstream(dir / "unknown.ini") << "[system]\nkapa = 1\n";
    std::ofstream(dir / "other.ini") << "[experiment]\nname = dfs\n";
    ExperimentConfig cfg("fig2");
    const auto message = [&](const std::string &file) {
        try {
            cfg.load_ini((dir / file).string());
        } catch (const ConfigError &e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("syntax.ini").find(":3:"), std::string::npos);
    EXPECT_NE(message("type.ini").find("system.kappa"), std::string::npos);
    EXPECT_NE(message("unknown.ini").find("system.kapa"), std::string::npos);
    EXPECT_NE(message("other.ini").find("dfs"), std::string::npos);
    EXPECT_THROW(cfg.set("grid.omega_points", "1.5"), ConfigError);
    EXPECT_THROW(ExperimentConfig("fig3"), ConfigError);
}

TEST(Sweep, CsvRoundTripIsBitExact) {
    SweepResult r;
    r.experiment = "fig2";
    r.param_names = {"omega", "gamma_cav"};
    r.add({0.1, 1e-3}, "p0", 0.1 + 0.2, 1e-12);
    r.add({1.0 / 3.0, 0.0}, "fidelity", 2.0 / 3.0, 0.0);
    r.add({5e-324, 1e300}, "p0", -0.0, 1.0);
    const auto back = SweepResult::from_csv(r.to_csv());
    ASSERT_EQ(back.rows.size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].params, r.rows[i].params);
        EXPECT_EQ(back.rows[i].value, r.rows[i].value);
        EXPECT_EQ(back.rows[i].error, r.rows[i].error);
        EXPECT_EQ(back.rows[i].observable, r.rows[i].observable);
    }
    EXPECT_EQ(back.to_csv(), r.to_csv());
    EXPECT_EQ(r.to_csv().substr(0, r.to_csv().find('\n')),
              "experiment,omega,gamma_cav,observable,value,error");
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(Sweep, RejectsMalformedCsv) {
    EXPECT_THROW((void)SweepResult::from_csv("a,b\n"), ConfigError);
    EXPECT_THROW((void)SweepResult::from_csv("experiment,x,observable,value,error\nfig2,1,p0,zz,0\n"),
                 ConfigError);
    EXPECT_THROW((void)SweepResult::from_csv("experiment,x,observable,value,error\nfig2,1,p0\n"),
                 ConfigError);
}

TEST(Svg, DeterministicAndWellFormed) {
    PlotSpec spec{"t", "x", "y", true, false, {{"a & b", {0.01, 0.1}, {0.5, 0.9}}}};
    const std::string svg = render_svg(spec);
    EXPECT_EQ(svg, render_svg(spec));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("a &amp; b"), std::string::npos);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

ExperimentConfig small_fig2() {
    ExperimentConfig cfg("fig2");
    cfg.set("grid.omega_points", "6");
    cfg.set("grid.omega_min", "0.005");
    cfg.set("grid.gamma_cav_values", "0, 1e-3");
    return cfg;
}

TEST(Fig2, OneRowPerGridPointAndObservable) {
    const auto rep = run_fig2(small_fig2());
    std::set<std::pair<std::vector<double>, std::string>> seen;
    for (const auto &r : rep.data.rows) {
        EXPECT_TRUE(seen.insert({r.params, r.observable}).second);
    }
    EXPECT_EQ(rep.data.rows.size(), 6u * 2u * 4u);
    for (const char *obs : {"p0", "fidelity", "abs_amplitude_011", "in_regime"}) {
        EXPECT_EQ(rep.data.select(obs).size(), 12u) << obs;
    }
    EXPECT_TRUE(rep.passed());
}

TEST(Fig2, ParallelRunsWriteIdenticalBytes) {
    auto cfg = small_fig2();
    const auto a = write_report(run_experiment(cfg), scratch("fig2a"));
    cfg.set("run.jobs", "3");
    const auto b = write_report(run_experiment(cfg), scratch("fig2b"));
    EXPECT_EQ(slurp(a[0]), slurp(b[0]));
    EXPECT_EQ(slurp(a[1]), slurp(b[1]));
}

TEST(Fig2, SvgIsRegeneratedFromCsvAlone) {
    const auto files = write_report(run_experiment(small_fig2()), scratch("replot"));
    ASSERT_EQ(files[1].extension(), ".svg");
    const auto svg = replot(slurp(files[0]));
    ASSERT_TRUE(svg.has_value());
    EXPECT_EQ(*svg, slurp(files[1]));
}

TEST(Fig2, SpontaneousEmissionCurvePeaksInside) {
    auto cfg = small_fig2();
    cfg.set("grid.omega_min", "0.002");
    cfg.set("grid.omega_points", "10");
    const auto rep = run_fig2(cfg);
    const Check *peak = find_check(rep, "gamma_cav=0.001 P0 has an interior maximum");
    ASSERT_NE(peak, nullptr);
    EXPECT_TRUE(peak->passed);
}

TEST(Cnot, NamedInputs) {
    ExperimentConfig cfg("cnot");
    for (const std::string input : {"000", "001", "010", "011", "plus"}) {
        cfg.set("cnot.input", input);
        const auto rep = run_cnot(cfg);
        EXPECT_TRUE(rep.passed()) << input;
        EXPECT_EQ(rep.data.select("fidelity").size(), 1u);
    }
    cfg.set("cnot.input", "101");
    EXPECT_THROW((void)run_cnot(cfg), ConfigError);
}

TEST(Cnot, ControlOffFidelity) {
    ExperimentConfig cfg("cnot");
    cfg.set("cnot.input", "001");
    const auto rep = run_cnot(cfg);
    EXPECT_GE(rep.data.select("fidelity").front().value, 0.99);
    EXPECT_NEAR(rep.data.select("duration").front().value, 444.28829381583664, 1e-9);
}

TEST(Scaling, SmallGridFitsTheQuadraticLaw) {
    ExperimentConfig cfg("scaling");
    cfg.set("grid.omega_points", "4");
    const auto rep = run_scaling(cfg);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.data.select("mean_emission_time").size(), 4u);
}

TEST(Scaling, NarrowGridWarnsButStillFits) {
    ExperimentConfig cfg("scaling");
    cfg.set("grid.omega_min", "0.01");
    cfg.set("grid.omega_max", "0.02");
    cfg.set("grid.omega_points", "3");
    const auto rep = run_scaling(cfg);
    EXPECT_FALSE(rep.warnings.empty());
    EXPECT_TRUE(rep.passed());
}

TEST(VSystemExperiment, ReducedSampleRun) {
    ExperimentConfig cfg("vsystem");
    cfg.set("vsystem.samples", "2000");
    cfg.set("grid.omega_w_points", "3");
    const auto rep = run_vsystem(cfg);
    EXPECT_TRUE(rep.passed());
    const auto mc = rep.data.select("monte_carlo_mean");
    ASSERT_EQ(mc.size(), 3u);
    for (const auto &r : mc) EXPECT_GT(r.error, 0.0);
    const Check *dark = find_check(rep, "omega_w = 0");
    ASSERT_NE(dark, nullptr);
    EXPECT_TRUE(dark->passed);
}

TEST(VSystemExperiment, SameSeedSameBytes) {
    ExperimentConfig cfg("vsystem");
    cfg.set("vsystem.samples", "300");
    cfg.set("grid.omega_w_points", "2");
    const std::string a = run_vsystem(cfg).data.to_csv();
    EXPECT_EQ(a, run_vsystem(cfg).data.to_csv());
    cfg.set("run.seed", "2");
    EXPECT_NE(a, run_vsystem(cfg).data.to_csv());
}

TEST(Dfs, Listing) {
    const auto rep = run_dfs(ExperimentConfig("dfs"));
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.data.select("complement_decay_rate").size(), 22u);
    EXPECT_EQ(rep.data.select("dfs_member_decoherence_free").size(), 5u);
    ExperimentConfig big("dfs");
    big.set("system.n_max", "3");
    EXPECT_EQ(run_dfs(big).data.select("complement_decay_rate").size(), 31u);
}

TEST(Dfs, SpontaneousEmissionBreaksTheTrappedState) {
    ExperimentConfig cfg("dfs");
    cfg.set("system.gamma_cav", "0.01");
    const auto rep = run_dfs(cfg);
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(rep.checks_json()["failures"].empty());
}

TEST(Truncation, CavityRunsCarryTheRerunCheck) {
    const auto rep = run_experiment(ExperimentConfig("cnot"));
    const Check *c = find_check(rep, "n_max + 1");
    ASSERT_NE(c, nullptr);
    EXPECT_TRUE(c->passed) << c->detail;
    ExperimentConfig v("vsystem");
    v.set("vsystem.samples", "200");
    v.set("grid.omega_w_points", "2");
    EXPECT_EQ(find_check(run_experiment(v), "n_max + 1"), nullptr);
}

TEST(Truncation, FlagsAShiftInsideTheRegimeOnly) {
    ExperimentReport a;
    a.experiment = "fig2";
    a.data.experiment = "fig2";
    a.data.param_names = {"omega", "gamma_cav"};
    a.data.add({0.01, 0.0}, "p0", 0.9, 0.0);
    a.data.add({0.01, 0.0}, "in_regime", 1.0, 0.0);
    a.data.add({0.2, 0.0}, "p0", 0.7, 0.0);
    a.data.add({0.2, 0.0}, "in_regime", 0.0, 0.0);
    ExperimentReport b = a;
    b.data.rows[2].value = 0.7 + 1e-6;  // flagged point
    EXPECT_TRUE(detail::truncation_check(a, b).passed);
    b.data.rows[0].value = 0.9 + 2e-8;
    EXPECT_FALSE(detail::truncation_check(a, b).passed);
}

}  // namespace
}  // namespace zenogate::experiments

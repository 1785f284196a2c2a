// Copyright 2026 The qnvqe Authors
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

#include "qnvqe/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "qnvqe/errors.hpp"

using namespace qnvqe;

namespace {

constexpr const char *kSmall = R"(name = "small"

[model]
n_spins = 4
field = 2.0

[ansatz]
kind = "real_amplitudes"
entanglement = "linear"
layers = 1

[sweep]
key = "field"
values = [1.0, 2.0]

[run]
methods = ["GD+PSR", "QNSPSA+SPSA"]
n_samples = 2
max_iterations = 5
seed = 11
)";

std::string slurp(const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string first_line(const std::filesystem::path &file) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    return line;
}

std::filesystem::path scratch(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("qnvqe_harness_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST(Harness, ParsesSmallConfig) {
    const ExperimentConfig c = parse_experiment(kSmall);
    EXPECT_EQ(c.name, "small");
    EXPECT_EQ(c.model.n_spins, 4u);
    EXPECT_EQ(c.layers, 1u);
    EXPECT_EQ(c.sweep, SweepKey::Field);
    ASSERT_EQ(c.sweep_values.size(), 2u);
    EXPECT_EQ(c.sweep_values[0], format_number(1.0));
    ASSERT_EQ(c.methods.size(), 2u);
    EXPECT_EQ(c.methods[1], Method::QNSPSA_SPSA);
    EXPECT_EQ(c.optimizers.at(Method::GD_PSR).max_iterations, 5u);
    EXPECT_DOUBLE_EQ(c.optimizers.at(Method::QNSPSA_SPSA).eta, default_config(Method::QNSPSA_SPSA).eta);
    EXPECT_EQ(c.master_seed, 11u);
}

TEST(Harness, OverridesApplyInOrder) {
    const ExperimentConfig c = parse_experiment(
        kSmall, {"model.n_spins=6", "optimizer.eta=0.05", "optimizer.\"GD+PSR\".eta=0.2", "run.out=out/x"});
    EXPECT_EQ(c.model.n_spins, 6u);
    EXPECT_DOUBLE_EQ(c.optimizers.at(Method::GD_PSR).eta, 0.2);
    EXPECT_DOUBLE_EQ(c.optimizers.at(Method::QNSPSA_SPSA).eta, 0.05);
    EXPECT_EQ(c.out_dir, std::filesystem::path("out/x"));
}

TEST(Harness, RejectsBadConfigs) {
    EXPECT_THROW(parse_experiment(kSmall, {"model.spins=4"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"run.methods=[\"NEWTON\"]"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"model.n_spins=15"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"sweep.values=[]"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"sweep.values=[1.0, 1.0]"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"optimizer.eta=-1"}), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"model.field=\"strong\""}), ConfigError);
    EXPECT_THROW(parse_experiment("[model\nn_spins = 4"), ConfigError);
    EXPECT_THROW(parse_experiment(kSmall, {"no_equals_sign"}), ConfigError);
    EXPECT_THROW(preset_toml("paper-fig9"), ConfigError);
}

TEST(Harness, PresetsParse) {
    for (const std::string &name : preset_names()) {
        const ExperimentConfig c = parse_experiment(preset_toml(name));
        EXPECT_EQ(c.name, name);
        EXPECT_EQ(c.n_samples, 7u);
        EXPECT_FALSE(sweep_points(c).empty());
    }
    const ExperimentConfig fig3 = parse_experiment(preset_toml("paper-fig3"));
    EXPECT_EQ(fig3.methods.size(), 6u);
    EXPECT_EQ(fig3.model.n_spins, 12u);
    ASSERT_EQ(sweep_points(fig3).size(), 2u);
    EXPECT_EQ(sweep_points(fig3)[1].entanglement, Entanglement::Full);
    const ExperimentConfig fig6 = parse_experiment(preset_toml("paper-fig6"));
    EXPECT_EQ(sweep_points(fig6).front().model.n_spins, 4u);
    EXPECT_EQ(sweep_points(fig6).back().model.n_spins, 12u);
}

TEST(Harness, SeedsAreSharedAndDistinct) {
    EXPECT_EQ(init_seed(1, 0, "a"), init_seed(1, 0, "a"));
    EXPECT_NE(init_seed(1, 0, "a"), init_seed(1, 1, "a"));
    EXPECT_NE(init_seed(1, 0, "a"), init_seed(1, 0, "b"));
    EXPECT_NE(run_seed(1, Method::GD_PSR, 0, "a"), run_seed(1, Method::GD_FD, 0, "a"));
    EXPECT_NE(run_seed(1, Method::GD_PSR, 0, "a"), run_seed(2, Method::GD_PSR, 0, "a"));
}

TEST(Harness, RunsShareInitialPointAcrossMethods) {
    const ExperimentConfig c = parse_experiment(kSmall);
    const ResultTable t = run_experiment(c);
    ASSERT_EQ(t.runs.size(), 2u * 2u * 2u);
    ASSERT_EQ(t.oracles.size(), 2u);
    EXPECT_EQ(t.failures(), 0u);
    // Same (sweep point, seed index) gives the same row-0 energy for every method.
    EXPECT_DOUBLE_EQ(t.runs[0].record.rows[0].energy, t.runs[2].record.rows[0].energy);
    EXPECT_NE(t.runs[0].record.rows[0].energy, t.runs[1].record.rows[0].energy);
    for (const RunResult &r : t.runs) {
        EXPECT_EQ(r.record.rows.size(), 6u);
    }
}

TEST(Harness, SummaryStatistics) {
    ExperimentConfig c = parse_experiment(kSmall, {"run.n_samples=1"});
    const ResultTable t = run_experiment(c);
    const std::vector<SummaryRow> rows = summarize(t);
    ASSERT_EQ(rows.size(), 4u);
    for (const SummaryRow &row : rows) {
        EXPECT_EQ(row.n_runs, 1u);
        EXPECT_EQ(row.std_energy, 0.0);
    }
    EXPECT_EQ(rows[0].mean_energy, t.runs[0].record.final_row().energy);
    EXPECT_EQ(rows[0].total_evals, 5u * 2u * 8u);

    const ResultTable t2 = run_experiment(parse_experiment(kSmall));
    const SummaryRow two = summarize(t2)[0];
    const double a = t2.runs[0].record.final_row().energy;
    const double b = t2.runs[1].record.final_row().energy;
    EXPECT_NEAR(two.mean_energy, 0.5 * (a + b), 1e-15);
    EXPECT_NEAR(two.std_energy, std::abs(a - b) / std::sqrt(2.0), 1e-14);
}

TEST(Harness, WritesOutputsWithHeaders) {
    ExperimentConfig c = parse_experiment(kSmall);
    c.out_dir = scratch("headers");
    const ResultTable t = run_experiment(c);
    write_outputs(c, t);
    EXPECT_EQ(first_line(c.out_dir / "trace.csv"),
              "method,seed,sweep_key,sweep_value,iteration,energy,relative_error,objective_evals,fidelity_evals");
    EXPECT_EQ(first_line(c.out_dir / "summary.csv"),
              "method,sweep_key,sweep_value,mean_energy,std_energy,mean_rel_error,total_evals");
    EXPECT_EQ(first_line(c.out_dir / "oracle.csv").rfind("sweep_key,sweep_value", 0), 0u);
    const auto meta = nlohmann::json::parse(slurp(c.out_dir / "meta.json"));
    EXPECT_EQ(meta["master_seed"], 11);
    EXPECT_EQ(meta["failures"], 0);
    EXPECT_EQ(meta["runs"].size(), 8u);
    std::filesystem::remove_all(c.out_dir);
}

TEST(Harness, ParallelOutputIsByteIdentical) {
    ExperimentConfig serial = parse_experiment(kSmall);
    serial.out_dir = scratch("serial");
    write_outputs(serial, run_experiment(serial));
    ExperimentConfig parallel = parse_experiment(kSmall, {"run.jobs=3"});
    parallel.out_dir = scratch("parallel");
    write_outputs(parallel, run_experiment(parallel));
    for (const char *file : {"trace.csv", "summary.csv", "oracle.csv"}) {
        EXPECT_EQ(slurp(serial.out_dir / file), slurp(parallel.out_dir / file)) << file;
    }
    std::filesystem::remove_all(serial.out_dir);
    std::filesystem::remove_all(parallel.out_dir);
}

TEST(Harness, FormatNumberRoundTrips) {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}

TEST(Harness, InvariantChecksPass) {
    for (const CheckResult &r : run_invariant_checks()) {
        EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
    }
}

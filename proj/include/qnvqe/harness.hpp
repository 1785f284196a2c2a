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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnvqe/ansatz.hpp"
#include "qnvqe/optimize.hpp"
#include "qnvqe/tim.hpp"

namespace qnvqe {

enum class SweepKey : std::uint8_t { None, Field, Size, Entanglement, Ansatz };

std::string to_string(SweepKey key);
SweepKey parse_sweep_key(std::string_view text);

struct ExperimentConfig {
    std::string name = "custom";
    TimParams model;
    AnsatzKind ansatz = AnsatzKind::RealAmplitudes;
    Entanglement entanglement = Entanglement::Linear;
    std::size_t layers = 2;
    SweepKey sweep = SweepKey::None;
    std::vector<std::string> sweep_values; ///< canonical text, one per sweep point
    std::vector<Method> methods;
    std::map<Method, OptimizerConfig> optimizers; ///< resolved per method
    std::size_t n_samples = 7;
    std::uint64_t shots = 0; ///< 0 selects the exact evaluator
    std::uint64_t master_seed = 0;
    std::filesystem::path out_dir = "results";
    std::size_t jobs = 1;
};

/// One resolved grid point of a sweep.
struct SweepPoint {
    std::string value;
    TimParams model;
    AnsatzKind ansatz = AnsatzKind::RealAmplitudes;
    Entanglement entanglement = Entanglement::Linear;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig &config);

/// Names accepted by preset_config.
std::vector<std::string> preset_names();

/// TOML text of a built-in preset; throws ConfigError for unknown names.
std::string preset_toml(std::string_view name);

/// Parses TOML text, applies `key.path=value` overrides in order, resolves
/// per-method optimizer settings on top of default_config, and validates.
ExperimentConfig parse_experiment(std::string_view toml_text, const std::vector<std::string> &overrides = {});

ExperimentConfig load_experiment(const std::filesystem::path &file, const std::vector<std::string> &overrides = {});

nlohmann::json to_json(const ExperimentConfig &config);

std::uint64_t init_seed(std::uint64_t master, std::size_t seed_index, std::string_view sweep_value);
std::uint64_t run_seed(std::uint64_t master, Method method, std::size_t seed_index, std::string_view sweep_value);

struct OracleRow {
    std::string sweep_value;
    TimParams model;
    ExactSolution solution;
};

struct RunResult {
    Method method = Method::GD_PSR;
    std::size_t seed_index = 0;
    std::uint64_t seed = 0;
    std::size_t sweep_index = 0;
    std::string sweep_value;
    RunRecord record;
};

struct ResultTable {
    SweepKey sweep = SweepKey::None;
    std::vector<OracleRow> oracles; ///< one per sweep point
    std::vector<RunResult> runs;    ///< ordered by (sweep point, method, seed index)
    std::size_t failures() const;
};

ResultTable run_experiment(const ExperimentConfig &config);

struct SummaryRow {
    Method method = Method::GD_PSR;
    std::string sweep_value;
    double mean_energy = 0.0;
    double std_energy = 0.0; ///< unbiased; 0 for a single run
    double mean_rel_error = 0.0;
    std::uint64_t total_evals = 0; ///< objective plus fidelity evaluations over all seeds
    std::size_t n_runs = 0;        ///< successful runs aggregated
};

std::vector<SummaryRow> summarize(const ResultTable &table);

/// Round-trip exact scientific notation.
std::string format_number(double value);

void write_trace_csv(const ResultTable &table, const std::filesystem::path &file);
void write_summary_csv(const ResultTable &table, const std::vector<SummaryRow> &rows,
                       const std::filesystem::path &file);
void write_oracle_csv(const ResultTable &table, const std::filesystem::path &file);
void write_meta_json(const ExperimentConfig &config, const ResultTable &table, const std::filesystem::path &file);

/// Writes trace.csv, summary.csv, oracle.csv and meta.json into config.out_dir.
void write_outputs(const ExperimentConfig &config, const ResultTable &table);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick invariant suite over small systems.
std::vector<CheckResult> run_invariant_checks();

} // namespace qnvqe

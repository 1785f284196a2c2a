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

#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qnvqe/errors.hpp"
#include "qnvqe/harness.hpp"
#include "qnvqe/tim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

struct RunOptions {
    std::string config;
    std::string preset;
    std::size_t jobs = 0;
    std::string seed;
    std::string out;
    std::vector<std::string> sets;
};

int do_run(const RunOptions &o) {
    std::vector<std::string> overrides = o.sets;
    if (!o.seed.empty()) {
        overrides.push_back("run.seed=" + o.seed);
    }
    if (!o.out.empty()) {
        overrides.push_back("run.out=\"" + o.out + "\"");
    }
    if (o.jobs > 0) {
        overrides.push_back("run.jobs=" + std::to_string(o.jobs));
    }
    const qnvqe::ExperimentConfig config = o.config.empty()
                                               ? qnvqe::parse_experiment(qnvqe::preset_toml(o.preset), overrides)
                                               : qnvqe::load_experiment(o.config, overrides);
    std::size_t points = qnvqe::sweep_points(config).size();
    fmt::print(stderr, "{}: {} sweep point(s) x {} method(s) x {} seed(s), {} job(s)\n", config.name, points,
               config.methods.size(), config.n_samples, config.jobs);
    const qnvqe::ResultTable table = qnvqe::run_experiment(config);
    qnvqe::write_outputs(config, table);
    for (const qnvqe::SummaryRow &row : qnvqe::summarize(table)) {
        fmt::print("{:<14} {:>24}  mean E {:+.8f}  std {:.2e}  rel.err {:.3e}  evals {}\n",
                   qnvqe::to_string(row.method), row.sweep_value, row.mean_energy, row.std_energy,
                   row.mean_rel_error, row.total_evals);
    }
    fmt::print("wrote {}\n", config.out_dir.string());
    if (table.failures() > 0) {
        fmt::print(stderr, "{} of {} runs failed\n", table.failures(), table.runs.size());
        return kPartial;
    }
    return kOk;
}

int do_oracle(std::size_t n, double h, double j, const std::string &boundary) {
    const qnvqe::TimParams params{n, j, h, qnvqe::parse_boundary(boundary)};
    const qnvqe::ExactSolution s = qnvqe::exact_ground(qnvqe::build_tim(params));
    fmt::print("E_g {}\ndegeneracy {}\ngap {}\n", qnvqe::format_number(s.ground_energy), s.degeneracy,
               qnvqe::format_number(s.gap));
    return kOk;
}

int do_check() {
    bool all = true;
    for (const qnvqe::CheckResult &r : qnvqe::run_invariant_checks()) {
        fmt::print("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
        all = all && r.passed;
    }
    return all ? kOk : kPartial;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Variational quantum eigensolver lab for the transverse-field Ising chain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QNVQE_VERSION);

    RunOptions run;
    CLI::App *run_cmd = app.add_subcommand("run", "Run a seeded experiment batch and write CSV/JSON outputs");
    auto *config_opt = run_cmd->add_option("--config", run.config, "Experiment TOML file")->check(CLI::ExistingFile);
    std::string preset_help = "Built-in preset:";
    for (const std::string &name : qnvqe::preset_names()) {
        preset_help += " " + name;
    }
    auto *preset_opt = run_cmd->add_option("--preset", run.preset, preset_help)
                           ->check(CLI::IsMember(qnvqe::preset_names()));
    config_opt->excludes(preset_opt);
    run_cmd->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--set", run.sets, "Override a config key, e.g. --set model.field=1.5");

    std::size_t n = 12;
    double h = 2.0;
    double j = 1.0;
    std::string boundary = "ring";
    CLI::App *oracle_cmd = app.add_subcommand("oracle", "Exact ground energy, degeneracy and gap");
    oracle_cmd->set_help_flag("--help", "Print this help message and exit");
    oracle_cmd->add_option("--n", n, "Number of spins")->required();
    oracle_cmd->add_option("--h", h, "Transverse field")->capture_default_str();
    oracle_cmd->add_option("--j", j, "Coupling")->capture_default_str();
    oracle_cmd->add_option("--boundary", boundary, "ring or open")->capture_default_str();

    CLI::App *check_cmd = app.add_subcommand("check", "Run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run_cmd) {
            if (run.config.empty() && run.preset.empty()) {
                run.preset = "paper-fig3";
            }
            return do_run(run);
        }
        if (*oracle_cmd) {
            return do_oracle(n, h, j, boundary);
        }
        if (*check_cmd) {
            return do_check();
        }
    } catch (const std::invalid_argument &e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return kConfig;
    } catch (const qnvqe::ResourceError &e) {
        fmt::print(stderr, "resource limit: {}\n", e.what());
        return kConfig;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kPartial;
    }
    return kOk;
}

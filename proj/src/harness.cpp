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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <toml.hpp>

#include "qnvqe/errors.hpp"
#include "qnvqe/metric.hpp"
#include "qnvqe/random.hpp"

namespace qnvqe {

namespace {

constexpr const char *kSweepNames[] = {"none", "field", "n_spins", "entanglement", "ansatz"};

constexpr std::string_view kFig3 = R"(name = "paper-fig3"

[model]
n_spins = 12
coupling = 1.0
field = 2.0
boundary = "ring"

[ansatz]
kind = "real_amplitudes"
layers = 2

[sweep]
key = "entanglement"
values = ["linear", "full"]

[run]
methods = ["GD+SPSA", "QNBDA+PSR", "GD+FD", "COBYLA", "QNSPSA+PSR", "QNSPSA+SPSA"]
n_samples = 7
max_iterations = 300
seed = 0
out = "results/paper-fig3"
)";

constexpr std::string_view kFig4 = R"(name = "paper-fig4"

[model]
n_spins = 12
coupling = 1.0
field = 2.0
boundary = "ring"

[ansatz]
entanglement = "full"
layers = 2

[sweep]
key = "ansatz"
values = ["real_amplitudes", "efficient_su2"]

[run]
methods = ["GD+SPSA", "QNBDA+PSR", "GD+FD", "COBYLA", "QNSPSA+PSR", "QNSPSA+SPSA"]
n_samples = 7
max_iterations = 300
seed = 0
out = "results/paper-fig4"
)";

constexpr std::string_view kFig5 = R"(name = "paper-fig5"

[model]
n_spins = 12
coupling = 1.0
boundary = "ring"

[ansatz]
kind = "real_amplitudes"
entanglement = "linear"
layers = 2

[sweep]
key = "field"
values = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0]

[run]
methods = ["QNSPSA+SPSA", "QNSPSA+PSR", "QNBDA+PSR"]
n_samples = 7
max_iterations = 300
seed = 0
out = "results/paper-fig5"
)";

constexpr std::string_view kFig6 = R"(name = "paper-fig6"

[model]
coupling = 1.0
field = 2.0
boundary = "ring"

[ansatz]
kind = "real_amplitudes"
entanglement = "linear"
layers = 2

[sweep]
key = "n_spins"
values = [4, 6, 8, 10, 12]

[run]
methods = ["QNSPSA+SPSA", "QNSPSA+PSR", "QNBDA+PSR"]
n_samples = 7
max_iterations = 300
seed = 0
out = "results/paper-fig6"
)";

const std::map<std::string, std::set<std::string>> kAllowedKeys{
    {"", {"name", "model", "ansatz", "sweep", "run", "optimizer"}},
    {"model", {"n_spins", "coupling", "field", "boundary"}},
    {"ansatz", {"kind", "entanglement", "layers"}},
    {"sweep", {"key", "values"}},
    {"run", {"methods", "n_samples", "max_iterations", "seed", "shots", "out", "jobs"}},
};

const std::set<std::string> kOptimizerKeys{
    "eta",          "eta_alpha",  "spsa_decay", "spsa_a0",          "spsa_alpha",     "beta",
    "perturbation", "smoothing",  "shift",      "fd_epsilon",       "spsa_c0",        "spsa_gamma",
    "tolerance",    "patience",   "max_iterations", "cobyla_rho_begin", "cobyla_rho_end",
};

std::string path_text(const std::vector<std::string> &path) {
    std::string out;
    for (const std::string &part : path) {
        out += out.empty() ? part : "." + part;
    }
    return out;
}

std::vector<std::string> split_path(std::string_view key) {
    std::vector<std::string> parts;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (char ch : key) {
        if (ch == '"') {
            quoted = !quoted;
            was_quoted = true;
        } else if (ch == '.' && !quoted) {
            if (current.empty() && !was_quoted) {
                throw ConfigError("empty component in key '" + std::string(key) + "'");
            }
            parts.push_back(std::move(current));
            current.clear();
            was_quoted = false;
        } else {
            current += ch;
        }
    }
    if (quoted || (current.empty() && !was_quoted)) {
        throw ConfigError("malformed key '" + std::string(key) + "'");
    }
    parts.push_back(std::move(current));
    return parts;
}

void apply_override(toml::table &root, std::string_view assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' must look like key.path=value");
    }
    const std::vector<std::string> path = split_path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    toml::table *table = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        toml::node *child = table->get(path[i]);
        if (child == nullptr) {
            table->insert(path[i], toml::table{});
            child = table->get(path[i]);
        }
        table = child->as_table();
        if (table == nullptr) {
            throw ConfigError("override path '" + path_text(path) + "' crosses a non-table value");
        }
    }
    toml::table parsed;
    try {
        parsed = toml::parse("v = " + text);
    } catch (const toml::parse_error &) {
        parsed.insert("v", text);
    }
    table->insert_or_assign(path.back(), std::move(*parsed.get("v")));
}

template <typename T> std::optional<T> read(const toml::table &table, std::string_view key, std::string_view where) {
    const toml::node *node = table.get(key);
    if (node == nullptr) {
        return std::nullopt;
    }
    if constexpr (std::is_same_v<T, double>) {
        if (auto v = node->value<double>()) {
            return *v;
        }
    } else if constexpr (std::is_same_v<T, bool>) {
        if (node->is_boolean()) {
            return node->as_boolean()->get();
        }
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (node->is_string()) {
            return node->as_string()->get();
        }
    } else {
        if (node->is_integer()) {
            const std::int64_t v = node->as_integer()->get();
            if (v < 0) {
                throw ConfigError(std::string(where) + "." + std::string(key) + " must be non-negative");
            }
            return static_cast<T>(v);
        }
    }
    throw ConfigError(std::string(where) + "." + std::string(key) + " has the wrong type");
}

const toml::table &section(const toml::table &root, std::string_view name) {
    static const toml::table empty;
    const toml::node *node = root.get(name);
    if (node == nullptr) {
        return empty;
    }
    if (!node->is_table()) {
        throw ConfigError("'" + std::string(name) + "' must be a table");
    }
    return *node->as_table();
}

void check_keys(const toml::table &table, const std::set<std::string> &allowed, std::string_view where) {
    for (const auto &[key, node] : table) {
        if (!allowed.contains(std::string(key.str()))) {
            throw ConfigError("unknown key '" + std::string(key.str()) + "' in [" + std::string(where) + "]");
        }
    }
}

void apply_optimizer_keys(const toml::table &table, OptimizerConfig &c, std::string_view where) {
    check_keys(table, kOptimizerKeys, where);
    auto set = [&](std::string_view key, auto &target) {
        using T = std::decay_t<decltype(target)>;
        if (auto v = read<T>(table, key, where)) {
            target = *v;
        }
    };
    set("eta", c.eta);
    set("eta_alpha", c.eta_alpha);
    set("spsa_decay", c.spsa_decay);
    set("spsa_a0", c.spsa_a0);
    set("spsa_alpha", c.spsa_alpha);
    set("beta", c.metric.beta);
    set("perturbation", c.metric.perturbation);
    set("smoothing", c.metric.smoothing);
    set("shift", c.metric.shift);
    set("fd_epsilon", c.fd_epsilon);
    set("spsa_c0", c.spsa.c0);
    set("spsa_gamma", c.spsa.gamma);
    set("tolerance", c.tolerance);
    set("patience", c.patience);
    set("max_iterations", c.max_iterations);
    set("cobyla_rho_begin", c.cobyla_rho_begin);
    set("cobyla_rho_end", c.cobyla_rho_end);
}

std::string sweep_value_text(const toml::node &node, SweepKey key) {
    switch (key) {
    case SweepKey::Field:
        if (auto v = node.value<double>()) {
            return format_number(*v);
        }
        break;
    case SweepKey::Size:
        if (node.is_integer() && node.as_integer()->get() > 0) {
            return std::to_string(node.as_integer()->get());
        }
        break;
    case SweepKey::Entanglement:
        if (node.is_string()) {
            return to_string(parse_entanglement(node.as_string()->get()));
        }
        break;
    case SweepKey::Ansatz:
        if (node.is_string()) {
            return to_string(parse_ansatz(node.as_string()->get()));
        }
        break;
    case SweepKey::None:
        break;
    }
    throw ConfigError("sweep value has the wrong type for key '" + to_string(key) + "'");
}

void validate_optimizer(const OptimizerConfig &c) {
    auto positive = [](double v, const char *what) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(what) + " must be positive");
        }
    };
    if (!(c.eta >= 0.0) || !std::isfinite(c.eta)) {
        throw ConfigError("eta must be finite and non-negative");
    }
    if (!(c.eta_alpha >= 0.0)) {
        throw ConfigError("eta_alpha must be non-negative");
    }
    positive(c.metric.beta, "beta");
    positive(c.metric.perturbation, "perturbation");
    positive(c.fd_epsilon, "fd_epsilon");
    positive(c.spsa.c0, "spsa_c0");
    positive(c.spsa_a0, "spsa_a0");
    if (!(c.metric.shift >= 0.0)) {
        throw ConfigError("shift must be non-negative");
    }
    if (c.max_iterations < 1) {
        throw ConfigError("max_iterations must be >= 1");
    }
    if (!(c.cobyla_rho_begin > c.cobyla_rho_end && c.cobyla_rho_end > 0.0)) {
        throw ConfigError("COBYLA needs rho_begin > rho_end > 0");
    }
}

double mean_of(const std::vector<double> &values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return values.empty() ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(values.size());
}

double unbiased_std(const std::vector<double> &values, double mean) {
    if (values.size() < 2) {
        return values.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += (v - mean) * (v - mean);
    }
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

std::ofstream open_output(const std::filesystem::path &file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ResourceError("cannot open '" + file.string() + "' for writing");
    }
    return out;
}

} // namespace

std::string to_string(SweepKey key) { return kSweepNames[static_cast<int>(key)]; }

SweepKey parse_sweep_key(std::string_view text) {
    for (int i = 0; i < 5; ++i) {
        if (text == kSweepNames[i]) {
            return static_cast<SweepKey>(i);
        }
    }
    if (text == "h") {
        return SweepKey::Field;
    }
    if (text == "n" || text == "N") {
        return SweepKey::Size;
    }
    throw ConfigError("sweep key must be none, field, n_spins, entanglement or ansatz, got '" + std::string(text) +
                      "'");
}

std::vector<std::string> preset_names() { return {"paper-fig3", "paper-fig4", "paper-fig5", "paper-fig6"}; }

std::string preset_toml(std::string_view name) {
    if (name == "paper-fig3") {
        return std::string(kFig3);
    }
    if (name == "paper-fig4") {
        return std::string(kFig4);
    }
    if (name == "paper-fig5") {
        return std::string(kFig5);
    }
    if (name == "paper-fig6") {
        return std::string(kFig6);
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig parse_experiment(std::string_view toml_text, const std::vector<std::string> &overrides) {
    toml::table root;
    try {
        root = toml::parse(toml_text);
    } catch (const toml::parse_error &e) {
        throw ConfigError("TOML parse error at line " + std::to_string(e.source().begin.line) + ": " +
                          std::string(e.description()));
    }
    for (const std::string &o : overrides) {
        apply_override(root, o);
    }
    check_keys(root, kAllowedKeys.at(""), "root");

    ExperimentConfig config;
    if (auto v = read<std::string>(root, "name", "root")) {
        config.name = *v;
    }

    const toml::table &model = section(root, "model");
    check_keys(model, kAllowedKeys.at("model"), "model");
    if (auto v = read<std::size_t>(model, "n_spins", "model")) {
        config.model.n_spins = *v;
    }
    if (auto v = read<double>(model, "coupling", "model")) {
        config.model.coupling = *v;
    }
    if (auto v = read<double>(model, "field", "model")) {
        config.model.field = *v;
    }
    if (auto v = read<std::string>(model, "boundary", "model")) {
        config.model.boundary = parse_boundary(*v);
    }

    const toml::table &ansatz = section(root, "ansatz");
    check_keys(ansatz, kAllowedKeys.at("ansatz"), "ansatz");
    if (auto v = read<std::string>(ansatz, "kind", "ansatz")) {
        config.ansatz = parse_ansatz(*v);
    }
    if (auto v = read<std::string>(ansatz, "entanglement", "ansatz")) {
        config.entanglement = parse_entanglement(*v);
    }
    if (auto v = read<std::size_t>(ansatz, "layers", "ansatz")) {
        config.layers = *v;
    }

    const toml::table &sweep = section(root, "sweep");
    check_keys(sweep, kAllowedKeys.at("sweep"), "sweep");
    if (auto v = read<std::string>(sweep, "key", "sweep")) {
        config.sweep = parse_sweep_key(*v);
    }
    if (const toml::node *values = sweep.get("values")) {
        if (!values->is_array()) {
            throw ConfigError("sweep.values must be an array");
        }
        for (const toml::node &value : *values->as_array()) {
            config.sweep_values.push_back(sweep_value_text(value, config.sweep));
        }
    }
    if (config.sweep == SweepKey::None) {
        if (!config.sweep_values.empty()) {
            throw ConfigError("sweep.values given without a sweep.key");
        }
    } else if (config.sweep_values.empty()) {
        throw ConfigError("sweep.values must be non-empty");
    }
    const std::set<std::string> unique(config.sweep_values.begin(), config.sweep_values.end());
    if (unique.size() != config.sweep_values.size()) {
        throw ConfigError("sweep.values contains duplicates");
    }

    const toml::table &run = section(root, "run");
    check_keys(run, kAllowedKeys.at("run"), "run");
    if (const toml::node *methods = run.get("methods")) {
        if (!methods->is_array()) {
            throw ConfigError("run.methods must be an array of method names");
        }
        for (const toml::node &m : *methods->as_array()) {
            if (!m.is_string()) {
                throw ConfigError("run.methods must be an array of method names");
            }
            const Method method = parse_method(m.as_string()->get());
            if (std::find(config.methods.begin(), config.methods.end(), method) != config.methods.end()) {
                throw ConfigError("run.methods lists " + to_string(method) + " twice");
            }
            config.methods.push_back(method);
        }
    } else {
        config.methods = all_methods();
    }
    if (config.methods.empty()) {
        throw ConfigError("run.methods must be non-empty");
    }
    if (auto v = read<std::size_t>(run, "n_samples", "run")) {
        config.n_samples = *v;
    }
    if (config.n_samples < 1) {
        throw ConfigError("run.n_samples must be >= 1");
    }
    std::optional<std::size_t> max_iterations = read<std::size_t>(run, "max_iterations", "run");
    if (auto v = read<std::size_t>(run, "seed", "run")) {
        config.master_seed = *v;
    }
    if (auto v = read<std::size_t>(run, "shots", "run")) {
        config.shots = *v;
    }
    if (auto v = read<std::string>(run, "out", "run")) {
        config.out_dir = *v;
    }
    if (auto v = read<std::size_t>(run, "jobs", "run")) {
        config.jobs = std::max<std::size_t>(*v, 1);
    }

    const toml::table &optimizer = section(root, "optimizer");
    std::set<std::string> common_keys = kOptimizerKeys;
    for (Method m : all_methods()) {
        common_keys.insert(to_string(m));
    }
    check_keys(optimizer, common_keys, "optimizer");
    toml::table shared;
    for (const auto &[key, node] : optimizer) {
        if (kOptimizerKeys.contains(std::string(key.str()))) {
            shared.insert(key, node);
        }
    }
    for (Method m : config.methods) {
        OptimizerConfig c = default_config(m);
        if (max_iterations) {
            c.max_iterations = *max_iterations;
        }
        apply_optimizer_keys(shared, c, "optimizer");
        const toml::table &specific = section(optimizer, to_string(m));
        apply_optimizer_keys(specific, c, "optimizer." + to_string(m));
        if (config.shots > 0) {
            c.evaluator = Evaluator::with_shots(config.shots, 0);
        }
        validate_optimizer(c);
        config.optimizers[m] = c;
    }

    for (const SweepPoint &point : sweep_points(config)) {
        if (point.model.n_spins < 2 || point.model.n_spins > kMaxExactQubits) {
            throw ConfigError("n_spins must be in [2, " + std::to_string(kMaxExactQubits) +
                              "] so the exact oracle is available");
        }
        if (!std::isfinite(point.model.field) || !std::isfinite(point.model.coupling)) {
            throw ConfigError("model coupling and field must be finite");
        }
    }
    return config;
}

ExperimentConfig load_experiment(const std::filesystem::path &file, const std::vector<std::string> &overrides) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file '" + file.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment(text.str(), overrides);
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig &config) {
    const SweepPoint base{"", config.model, config.ansatz, config.entanglement};
    if (config.sweep == SweepKey::None) {
        return {base};
    }
    std::vector<SweepPoint> points;
    for (const std::string &value : config.sweep_values) {
        SweepPoint point = base;
        point.value = value;
        switch (config.sweep) {
        case SweepKey::Field:
            point.model.field = std::stod(value);
            break;
        case SweepKey::Size:
            point.model.n_spins = std::stoul(value);
            break;
        case SweepKey::Entanglement:
            point.entanglement = parse_entanglement(value);
            break;
        case SweepKey::Ansatz:
            point.ansatz = parse_ansatz(value);
            break;
        case SweepKey::None:
            break;
        }
        points.push_back(std::move(point));
    }
    return points;
}

nlohmann::json to_json(const ExperimentConfig &config) {
    nlohmann::json optimizers = nlohmann::json::object();
    for (const auto &[method, c] : config.optimizers) {
        optimizers[to_string(method)] = {
            {"eta", c.eta},
            {"eta_alpha", c.eta_alpha},
            {"spsa_decay", c.spsa_decay},
            {"spsa_a0", c.spsa_a0},
            {"spsa_alpha", c.spsa_alpha},
            {"beta", c.metric.beta},
            {"perturbation", c.metric.perturbation},
            {"smoothing", c.metric.smoothing},
            {"shift", c.metric.shift},
            {"fd_epsilon", c.fd_epsilon},
            {"spsa_c0", c.spsa.c0},
            {"spsa_gamma", c.spsa.gamma},
            {"tolerance", c.tolerance},
            {"patience", c.patience},
            {"max_iterations", c.max_iterations},
            {"cobyla_rho_begin", c.cobyla_rho_begin},
            {"cobyla_rho_end", c.cobyla_rho_end},
        };
    }
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : config.methods) {
        methods.push_back(to_string(m));
    }
    return {
        {"name", config.name},
        {"model",
         {{"n_spins", config.model.n_spins},
          {"coupling", config.model.coupling},
          {"field", config.model.field},
          {"boundary", to_string(config.model.boundary)}}},
        {"ansatz",
         {{"kind", to_string(config.ansatz)},
          {"entanglement", to_string(config.entanglement)},
          {"layers", config.layers}}},
        {"sweep", {{"key", to_string(config.sweep)}, {"values", config.sweep_values}}},
        {"run",
         {{"methods", methods},
          {"n_samples", config.n_samples},
          {"seed", config.master_seed},
          {"shots", config.shots},
          {"evaluator", config.shots > 0 ? "shots" : "exact"}}},
        {"optimizer", optimizers},
    };
}

std::uint64_t init_seed(std::uint64_t master, std::size_t seed_index, std::string_view sweep_value) {
    return mix_seed(mix_seed(mix_seed(master, stable_hash("init")), seed_index), stable_hash(sweep_value));
}

std::uint64_t run_seed(std::uint64_t master, Method method, std::size_t seed_index, std::string_view sweep_value) {
    return mix_seed(mix_seed(mix_seed(master, stable_hash(to_string(method))), seed_index), stable_hash(sweep_value));
}

std::size_t ResultTable::failures() const {
    return static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const RunResult &r) { return r.record.failed; }));
}

ResultTable run_experiment(const ExperimentConfig &config) {
    const std::vector<SweepPoint> points = sweep_points(config);
    ResultTable table;
    table.sweep = config.sweep;

    struct Prepared {
        CircuitTemplate circuit;
        PauliSum hamiltonian;
    };
    std::vector<Prepared> prepared;
    for (const SweepPoint &point : points) {
        PauliSum h = build_tim(point.model);
        table.oracles.push_back({point.value, point.model, exact_ground(h)});
        prepared.push_back({make_ansatz(point.ansatz, point.model.n_spins, config.layers, point.entanglement),
                            std::move(h)});
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        for (Method m : config.methods) {
            for (std::size_t s = 0; s < config.n_samples; ++s) {
                RunResult r;
                r.method = m;
                r.seed_index = s;
                r.seed = run_seed(config.master_seed, m, s, points[p].value);
                r.sweep_index = p;
                r.sweep_value = points[p].value;
                table.runs.push_back(std::move(r));
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < table.runs.size(); i = next++) {
            RunResult &r = table.runs[i];
            const Prepared &job = prepared[r.sweep_index];
            try {
                OptimizerConfig c = config.optimizers.at(r.method);
                c.seed = r.seed;
                Rng init(init_seed(config.master_seed, r.seed_index, r.sweep_value));
                const ParamVector theta0 = initial_parameters(job.circuit, init);
                r.record = run_vqe(job.circuit, job.hamiltonian, c, theta0,
                                   table.oracles[r.sweep_index].solution.ground_energy);
            } catch (const std::exception &e) {
                r.record.method = r.method;
                r.record.seed = r.seed;
                r.record.failed = true;
                r.record.failure = e.what();
            }
        }
    };
    const std::size_t n_workers = std::min(std::max<std::size_t>(config.jobs, 1), table.runs.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    return table;
}

std::vector<SummaryRow> summarize(const ResultTable &table) {
    if (table.runs.empty()) {
        throw UsageError("summarize needs a non-empty result table");
    }
    std::vector<SummaryRow> rows;
    std::size_t begin = 0;
    while (begin < table.runs.size()) {
        std::size_t end = begin;
        while (end < table.runs.size() && table.runs[end].sweep_index == table.runs[begin].sweep_index &&
               table.runs[end].method == table.runs[begin].method) {
            ++end;
        }
        SummaryRow row;
        row.method = table.runs[begin].method;
        row.sweep_value = table.runs[begin].sweep_value;
        std::vector<double> energies;
        std::vector<double> errors;
        for (std::size_t i = begin; i < end; ++i) {
            const RunRecord &rec = table.runs[i].record;
            if (!rec.rows.empty()) {
                row.total_evals += rec.final_row().objective_evals + rec.final_row().fidelity_evals;
            }
            if (!rec.failed && !rec.rows.empty()) {
                energies.push_back(rec.final_row().energy);
                errors.push_back(rec.final_row().relative_error);
            }
        }
        row.n_runs = energies.size();
        row.mean_energy = mean_of(energies);
        row.std_energy = unbiased_std(energies, row.mean_energy);
        row.mean_rel_error = mean_of(errors);
        rows.push_back(std::move(row));
        begin = end;
    }
    return rows;
}

std::string format_number(double value) { return fmt::format("{:.16e}", value); }

void write_trace_csv(const ResultTable &table, const std::filesystem::path &file) {
    std::ofstream out = open_output(file);
    out << "method,seed,sweep_key,sweep_value,iteration,energy,relative_error,objective_evals,fidelity_evals\n";
    const std::string key = to_string(table.sweep);
    for (const RunResult &r : table.runs) {
        const std::string prefix = fmt::format("{},{},{},{},", to_string(r.method), r.seed_index, key, r.sweep_value);
        for (const IterationRow &row : r.record.rows) {
            out << prefix
                << fmt::format("{},{},{},{},{}\n", row.k, format_number(row.energy),
                               format_number(row.relative_error), row.objective_evals, row.fidelity_evals);
        }
    }
}

void write_summary_csv(const ResultTable &table, const std::vector<SummaryRow> &rows,
                       const std::filesystem::path &file) {
    std::ofstream out = open_output(file);
    out << "method,sweep_key,sweep_value,mean_energy,std_energy,mean_rel_error,total_evals\n";
    const std::string key = to_string(table.sweep);
    for (const SummaryRow &row : rows) {
        out << fmt::format("{},{},{},{},{},{},{}\n", to_string(row.method), key, row.sweep_value,
                           format_number(row.mean_energy), format_number(row.std_energy),
                           format_number(row.mean_rel_error), row.total_evals);
    }
}

void write_oracle_csv(const ResultTable &table, const std::filesystem::path &file) {
    std::ofstream out = open_output(file);
    out << "sweep_key,sweep_value,n_spins,coupling,field,boundary,exact_energy,degeneracy,gap\n";
    const std::string key = to_string(table.sweep);
    for (const OracleRow &o : table.oracles) {
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", key, o.sweep_value, o.model.n_spins,
                           format_number(o.model.coupling), format_number(o.model.field),
                           to_string(o.model.boundary), format_number(o.solution.ground_energy),
                           o.solution.degeneracy, format_number(o.solution.gap));
    }
}

void write_meta_json(const ExperimentConfig &config, const ResultTable &table, const std::filesystem::path &file) {
    nlohmann::json runs = nlohmann::json::array();
    for (const RunResult &r : table.runs) {
        nlohmann::json entry{{"method", to_string(r.method)},
                             {"seed_index", r.seed_index},
                             {"seed", r.seed},
                             {"init_seed", init_seed(config.master_seed, r.seed_index, r.sweep_value)},
                             {"sweep_value", r.sweep_value},
                             {"n_params", r.record.n_params},
                             {"rows", r.record.rows.size()},
                             {"best_energy", r.record.best_energy},
                             {"stopped_early", r.record.stopped_early},
                             {"failed", r.record.failed}};
        if (r.record.failed) {
            entry["failure"] = r.record.failure;
        }
        runs.push_back(std::move(entry));
    }
    const nlohmann::json meta{
        {"code_version", QNVQE_VERSION},
        {"master_seed", config.master_seed},
        {"config", to_json(config)},
        {"choices",
         {{"iterations", "fixed by run.max_iterations; not stated in the source figures"},
          {"sweep_values", "h and N grids chosen for the field and size presets"},
          {"initial_parameters", "uniform on [-pi, pi], shared by all methods at the same seed index"}}},
        {"failures", table.failures()},
        {"runs", runs},
    };
    std::ofstream out = open_output(file);
    out << meta.dump(2) << "\n";
}

void write_outputs(const ExperimentConfig &config, const ResultTable &table) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw ResourceError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());
    }
    write_trace_csv(table, config.out_dir / "trace.csv");
    write_summary_csv(table, summarize(table), config.out_dir / "summary.csv");
    write_oracle_csv(table, config.out_dir / "oracle.csv");
    write_meta_json(config, table, config.out_dir / "meta.json");
}

std::vector<CheckResult> run_invariant_checks() {
    std::vector<CheckResult> out;
    auto check = [&](std::string name, auto &&body) {
        CheckResult r{std::move(name), false, ""};
        try {
            r.detail = body(r.passed);
        } catch (const std::exception &e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(r));
    };

    check("statevector norm", [](bool &ok) {
        Rng rng(1);
        double worst = 0.0;
        const CircuitTemplate c = efficient_su2(6, 3, Entanglement::Full);
        for (int t = 0; t < 20; ++t) {
            worst = std::max(worst, std::abs(bind(c, initial_parameters(c, rng)).norm_squared() - 1.0));
        }
        ok = worst < 1e-10;
        return fmt::format("max |norm - 1| = {:.3e}", worst);
    });

    check("free-fermion oracle", [](bool &ok) {
        double worst = 0.0;
        for (std::size_t n : {4u, 6u, 8u}) {
            for (double h : {0.5, 1.0, 2.0}) {
                const double e = exact_ground(build_tim({n, 1.0, h, Boundary::Ring})).ground_energy;
                double ff = 0.0;
                for (std::size_t m = 0; m < n; ++m) {
                    const double k = std::numbers::pi * (2.0 * static_cast<double>(m) + 1.0) / static_cast<double>(n);
                    ff -= std::sqrt(1.0 + h * h - 2.0 * h * std::cos(k));
                }
                worst = std::max(worst, std::abs(e - ff));
            }
        }
        ok = worst < 1e-6;
        return fmt::format("max |E_dense - E_free| = {:.3e}", worst);
    });

    check("spin-flip symmetry", [](bool &ok) {
        double worst = 0.0;
        for (std::size_t n = 2; n <= 10; ++n) {
            worst = std::max(worst, check_spinflip_symmetry(build_tim({n, 1.0, 1.3, Boundary::Ring})));
        }
        ok = worst < 1e-12;
        return fmt::format("max commutator norm = {:.3e}", worst);
    });

    check("PSR vs finite differences", [](bool &ok) {
        const CircuitTemplate c = real_amplitudes(4, 1, Entanglement::Linear);
        const PauliSum h = build_tim({4, 1.0, 2.0, Boundary::Ring});
        Rng rng(2);
        const ParamVector theta = initial_parameters(c, rng);
        Objective f = make_energy_objective(c, h);
        const double diff = (grad_psr(c, h, theta).vector - grad_fd(f, theta, 1e-5).vector).cwiseAbs().maxCoeff();
        ok = diff < 1e-7;
        return fmt::format("max |PSR - FD| = {:.3e}", diff);
    });

    check("BDA blocks vs exact metric", [](bool &ok) {
        const CircuitTemplate c = real_amplitudes(4, 2, Entanglement::Linear);
        Rng rng(3);
        const ParamVector theta = initial_parameters(c, rng);
        const Eigen::MatrixXd exact = qgt_exact(c, theta).data;
        const Eigen::MatrixXd bda = metric_bda(c, theta).data;
        double worst = 0.0;
        for (const ParameterBlock &b : c.blocks()) {
            const auto lo = static_cast<Eigen::Index>(b.first_param);
            const auto n = static_cast<Eigen::Index>(b.n_params);
            worst = std::max(worst, (exact.block(lo, lo, n, n) - bda.block(lo, lo, n, n)).cwiseAbs().maxCoeff());
        }
        ok = worst < 1e-10;
        return fmt::format("max block difference = {:.3e}", worst);
    });

    check("regularized metric bound", [](bool &ok) {
        Rng rng(4);
        double worst = std::numeric_limits<double>::infinity();
        for (int t = 0; t < 20; ++t) {
            Eigen::MatrixXd m(4, 4);
            for (Eigen::Index i = 0; i < 4; ++i) {
                for (Eigen::Index j = 0; j <= i; ++j) {
                    m(i, j) = m(j, i) = uniform(rng, -1, 1);
                }
            }
            const MetricMatrix r = regularize({m, MetricKind::Smoothed, 1, 0}, 0.01);
            worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.data).eigenvalues().minCoeff());
        }
        ok = worst >= 0.01 - 1e-12;
        return fmt::format("min eigenvalue = {:.6e} (beta 1e-2)", worst);
    });

    check("evaluation accounting", [](bool &ok) {
        const CircuitTemplate c = real_amplitudes(3, 1, Entanglement::Linear);
        const PauliSum h = build_tim({3, 1.0, 2.0, Boundary::Ring});
        std::size_t failed = 0;
        for (Method m : all_methods()) {
            OptimizerConfig cfg = default_config(m);
            cfg.max_iterations = 3;
            failed += run_vqe(c, h, cfg).failed ? 1 : 0;
        }
        ok = failed == 0;
        return fmt::format("{} of {} methods violated the per-iteration counts", failed, all_methods().size());
    });

    check("seeded determinism", [](bool &ok) {
        const CircuitTemplate c = real_amplitudes(4, 1, Entanglement::Linear);
        const PauliSum h = build_tim({4, 1.0, 2.0, Boundary::Ring});
        OptimizerConfig cfg = default_config(Method::QNSPSA_SPSA);
        cfg.max_iterations = 20;
        cfg.seed = 9;
        const RunRecord a = run_vqe(c, h, cfg);
        const RunRecord b = run_vqe(c, h, cfg);
        ok = a.rows.size() == b.rows.size() && a.final_row().energy == b.final_row().energy;
        return fmt::format("final energies {} and {}", format_number(a.final_row().energy),
                           format_number(b.final_row().energy));
    });
    return out;
}

} // namespace qnvqe

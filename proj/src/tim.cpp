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

#include "qnvqe/tim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "qnvqe/errors.hpp"

namespace qnvqe {

std::string to_string(Boundary boundary) { return boundary == Boundary::Ring ? "ring" : "open"; }

Boundary parse_boundary(std::string_view text) {
    if (text == "ring") {
        return Boundary::Ring;
    }
    if (text == "open") {
        return Boundary::Open;
    }
    throw ConfigError("boundary must be 'ring' or 'open', got '" + std::string(text) + "'");
}

PauliSum build_tim(const TimParams &params) {
    const std::size_t n = params.n_spins;
    if (n < 2) {
        throw ConfigError("TIM needs at least 2 spins");
    }
    if (n > Statevector::kMaxQubits) {
        throw ConfigError("TIM spin count exceeds the statevector limit");
    }
    if (!std::isfinite(params.coupling) || !std::isfinite(params.field)) {
        throw ConfigError("TIM couplings must be finite");
    }
    PauliSum h(n);
    const std::size_t bonds = params.boundary == Boundary::Ring ? n : n - 1;
    for (std::size_t b = 0; b < bonds; ++b) {
        PauliString zz = PauliString::identity(n);
        zz.set(b, Pauli::Z);
        zz.set((b + 1) % n, Pauli::Z);
        h.add(-params.coupling, std::move(zz));
    }
    for (std::size_t site = 0; site < n; ++site) {
        PauliString x = PauliString::identity(n);
        x.set(site, Pauli::X);
        h.add(-params.field, std::move(x));
    }
    return h;
}

MeasurementGroups measurement_groups(const PauliSum &hamiltonian) {
    MeasurementGroups groups{PauliSum(hamiltonian.n_qubits()), PauliSum(hamiltonian.n_qubits())};
    for (const PauliTerm &term : hamiltonian.terms()) {
        bool has_x = false;
        bool has_z = false;
        for (Pauli p : term.string.ops()) {
            if (p == Pauli::Y) {
                throw UnsupportedError("measurement grouping: Y in term " + term.string.str());
            }
            has_x |= p == Pauli::X;
            has_z |= p == Pauli::Z;
        }
        if (has_x && has_z) {
            throw UnsupportedError("measurement grouping: mixed X/Z term " + term.string.str());
        }
        (has_x ? groups.x_group : groups.z_group).add(term.weight, term.string);
    }
    return groups;
}

namespace {

// Mean over `shots` samples of sum_i w_i (-1)^{popcount(n & mask_i)}.
double sample_group(const Statevector &state, const PauliSum &group, std::uint64_t shots, Rng &rng) {
    if (group.empty()) {
        return 0.0;
    }
    std::vector<double> cdf(state.dim());
    double running = 0.0;
    for (std::size_t n = 0; n < state.dim(); ++n) {
        running += std::norm(state[n]);
        cdf[n] = running;
    }
    std::vector<std::uint64_t> masks;
    masks.reserve(group.size());
    for (const PauliTerm &term : group.terms()) {
        std::uint64_t mask = 0;
        for (std::size_t q = 0; q < term.string.size(); ++q) {
            if (term.string[q] != Pauli::I) {
                mask |= std::uint64_t{1} << q;
            }
        }
        masks.push_back(mask);
    }
    double total = 0.0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t outcome =
            it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
        double value = 0.0;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            const bool odd = (std::popcount(outcome & masks[i]) & 1) != 0;
            value += odd ? -group.terms()[i].weight : group.terms()[i].weight;
        }
        total += value;
    }
    return total / static_cast<double>(shots);
}

} // namespace

double estimate_expectation_shots(const Statevector &state, const PauliSum &hamiltonian,
                                  std::uint64_t shots, Rng &rng) {
    if (shots < 1) {
        throw ConfigError("shots must be >= 1");
    }
    if (hamiltonian.n_qubits() != state.n_qubits()) {
        throw UsageError("observable qubit count does not match the state");
    }
    const MeasurementGroups groups = measurement_groups(hamiltonian);
    double total = sample_group(state, groups.z_group, shots, rng);
    if (!groups.x_group.empty()) {
        Statevector rotated = state;
        for (std::size_t q = 0; q < state.n_qubits(); ++q) {
            rotated.apply_rotation(Axis::Y, q, -std::numbers::pi / 2);
        }
        total += sample_group(rotated, groups.x_group, shots, rng);
    }
    return total;
}

namespace {

struct Spectrum {
    std::vector<double> values; // ascending
    Eigen::MatrixXcd vectors;   // column j pairs with values[j]
};

Spectrum lowest_eigenpairs(Eigen::MatrixXd matrix, std::size_t count) {
    const auto n = static_cast<lapack_int>(matrix.rows());
    std::vector<double> w(static_cast<std::size_t>(n));
    Eigen::MatrixXd z(n, static_cast<Eigen::Index>(count));
    std::vector<lapack_int> support(2 * count);
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, matrix.data(), n, 0.0, 0.0, 1,
                       static_cast<lapack_int>(count), 0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0) {
        throw NumericError("dsyevr failed with info " + std::to_string(info));
    }
    Spectrum out;
    out.values.assign(w.begin(), w.begin() + found);
    out.vectors = z.leftCols(found).cast<Complex>();
    return out;
}

Spectrum lowest_eigenpairs(Eigen::MatrixXcd matrix, std::size_t count) {
    const auto n = static_cast<lapack_int>(matrix.rows());
    std::vector<double> w(static_cast<std::size_t>(n));
    Eigen::MatrixXcd z(n, static_cast<Eigen::Index>(count));
    std::vector<lapack_int> support(2 * count);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                                           reinterpret_cast<lapack_complex_double *>(matrix.data()), n, 0.0, 0.0,
                                           1, static_cast<lapack_int>(count), 0.0, &found, w.data(),
                                           reinterpret_cast<lapack_complex_double *>(z.data()), n,
                                           support.data());
    if (info != 0) {
        throw NumericError("zheevr failed with info " + std::to_string(info));
    }
    Spectrum out;
    out.values.assign(w.begin(), w.begin() + found);
    out.vectors = z.leftCols(found);
    return out;
}

// One diagonalization block: either the full space or one spin-flip sector
// spanned by (|n> + sign |~n>)/sqrt2 for n with the top bit clear.
struct Sector {
    int sign = 0; // 0 means no symmetry reduction
    std::size_t dim = 0;
};

template <typename Matrix>
Matrix assemble(const PauliSum &hamiltonian, const Sector &sector) {
    using Scalar = typename Matrix::Scalar;
    const std::size_t n_qubits = hamiltonian.n_qubits();
    const std::size_t full_dim = std::size_t{1} << n_qubits;
    const std::size_t all_ones = full_dim - 1;
    const std::size_t top = full_dim >> 1;
    Matrix matrix = Matrix::Zero(static_cast<Eigen::Index>(sector.dim), static_cast<Eigen::Index>(sector.dim));
    for (const PauliTerm &term : hamiltonian.terms()) {
        const std::uint64_t flip = term.string.flip_mask();
        const std::uint64_t phase = term.string.phase_mask();
        static constexpr Complex kIPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        const Complex global = term.weight * kIPowers[term.string.y_count() % 4];
        for (std::size_t n = 0; n < sector.dim; ++n) {
            const double sign = (std::popcount(n & phase) & 1) != 0 ? -1.0 : 1.0;
            Complex value = global * sign;
            std::size_t m = n ^ flip;
            if (sector.sign != 0 && (m & top) != 0) {
                m ^= all_ones;
                value *= static_cast<double>(sector.sign);
            }
            if constexpr (std::is_same_v<Scalar, double>) {
                matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) += value.real();
            } else {
                matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) += value;
            }
        }
    }
    return matrix;
}

Spectrum solve_sector(const PauliSum &hamiltonian, const Sector &sector, bool real, std::size_t count) {
    if (real) {
        return lowest_eigenpairs(assemble<Eigen::MatrixXd>(hamiltonian, sector), count);
    }
    return lowest_eigenpairs(assemble<Eigen::MatrixXcd>(hamiltonian, sector), count);
}

} // namespace

ExactSolution exact_ground(const PauliSum &hamiltonian) {
    const std::size_t n_qubits = hamiltonian.n_qubits();
    if (n_qubits > kMaxExactQubits) {
        throw ResourceError("exact_ground supports at most " + std::to_string(kMaxExactQubits) + " qubits");
    }
    const std::size_t full_dim = std::size_t{1} << n_qubits;
    bool real = true;
    bool flip_symmetric = true;
    for (const PauliTerm &term : hamiltonian.terms()) {
        real &= term.string.y_count() % 2 == 0;
        flip_symmetric &= std::popcount(term.string.phase_mask()) % 2 == 0;
    }

    std::vector<Sector> sectors;
    if (flip_symmetric) {
        sectors = {{+1, full_dim / 2}, {-1, full_dim / 2}};
    } else {
        sectors = {{0, full_dim}};
    }

    std::vector<Spectrum> spectra(sectors.size());
    std::vector<std::size_t> counts(sectors.size());
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        counts[s] = std::min<std::size_t>(sectors[s].dim, 8);
        spectra[s] = solve_sector(hamiltonian, sectors[s], real, counts[s]);
    }
    // Grow the partial spectrum until every sector shows a level above the
    // degenerate ground cluster (or is exhausted).
    while (true) {
        double e0 = spectra[0].values.front();
        for (const Spectrum &sp : spectra) {
            e0 = std::min(e0, sp.values.front());
        }
        bool grown = false;
        for (std::size_t s = 0; s < sectors.size(); ++s) {
            const bool all_in_cluster = spectra[s].values.back() <= e0 + kDegeneracyTolerance;
            if (all_in_cluster && counts[s] < sectors[s].dim) {
                counts[s] = std::min(sectors[s].dim, 2 * counts[s]);
                spectra[s] = solve_sector(hamiltonian, sectors[s], real, counts[s]);
                grown = true;
            }
        }
        if (!grown) {
            break;
        }
    }

    ExactSolution solution;
    std::size_t best_sector = 0;
    for (std::size_t s = 1; s < sectors.size(); ++s) {
        if (spectra[s].values.front() < spectra[best_sector].values.front()) {
            best_sector = s;
        }
    }
    const double e0 = spectra[best_sector].values.front();
    solution.ground_energy = e0;
    double next_level = std::numeric_limits<double>::infinity();
    for (const Spectrum &sp : spectra) {
        for (double v : sp.values) {
            if (v <= e0 + kDegeneracyTolerance) {
                ++solution.degeneracy;
            } else {
                next_level = std::min(next_level, v);
            }
        }
    }
    solution.gap = std::isfinite(next_level) ? next_level - e0 : 0.0;

    std::vector<Complex> amplitudes(full_dim, Complex{0.0, 0.0});
    const auto &vec = spectra[best_sector].vectors;
    const Sector &sector = sectors[best_sector];
    if (sector.sign == 0) {
        for (std::size_t n = 0; n < full_dim; ++n) {
            amplitudes[n] = vec(static_cast<Eigen::Index>(n), 0);
        }
    } else {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        for (std::size_t n = 0; n < sector.dim; ++n) {
            const Complex c = vec(static_cast<Eigen::Index>(n), 0) * inv_sqrt2;
            amplitudes[n] = c;
            amplitudes[n ^ (full_dim - 1)] = static_cast<double>(sector.sign) * c;
        }
    }
    solution.ground_state = Statevector::from_amplitudes(std::move(amplitudes));
    return solution;
}

double check_spinflip_symmetry(const PauliSum &hamiltonian) {
    // X^N P = +/- P X^N; anticommuting terms contribute 2 w X^N P to the
    // commutator. Distinct P give orthogonal X^N P under the trace inner
    // product, each with squared Frobenius norm 2^N.
    std::map<std::vector<Pauli>, double> merged;
    for (const PauliTerm &term : hamiltonian.terms()) {
        if (std::popcount(term.string.phase_mask()) % 2 == 1) {
            merged[term.string.ops()] += term.weight;
        }
    }
    double sum_sq = 0.0;
    for (const auto &[ops, weight] : merged) {
        sum_sq += weight * weight;
    }
    const double dim = std::ldexp(1.0, static_cast<int>(hamiltonian.n_qubits()));
    return 2.0 * std::sqrt(dim * sum_sq);
}

CoefficientReport check_coefficient_structure(const Statevector &state) {
    const auto amp = state.amplitudes();
    std::size_t anchor = 0;
    for (std::size_t n = 1; n < amp.size(); ++n) {
        if (std::abs(amp[n]) > std::abs(amp[anchor])) {
            anchor = n;
        }
    }
    CoefficientReport report;
    if (std::abs(amp[anchor]) == 0.0) {
        return report;
    }
    const Complex unphase = std::conj(amp[anchor]) / std::abs(amp[anchor]);
    std::vector<Complex> c(amp.begin(), amp.end());
    for (Complex &value : c) {
        value *= unphase;
        report.max_real_angle_deviation = std::max(report.max_real_angle_deviation, std::abs(value.imag()));
    }
    const std::size_t all_ones = c.size() - 1;
    double mismatch_plus = 0.0;
    double mismatch_minus = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        mismatch_plus = std::max(mismatch_plus, std::abs(c[n] - c[n ^ all_ones]));
        mismatch_minus = std::max(mismatch_minus, std::abs(c[n] + c[n ^ all_ones]));
    }
    if (mismatch_minus < mismatch_plus) {
        report.sign = -1;
        report.max_spinflip_mismatch = mismatch_minus;
    } else {
        report.sign = 1;
        report.max_spinflip_mismatch = mismatch_plus;
    }
    return report;
}

DofCounts dof_counts(std::size_t n_spins) {
    if (n_spins < 1 || n_spins > 62) {
        throw ConfigError("dof_counts: n_spins must be in [1, 62]");
    }
    return {(std::uint64_t{1} << (n_spins + 1)) - 2, (std::uint64_t{1} << (n_spins - 1)) - 1};
}

double layer_lower_bound(std::size_t n_spins) {
    if (n_spins < 1 || n_spins > 62) {
        throw ConfigError("layer_lower_bound: n_spins must be in [1, 62]");
    }
    const double reduced = std::ldexp(1.0, static_cast<int>(n_spins) - 1) - 1.0;
    return reduced / static_cast<double>(n_spins) - 1.0;
}

} // namespace qnvqe

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

#include "qnvqe/cobyla.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/LU>

#include "qnvqe/errors.hpp"

namespace qnvqe {

namespace {

// Simplex acceptability and step constants from Powell's code.
constexpr double kAlpha = 0.25;
constexpr double kBeta = 2.1;
constexpr double kGamma = 0.5;
constexpr double kDelta = 1.1;

struct OutOfBudget {};

} // namespace

CobylaResult cobyla_minimize(Objective &objective, const ParamVector &theta0, double rho_begin, double rho_end,
                             std::uint64_t max_evals, const CobylaCallback &callback) {
    if (!(rho_end > 0.0) || !(rho_begin > rho_end)) {
        throw ConfigError("COBYLA needs rho_begin > rho_end > 0");
    }
    const Eigen::Index n = theta0.size();
    if (n == 0) {
        throw UsageError("COBYLA needs at least one parameter");
    }

    CobylaResult result;
    result.theta = theta0;
    result.value = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const ParamVector &x) {
        if (result.n_evals >= max_evals) {
            throw OutOfBudget{};
        }
        const double f = objective(x);
        ++result.n_evals;
        if (!std::isfinite(f)) {
            throw NumericError("COBYLA: objective returned a non-finite value");
        }
        if (f < result.value) {
            result.value = f;
            result.theta = x;
        }
        if (callback) {
            callback(result.n_evals, result.theta, result.value);
        }
        return f;
    };

    double rho = rho_begin;
    // Vertices are pole + sim.col(j); fv holds their values.
    ParamVector pole = theta0;
    Eigen::MatrixXd sim = rho * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd fv = Eigen::VectorXd::Zero(n);

    // Moves the pole to vertex j, re-expressing columns [0, limit) relative to it.
    auto move_pole = [&](Eigen::Index j, double &f_pole, Eigen::Index limit) {
        const Eigen::VectorXd d = sim.col(j);
        pole += d;
        std::swap(fv[j], f_pole);
        for (Eigen::Index k = 0; k < limit; ++k) {
            sim.col(k) -= d;
        }
        sim.col(j) = -d;
    };

    try {
        double f_pole = evaluate(pole);
        for (Eigen::Index j = 0; j < n; ++j) {
            fv[j] = evaluate(pole + sim.col(j));
            if (fv[j] < f_pole) {
                move_pole(j, f_pole, j + 1);
            }
        }

        bool forced_trust_step = false; // Powell's IBRNCH
        while (true) {
            Eigen::Index best = 0;
            fv.minCoeff(&best);
            if (fv[best] < f_pole) {
                move_pole(best, f_pole, n);
            }

            const Eigen::MatrixXd simi = sim.inverse();
            if (!simi.allFinite()) {
                throw NumericError("COBYLA: degenerate simplex");
            }
            // Linear model f(pole + s) ~ f_pole + g.s through every vertex.
            const Eigen::VectorXd g = simi.transpose() * (fv.array() - f_pole).matrix();

            const double par_sig = kAlpha * rho;
            const double par_eta = kBeta * rho;
            Eigen::VectorXd vsig(n);
            Eigen::VectorXd veta(n);
            bool acceptable = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                vsig[j] = 1.0 / simi.row(j).norm();
                veta[j] = sim.col(j).norm();
                if (vsig[j] < par_sig || veta[j] > par_eta) {
                    acceptable = false;
                }
            }

            if (!forced_trust_step && !acceptable) {
                // Geometry step: replace the worst-shaped vertex.
                Eigen::Index drop = -1;
                double worst = par_eta;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (veta[j] > worst) {
                        drop = j;
                        worst = veta[j];
                    }
                }
                if (drop < 0) {
                    worst = par_sig;
                    for (Eigen::Index j = 0; j < n; ++j) {
                        if (vsig[j] < worst) {
                            drop = j;
                            worst = vsig[j];
                        }
                    }
                }
                Eigen::VectorXd dx = (kGamma * rho * vsig[drop]) * simi.row(drop).transpose();
                if (g.dot(dx) > 0.0) {
                    dx = -dx;
                }
                sim.col(drop) = dx;
                fv[drop] = evaluate(pole + dx);
                continue;
            }

            // Trust-region step on the linear model: steepest descent of length rho.
            forced_trust_step = true;
            const double g_norm = g.norm();
            bool keep_rho = false;
            if (g_norm > 0.0) {
                const Eigen::VectorXd dx = (-rho / g_norm) * g;
                const double f_new = evaluate(pole + dx);
                const double predicted = -g.dot(dx);
                const double reduction = f_pole - f_new;

                // Choose the vertex to drop so the simplex stays well shaped.
                const Eigen::VectorXd weights = (simi * dx).cwiseAbs();
                Eigen::Index drop = -1;
                double ratio = reduction <= 0.0 ? 1.0 : 0.0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (weights[j] > ratio) {
                        drop = j;
                        ratio = weights[j];
                    }
                }
                double edge = kDelta * rho;
                Eigen::Index far = -1;
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double sigbar = weights[j] * vsig[j];
                    if (sigbar >= par_sig || sigbar >= vsig[j]) {
                        const double dist = reduction > 0.0 ? (dx - sim.col(j)).norm() : veta[j];
                        if (dist > edge) {
                            far = j;
                            edge = dist;
                        }
                    }
                }
                if (far >= 0) {
                    drop = far;
                }
                if (drop >= 0) {
                    sim.col(drop) = dx;
                    fv[drop] = f_new;
                }
                keep_rho = reduction > 0.0 && reduction >= 0.1 * predicted;
            }
            if (keep_rho) {
                continue;
            }
            if (!acceptable) {
                forced_trust_step = false;
                continue;
            }
            if (rho > rho_end) {
                rho *= 0.5;
                if (rho <= 1.5 * rho_end) {
                    rho = rho_end;
                }
                continue;
            }
            result.converged = true;
            break;
        }
    } catch (const OutOfBudget &) {
        result.converged = false;
    }
    return result;
}

} // namespace qnvqe

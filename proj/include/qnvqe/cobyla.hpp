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

#include <cstdint>
#include <functional>

#include "qnvqe/gradients.hpp"

namespace qnvqe {

struct CobylaResult {
    ParamVector theta;
    double value = 0.0;
    std::uint64_t n_evals = 0;
    bool converged = false; ///< false when max_evals ran out before rho_end
};

/// Called after every objective evaluation with (evaluations so far, best point, best value).
using CobylaCallback = std::function<void(std::uint64_t, const ParamVector &, double)>;

/// Unconstrained COBYLA (Powell): a simplex of p+1 interpolation points
/// defines a linear model; each main-loop iteration takes one trust-region
/// step of length rho (or one geometry-repair step) and spends one
/// evaluation. rho halves toward rho_end when steps stop paying off.
CobylaResult cobyla_minimize(Objective &objective, const ParamVector &theta0, double rho_begin, double rho_end,
                             std::uint64_t max_evals, const CobylaCallback &callback = {});

} // namespace qnvqe

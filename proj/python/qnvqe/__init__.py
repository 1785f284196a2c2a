# Copyright 2026 The qnvqe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Statevector VQE lab for the transverse-field Ising chain."""

from ._core import (
    Circuit,
    Hamiltonian,
    __version__,
    ansatz,
    check,
    energy,
    exact_ground,
    fidelity,
    grad_fd,
    grad_psr,
    methods,
    metric_bda,
    metric_qnspsa_sample,
    preset_toml,
    presets,
    qgt_exact,
    run_experiment,
    run_vqe,
    statevector,
    tim,
)

__all__ = [
    "Circuit",
    "Hamiltonian",
    "__version__",
    "ansatz",
    "check",
    "energy",
    "exact_ground",
    "fidelity",
    "grad_fd",
    "grad_psr",
    "methods",
    "metric_bda",
    "metric_qnspsa_sample",
    "preset_toml",
    "presets",
    "qgt_exact",
    "run_experiment",
    "run_vqe",
    "statevector",
    "tim",
]

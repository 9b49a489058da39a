# Copyright 2026 The fockdist Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the fockdist simulator."""

from ._core import (
    ConfigurationError,
    ValidationError,
    coherent_stats,
    pdc_stats,
    run_bb84_session,
    run_criterion,
    run_distribution,
    run_monte_carlo,
    run_multiphoton_error,
    triggered_plus_coherent_stats,
    verify_projection_equivalence,
    verify_virtual_qubits,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ValidationError",
    "coherent_stats",
    "pdc_stats",
    "run_bb84_session",
    "run_criterion",
    "run_distribution",
    "run_monte_carlo",
    "run_multiphoton_error",
    "triggered_plus_coherent_stats",
    "verify_projection_equivalence",
    "verify_virtual_qubits",
]

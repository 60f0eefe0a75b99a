# Copyright 2023 The JaxGaussianProcesses Contributors. All Rights Reserved.
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
# ==============================================================================
from jax import config

config.update("jax_enable_x64", True)

from rijax import (
    equilibrium,
    extensions,
    receiver,
)
from rijax.base import (
    Module,
    static_field,
)
from rijax.beliefs import (
    CostModel,
    DiscreteBeliefDistribution,
    attention_cost,
    is_garbling,
    mean,
    variance,
)
from rijax.concavify import (
    GarblingSolution,
    SampledFunction,
    concave_envelope,
    optimal_garbling,
)
from rijax.equilibrium import (
    DeviationSearchConfig,
    EquilibriumReport,
    OutOfRegionError,
    check_binary_symmetric,
    check_full_info,
    check_outcome_equivalent,
    check_profile,
    check_uninformative,
    single_sender_solve,
)
from rijax.extensions import (
    check_costvariant_fullinfo,
    check_hetero_fullinfo,
    check_public,
)
from rijax.receiver import (
    ModelParams,
    ReceiverStrategy,
    best_response,
    stage1_closed_form,
    stage1_value,
    stage2_closed_form,
)
from rijax.sweep import run_sweep

__license__ = "Apache-2.0"
__description__ = "Rationally inattentive receivers and competitive persuasion in JAX"
__version__ = "0.1.0"

__all__ = [
    "Module",
    "static_field",
    "equilibrium",
    "extensions",
    "receiver",
    "CostModel",
    "DiscreteBeliefDistribution",
    "attention_cost",
    "is_garbling",
    "mean",
    "variance",
    "GarblingSolution",
    "SampledFunction",
    "concave_envelope",
    "optimal_garbling",
    "DeviationSearchConfig",
    "EquilibriumReport",
    "OutOfRegionError",
    "check_full_info",
    "check_binary_symmetric",
    "check_uninformative",
    "check_outcome_equivalent",
    "check_profile",
    "single_sender_solve",
    "check_costvariant_fullinfo",
    "check_hetero_fullinfo",
    "check_public",
    "ModelParams",
    "ReceiverStrategy",
    "best_response",
    "stage1_closed_form",
    "stage1_value",
    "stage2_closed_form",
    "run_sweep",
]

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
from rijax.extensions.cost_variant import check_costvariant_fullinfo
from rijax.extensions.hetero import (
    HeteroParams,
    HeteroStage1,
    affine_residual,
    check_hetero_fullinfo,
    hetero_cases,
    hetero_fullinfo_region,
    hetero_stage1,
    hetero_value,
    selection_profile,
)
from rijax.extensions.public import (
    check_public,
    other_first_response,
)

__all__ = [
    "check_public",
    "other_first_response",
    "HeteroParams",
    "HeteroStage1",
    "hetero_cases",
    "hetero_stage1",
    "hetero_value",
    "hetero_fullinfo_region",
    "selection_profile",
    "affine_residual",
    "check_hetero_fullinfo",
    "check_costvariant_fullinfo",
]

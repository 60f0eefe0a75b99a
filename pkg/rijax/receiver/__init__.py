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

from rijax.receiver.closed_form import (
    AdmissibleSupport,
    Stage1Solution,
    Stage2Choice,
    first_selected_probability,
    stage1_case,
    stage1_closed_form,
    stage1_value,
    stage2_case,
    stage2_choice,
    stage2_closed_form,
    tangent_point,
)
from rijax.receiver.oracle import (
    stage1_oracle,
    stage2_oracle,
)
from rijax.receiver.payoffs import (
    ModelParams,
    stage2_payoff,
)
from rijax.receiver.strategy import (
    AbstractStage2Responder,
    CandidateResponder,
    ClosedFormResponder,
    ReceiverStrategy,
    VisitPlan,
    achieves_first_best,
    best_response,
    first_best_value,
    responder_for,
)

__all__ = [
    "ModelParams",
    "stage2_payoff",
    "Stage2Choice",
    "Stage1Solution",
    "AdmissibleSupport",
    "stage2_choice",
    "first_selected_probability",
    "stage2_closed_form",
    "stage1_value",
    "stage2_case",
    "stage1_case",
    "stage1_closed_form",
    "tangent_point",
    "stage2_oracle",
    "stage1_oracle",
    "AbstractStage2Responder",
    "ClosedFormResponder",
    "CandidateResponder",
    "ReceiverStrategy",
    "VisitPlan",
    "responder_for",
    "best_response",
    "first_best_value",
    "achieves_first_best",
]

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
"""Full disclosure when the attention cost depends on the garbled experiment."""

import logging

from beartype.typing import Optional

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.equilibrium import (
    DeviationSearchConfig,
    EquilibriumReport,
    decide,
    deviation_search,
    full_info_region,
    out_of_region_report,
)
from rijax.receiver import ModelParams

logger = logging.getLogger(__name__)


def check_costvariant_fullinfo(
    params: ModelParams, search: Optional[DeviationSearchConfig] = None
) -> EquilibriumReport:
    r"""Full disclosure with an experiment-dependent cost coefficient.

    On path both senders disclose fully and the receiver pays the floor
    coefficient $`k_F`$. A deviation to a less informative experiment is
    garbled at its own, weakly higher, coefficient. Full disclosure is an
    equilibrium whenever $`k_F > 1/2`$ and $`\mu \in [1/(4k_F), 1 - 1/(4k_F)]`$,
    and the receiver can always ignore a deviating sender.

    Args:
        params (ModelParams): parameters whose `cost` is experiment dependent.
        search (Optional[DeviationSearchConfig]): search settings.

    Returns:
        EquilibriumReport: the verdict. `details["learning_nothing_by_deviation"]`
        holds one `{sender, alpha, beta, learning_nothing_optimal}` record per
        searched deviation; `details["learning_nothing_optimal"]` is their
        conjunction.
    """
    cost = params.cost_model
    if cost.mode != "experiment":
        raise ValueError(
            f"an experiment-dependent cost model is required, got mode {cost.mode!r}."
        )
    if params.l != 0.0 or params.h != 1.0:
        raise ValueError(
            f"full disclosure needs l = 0 and h = 1, got l={params.l}, h={params.h}."
        )
    k_floor = cost.floor
    if not all(full_info_region(k_floor, m) for m in (params.mu, params.prior2)):
        return out_of_region_report(
            "the floor coefficient violates the full-disclosure conditions",
            k_floor=k_floor,
            mu=params.mu,
        )

    search = DeviationSearchConfig() if search is None else search
    result = deviation_search(
        DiscreteBeliefDistribution.full_information(params.mu),
        DiscreteBeliefDistribution.full_information(params.prior2),
        params,
        search,
    )
    verdict = decide(result.margin, search.profit_threshold, True)
    logger.info(
        "experiment-dependent cost at k_F=%s, mu=%s: %s", k_floor, params.mu, verdict
    )
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=result.strategy.sender_payoffs(),
        receiver_value=result.strategy.value,
        margin=result.margin,
        favorable_margin=result.favorable_margin,
        best_deviation=result.certificate,
        closed_form=True,
        deviations_searched=result.deviations_searched,
        details={
            "k_floor": k_floor,
            "schedule": [list(step) for step in cost.schedule],
            "learning_nothing_optimal": result.deviator_ignorable,
            "learning_nothing_by_deviation": [
                {
                    "sender": sender,
                    "alpha": alpha,
                    "beta": beta,
                    "learning_nothing_optimal": flag,
                }
                for sender, alpha, beta, flag in result.ignorable_by_deviation
            ],
        },
    )


__all__ = ["check_costvariant_fullinfo"]

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
"""Equilibrium checks of the symmetric profiles with known closed forms."""

import logging

from beartype.typing import Optional
import numpy as np

from rijax.beliefs import (
    MASS_TOL,
    DiscreteBeliefDistribution,
    is_garbling,
    mean,
)
from rijax.equilibrium.deviation import check_profile
from rijax.equilibrium.report import (
    DeviationSearchConfig,
    EquilibriumReport,
    out_of_region_report,
)
from rijax.equilibrium.selection import (
    binary_symmetric_region,
    full_info_region,
)
from rijax.receiver import (
    ModelParams,
    best_response,
    first_best_value,
)

logger = logging.getLogger(__name__)


def _symmetric(params: ModelParams) -> bool:
    return abs(params.prior2 - params.mu) <= MASS_TOL


def check_full_info(
    params: ModelParams, search: Optional[DeviationSearchConfig] = None
) -> EquilibriumReport:
    r"""Is full disclosure by both senders an equilibrium?

    The closed form holds for $`k > 1/2`$ and $`\mu \in [1/(4k), 1 - 1/(4k)]`$;
    the deviation search must agree with it.

    Args:
        params (ModelParams): parameters with `l = 0` and `h = 1`.
        search (Optional[DeviationSearchConfig]): search settings.

    Returns:
        EquilibriumReport: the verdict.
    """
    if params.l != 0.0 or params.h != 1.0:
        raise ValueError(
            f"full disclosure needs l = 0 and h = 1, got l={params.l}, h={params.h}."
        )
    closed_form = full_info_region(params.k, params.mu) if _symmetric(params) else None
    report = check_profile(
        DiscreteBeliefDistribution.full_information(params.mu),
        DiscreteBeliefDistribution.full_information(params.prior2),
        params,
        search,
        closed_form=closed_form,
        profile="full",
    )
    logger.info(
        "full information at k=%s, mu=%s: %s (margin %.3e)",
        params.k,
        params.mu,
        report.verdict,
        report.margin,
    )
    return report


def check_binary_symmetric(
    p: DiscreteBeliefDistribution,
    params: ModelParams,
    search: Optional[DeviationSearchConfig] = None,
) -> EquilibriumReport:
    r"""Is the profile in which both senders offer `p` on $`\{l, h\}`$ an equilibrium?

    The closed form holds for $`k > 1/(2(h - l))`$ and
    $`\mu \in [l + 1/(4k), h - 1/(4k)]`$. With $`l = 0, h = 1`$ this is
    `check_full_info`.
    """
    lo, hi = p.support_bounds
    if not p.is_binary or abs(lo - params.l) > MASS_TOL or abs(hi - params.h) > MASS_TOL:
        raise ValueError(
            f"p must be supported on {{l, h}} = {{{params.l}, {params.h}}}, got {p.to_dict()['points']}."
        )
    if abs(mean(p) - params.mu) > MASS_TOL or not _symmetric(params):
        raise ValueError(f"p must have the common prior {params.mu} as its mean, got {mean(p)}.")
    closed_form = binary_symmetric_region(params.k, params.mu, params.l, params.h)
    return check_profile(
        p, p, params, search, closed_form=closed_form, profile=f"binary:{lo},{hi}"
    )


def check_uninformative(
    params: ModelParams, search: Optional[DeviationSearchConfig] = None
) -> EquilibriumReport:
    """The profile in which neither sender discloses anything.

    The receiver never looks at either sender, so every deviation goes unseen.
    """
    return check_profile(
        DiscreteBeliefDistribution.degenerate(params.mu),
        DiscreteBeliefDistribution.degenerate(params.prior2),
        params,
        search,
        closed_form=True,
        profile="none",
    )


def check_outcome_equivalent(
    p1: DiscreteBeliefDistribution,
    p2: DiscreteBeliefDistribution,
    params: ModelParams,
) -> EquilibriumReport:
    r"""Is `(p1, p2)` an equilibrium with the same outcome as full disclosure?

    Inside the full-information region this holds when each sender's experiment
    is more informative than the receiver's stage-1 garbling
    $`\{\mu - 1/(4k), \mu + 1/(4k)\}`$ of full information. Outside the region,
    or when containment fails, no verdict is claimed.

    Args:
        p1 (DiscreteBeliefDistribution): sender 1's experiment.
        p2 (DiscreteBeliefDistribution): sender 2's experiment.
        params (ModelParams): model parameters.

    Returns:
        EquilibriumReport: `equilibrium` when containment holds for both senders,
        `inconclusive` otherwise.
    """
    priors = (params.mu, params.prior2)
    if not all(full_info_region(params.k, m) for m in priors):
        return out_of_region_report(
            "full disclosure is not an equilibrium at these parameters",
            k=params.k,
            mu=params.mu,
            mu2=params.prior2,
        )
    d = params.d
    contained = [
        bool(is_garbling(DiscreteBeliefDistribution.binary(m - d, m + d, m), p))
        for m, p in zip(priors, (p1, p2))
    ]
    strategy = best_response(p1, p2, params)
    first_best = first_best_value(params)
    equivalent = bool(np.isclose(strategy.value, first_best, atol=1e-6))
    verdict = "equilibrium" if all(contained) and equivalent else "inconclusive"
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=strategy.sender_payoffs(),
        receiver_value=strategy.value,
        margin=0.0 if verdict == "equilibrium" else float("nan"),
        closed_form=all(contained),
        details={
            "contains_stage1_garbling": contained,
            "first_best_value": first_best,
            "achieves_first_best": equivalent,
        },
    )


__all__ = [
    "check_full_info",
    "check_binary_symmetric",
    "check_uninformative",
    "check_outcome_equivalent",
]

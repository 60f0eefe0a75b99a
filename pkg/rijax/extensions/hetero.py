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
r"""Full disclosure when the senders' priors differ.

The closed forms take $`k = 1`$. With the first-visited sender's prior
$`\mu_f`$ and the second's $`\mu_s`$, four parameter cases describe the beliefs
an optimal stage-1 garbling may use:

1. $`\mu_s \in [1/2, 3/4]`$, $`|\mu_f - \mu_s| \le 1/4`$: $`[\mu_s - 1/4, 3/4] \cup \{\mu_s + 1/4\}`$;
2. $`\mu_s \in [3/4, 1]`$, $`\mu_f \in [\mu_s - 1/4, 3/4]`$: $`[\mu_s - 1/4, 3/4]`$;
3. $`\mu_s \in [1/4, 1/2]`$, $`|\mu_f - \mu_s| \le 1/4`$: $`[1/4, \mu_s + 1/4] \cup \{\mu_s - 1/4\}`$;
4. $`\mu_s \in [0, 1/4]`$, $`\mu_f \in [1/4, \mu_s + 1/4]`$: $`[1/4, \mu_s + 1/4]`$.
"""

from dataclasses import dataclass
import logging

from beartype.typing import (
    List,
    Optional,
    Tuple,
)
import numpy as np

from rijax.base import (
    Module,
    check_open_unit,
    check_positive,
)
from rijax.beliefs import DiscreteBeliefDistribution
from rijax.equilibrium import (
    DeviationSearchConfig,
    EquilibriumReport,
    OutOfRegionError,
    check_profile,
    out_of_region_report,
)
from rijax.receiver import (
    AdmissibleSupport,
    ClosedFormResponder,
    ModelParams,
    best_response,
)
from rijax.typing import (
    Array,
    Float,
    ScalarFloat,
)

logger = logging.getLogger(__name__)

CASE_TOL = 1e-12
AFFINE_TOL = 1e-9


@dataclass
class HeteroParams(Module):
    """Priors of the two senders and the attention cost coefficient.

    Attributes
    ----------
        mu1 (float): prior of sender 1's quality.
        mu2 (float): prior of sender 2's quality.
        k (float): attention cost coefficient; closed forms need `k = 1`.
    """

    mu1: float = 0.5
    mu2: float = 0.5
    k: float = 1.0

    def __post_init__(self) -> None:
        check_open_unit("mu1", self.mu1)
        check_open_unit("mu2", self.mu2)
        check_positive("k", self.k)

    def prior(self, sender: int) -> float:
        if sender not in (1, 2):
            raise ValueError(f"sender must be 1 or 2, got {sender}.")
        return float(self.mu1 if sender == 1 else self.mu2)

    def model_params(self, grid_points: int = 2001) -> ModelParams:
        return ModelParams(k=self.k, mu=self.mu1, mu2=self.mu2, grid_points=grid_points)


@dataclass(frozen=True)
class HeteroStage1:
    """Stage-1 beliefs available to an optimal garbling under heterogeneous priors."""

    case: int
    admissible: AdmissibleSupport
    learn_nothing_first: bool


def _within(x: float, lo: float, hi: float) -> bool:
    return lo - CASE_TOL <= x <= hi + CASE_TOL


def hetero_cases(mu_first: ScalarFloat, mu_second: ScalarFloat) -> List[int]:
    """Cases that apply when the sender with prior `mu_second` is visited second."""
    f, s = float(mu_first), float(mu_second)
    near = _within(f, s - 0.25, s + 0.25)
    applies = {
        1: _within(s, 0.5, 0.75) and near,
        2: _within(s, 0.75, 1.0) and _within(f, s - 0.25, 0.75),
        3: _within(s, 0.25, 0.5) and near,
        4: _within(s, 0.0, 0.25) and _within(f, 0.25, s + 0.25),
    }
    return [case for case, holds in applies.items() if holds]


def _admissible(case: int, s: float) -> AdmissibleSupport:
    sets = {
        1: ((s - 0.25, 0.75), (s + 0.25, s + 0.25)),
        2: ((s - 0.25, 0.75),),
        3: ((s - 0.25, s - 0.25), (0.25, s + 0.25)),
        4: ((0.25, s + 0.25),),
    }
    return AdmissibleSupport(sets[case])


def _require_unit_cost(hp: HeteroParams) -> None:
    if hp.k != 1.0:
        raise OutOfRegionError(
            f"heterogeneous closed forms need k = 1, got k={hp.k}."
        )


def hetero_stage1(hp: HeteroParams, second_visited: int = 2) -> HeteroStage1:
    """Admissible stage-1 beliefs about the first-visited sender.

    Args:
        hp (HeteroParams): the priors, with `k = 1`.
        second_visited (int): which sender is visited second.

    Returns:
        HeteroStage1: the lowest applicable case and its admissible set.

    Raises:
        OutOfRegionError: if no case applies or `k != 1`.
    """
    _require_unit_cost(hp)
    s = hp.prior(second_visited)
    f = hp.prior(3 - second_visited)
    cases = hetero_cases(f, s)
    if not cases:
        raise OutOfRegionError(
            f"no stage-1 case applies with mu_first={f}, mu_second={s}."
        )
    admissible = _admissible(cases[0], s)
    return HeteroStage1(
        case=cases[0],
        admissible=admissible,
        learn_nothing_first=admissible.contains(f),
    )


def hetero_value(hp: HeteroParams) -> float:
    r"""Receiver value $`\mu_1^2 + \mu_2^2 + (\mu_1 + \mu_2)/2 - 2\mu_1\mu_2 + 1/16`$.

    Raises:
        OutOfRegionError: if no case applies or `k != 1`.
    """
    _require_unit_cost(hp)
    m1, m2 = hp.mu1, hp.mu2
    if not (hetero_cases(m1, m2) or hetero_cases(m2, m1)):
        raise OutOfRegionError(f"no stage-1 case applies at mu1={m1}, mu2={m2}.")
    return m1**2 + m2**2 + 0.5 * (m1 + m2) - 2.0 * m1 * m2 + 1.0 / 16.0


def hetero_fullinfo_region(mu1: ScalarFloat, mu2: ScalarFloat) -> bool:
    """Sufficient conditions for full disclosure to be an equilibrium at `k = 1`."""
    lo, hi = sorted((float(mu1), float(mu2)))
    if hi - lo > 0.25 + CASE_TOL:
        return False
    return (
        (_within(lo, 0.25, 0.75) and _within(hi, 0.25, 0.75))
        or (lo <= 0.75 + CASE_TOL and hi >= 0.75 - CASE_TOL)
        or (lo <= 0.25 + CASE_TOL and hi >= 0.25 - CASE_TOL)
    )


def selection_profile(
    hp: HeteroParams, n: int = 201, second_visited: int = 2
) -> Tuple[Float[Array, " M"], Float[Array, " M"]]:
    """First-visited sender's selection probability over the admissible stage-1 beliefs.

    Both senders disclose fully; `n` points are spread over each admissible
    interval.
    """
    stage1 = hetero_stage1(hp, second_visited)
    x = np.unique(
        np.concatenate([np.linspace(a, b, n if b > a else 1) for a, b in stage1.admissible.intervals])
    )
    x = np.clip(x, 0.0, 1.0)
    responder = ClosedFormResponder(lo=0.0, hi=1.0, mu=hp.prior(second_visited), k=hp.k)
    _, selected = responder.continuation(x)
    return x, np.asarray(selected)


def affine_residual(x: Float[Array, " M"], p: Float[Array, " M"]) -> float:
    """Largest deviation of `p` from an affine fit, ignoring entries equal to 0 or 1."""
    x, p = np.asarray(x), np.asarray(p)
    interior = (p > AFFINE_TOL) & (p < 1.0 - AFFINE_TOL)
    if interior.sum() < 3:
        return 0.0
    slope, intercept = np.polyfit(x[interior], p[interior], 1)
    return float(np.max(np.abs(p[interior] - (slope * x[interior] + intercept))))


def check_hetero_fullinfo(
    hp: HeteroParams,
    search: Optional[DeviationSearchConfig] = None,
    numeric: bool = False,
) -> EquilibriumReport:
    """Is full disclosure by both senders an equilibrium under heterogeneous priors?

    Inside the sufficient region the verdict is `equilibrium`; outside it no
    verdict is claimed, since the region is not known to be necessary.

    Args:
        hp (HeteroParams): the priors, with `k = 1`.
        search (Optional[DeviationSearchConfig]): settings of the optional
            numeric deviation search.
        numeric (bool): cross-check the verdict with a deviation search.

    Returns:
        EquilibriumReport: the verdict, with the applicable cases, the
        exchangeability check, both visit-order values and the affine fit of
        the selection probability in `details`.
    """
    if hp.k != 1.0:
        return out_of_region_report("heterogeneous closed forms need k = 1", k=hp.k)
    if not hetero_fullinfo_region(hp.mu1, hp.mu2):
        return out_of_region_report(
            "the priors lie outside the sufficient region", mu1=hp.mu1, mu2=hp.mu2
        )

    cases = {
        "sender2_second": hetero_cases(hp.mu1, hp.mu2),
        "sender1_second": hetero_cases(hp.mu2, hp.mu1),
    }
    params = hp.model_params()
    full = (
        DiscreteBeliefDistribution.full_information(hp.mu1),
        DiscreteBeliefDistribution.full_information(hp.mu2),
    )
    strategy = best_response(*full, params)
    details = {
        "cases": cases,
        "exchangeable": bool(cases["sender2_second"]) == bool(cases["sender1_second"]),
        "value": hetero_value(hp),
        "order_values": [plan.value for plan in strategy.plans],
        "affine_residual": max(
            [
                affine_residual(*selection_profile(hp, second_visited=s))
                for s, key in ((1, "sender1_second"), (2, "sender2_second"))
                if cases[key]
            ],
            default=0.0,
        ),
    }

    verdict = "equilibrium"
    margin = 0.0
    favorable = float("nan")
    certificate = None
    if numeric:
        report = check_profile(*full, params, search, closed_form=True)
        margin, favorable = report.margin, report.favorable_margin
        certificate = report.best_deviation
        search = DeviationSearchConfig() if search is None else search
        if margin > search.profit_threshold:
            verdict = "inconclusive"
    logger.info("heterogeneous priors (%s, %s): %s", hp.mu1, hp.mu2, verdict)
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=strategy.sender_payoffs(),
        receiver_value=strategy.value,
        margin=margin,
        favorable_margin=favorable,
        best_deviation=certificate,
        closed_form=True,
        details=details,
    )


__all__ = [
    "HeteroParams",
    "HeteroStage1",
    "hetero_cases",
    "hetero_stage1",
    "hetero_value",
    "hetero_fullinfo_region",
    "selection_profile",
    "affine_residual",
    "check_hetero_fullinfo",
]

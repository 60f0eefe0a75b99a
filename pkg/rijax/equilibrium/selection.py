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
r"""Selection probabilities in the region where stage-1 optima are not unique.

There the receiver is indifferent among all garblings supported on the
admissible set, and the first-visited sender is selected with probability
$`P(x) = 2k(x - \mu) + 1/2`$ at every admissible posterior $`x`$, which
averages to $`1/2`$ under any Bayes-plausible garbling.
"""

from beartype.typing import Union
import numpy as np

from rijax.beliefs import (
    MASS_TOL,
    DiscreteBeliefDistribution,
    mean,
)
from rijax.concavify import GarblingSolution
from rijax.receiver import (
    ModelParams,
    stage1_case,
    stage1_closed_form,
)
from rijax.typing import ScalarFloat

MULTIPLICITY_CASES = ("1a", "2a", "3", "4a")
REGION_TOL = 1e-12


def full_info_region(k: ScalarFloat, mu: ScalarFloat) -> bool:
    """Whether full disclosure by both senders is an equilibrium."""
    k, mu = float(k), float(mu)
    d = 1.0 / (4.0 * k)
    return k > 0.5 and d - REGION_TOL <= mu <= 1.0 - d + REGION_TOL


def binary_symmetric_region(
    k: ScalarFloat, mu: ScalarFloat, l: ScalarFloat, h: ScalarFloat
) -> bool:
    r"""Whether both senders offering $`\{l, h\}`$ is an equilibrium."""
    k, mu, l, h = float(k), float(mu), float(l), float(h)
    d = 1.0 / (4.0 * k)
    return k > 1.0 / (2.0 * (h - l)) and l + d - REGION_TOL <= mu <= h - d + REGION_TOL


def min_cost_for_full_info(mu: ScalarFloat) -> float:
    r"""Smallest $`k`$ at which full disclosure is an equilibrium at prior `mu`.

    The bound is attained for every $`\mu \ne 1/2`$; at $`\mu = 1/2`$ the
    condition $`k > 1/2`$ is strict.
    """
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu}.")
    return max(1.0 / (4.0 * mu), 1.0 / (4.0 * (1.0 - mu)))


def in_multiplicity_region(params: ModelParams) -> bool:
    return stage1_case(params) in MULTIPLICITY_CASES


def _affine_selection(x, params: ModelParams):
    x = np.asarray(x, dtype=np.float64)
    d = params.d
    p = 2.0 * params.k * (x - params.mu) + 0.5
    p = np.where(np.abs(x - (params.mu - d)) <= MASS_TOL, 0.0, p)
    p = np.where(np.abs(x - (params.mu + d)) <= MASS_TOL, 1.0, p)
    return np.clip(p, 0.0, 1.0)


def selection_probability(x: ScalarFloat, params: ModelParams) -> float:
    """Probability that the first-visited sender is selected at stage-1 posterior `x`.

    Args:
        x (ScalarFloat): a posterior in the admissible stage-1 support.
        params (ModelParams): parameters in the multiplicity region.

    Returns:
        float: the selection probability.
    """
    if not in_multiplicity_region(params):
        raise ValueError(
            f"selection probabilities are characterised only where stage-1 optima are"
            f" not unique; case {stage1_case(params)} applies at k={params.k}, mu={params.mu}."
        )
    admissible = stage1_closed_form(params).admissible
    if not admissible.contains(x):
        raise ValueError(f"x={float(x)} is not in the admissible stage-1 support {admissible.to_list()}.")
    return float(_affine_selection(x, params))


def first_visit_value(
    F: Union[GarblingSolution, DiscreteBeliefDistribution], params: ModelParams
) -> float:
    """Expected selection probability of the first-visited sender under `F`.

    `F` must be an optimal stage-1 garbling, i.e. Bayes plausible and supported
    on the admissible set.
    """
    dist = F.distribution if isinstance(F, GarblingSolution) else F
    if abs(mean(dist) - params.mu) > MASS_TOL:
        raise ValueError(f"F has mean {mean(dist)}, not the prior {params.mu}.")
    if not in_multiplicity_region(params):
        raise ValueError(f"case {stage1_case(params)} has a unique stage-1 optimum.")
    admissible = stage1_closed_form(params).admissible
    if not admissible.contains_all(dist):
        raise ValueError(
            f"F is not an optimal stage-1 garbling: support outside {admissible.to_list()}."
        )
    weights = np.asarray(dist.weights)
    return float(np.dot(weights, _affine_selection(dist.points, params)))


__all__ = [
    "full_info_region",
    "binary_symmetric_region",
    "min_cost_for_full_info",
    "in_multiplicity_region",
    "selection_probability",
    "first_visit_value",
]

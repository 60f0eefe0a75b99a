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
from abc import (
    ABC,
    abstractmethod,
)
from dataclasses import dataclass

import jax.numpy as jnp
import jax.random as jr
from jaxopt import ScipyBoundedMinimize

from rijax.search_space import (
    AbstractSearchSpace,
    BoxSearchSpace,
)
from rijax.typing import (
    Array,
    Float,
    KeyArray,
    Objective,
    ScalarFloat,
)


def _get_discrete_maximizer(
    query_points: Float[Array, "N D"], objective: Objective
) -> Float[Array, "1 D"]:
    """Get the point which maximises the objective evaluated at a given set of points.

    Args:
        query_points (Float[Array, "N D"]): Set of points at which to evaluate the
        objective.
        objective (Objective): Batched objective to be evaluated at `query_points`.

    Returns:
        Float[Array, "1 D"]: Point in `query_points` which maximises the objective.
        Ties go to the first point.
    """
    objective_values = objective(query_points)
    best_idx = jnp.argmax(objective_values, axis=0, keepdims=True)
    return jnp.take_along_axis(query_points, best_idx[:, None], axis=0)


@dataclass
class AbstractMaximizer(ABC):
    """Abstract base class for maximisers of batched objectives."""

    @abstractmethod
    def maximize(
        self,
        objective: Objective,
        search_space: AbstractSearchSpace,
        key: KeyArray,
    ) -> Float[Array, "1 D"]:
        """Maximize the given objective over the search space provided.

        Args:
            objective (Objective): Objective to be maximized.
            search_space (AbstractSearchSpace): Search space over which to maximize
            the objective.
            key (KeyArray): JAX PRNG key.

        Returns:
            Float[Array, "1 D"]: Point at which the objective is maximized.
        """
        raise NotImplementedError


@dataclass
class GridThenLBFGSBMaximizer(AbstractMaximizer):
    """Evaluate the objective on a lattice of the box, optionally topped up with
    `num_random_samples` uniform draws, and polish the best point with L-BFGS-B.

    The polished point is returned only if it improves on the best lattice
    point; objectives that are flat or discontinuous around the optimum keep
    the lattice answer.
    """

    step: float = 0.01
    num_random_samples: int = 0

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError(f"step must be positive, got {self.step}.")
        if self.num_random_samples < 0:
            raise ValueError(
                f"num_random_samples must be nonnegative, got {self.num_random_samples}."
            )

    def maximize(
        self,
        objective: Objective,
        search_space: BoxSearchSpace,
        key: KeyArray,
    ) -> Float[Array, "1 D"]:
        query_points = search_space.lattice(self.step)
        if self.num_random_samples > 0:
            key, subkey = jr.split(key)
            query_points = jnp.concatenate(
                [query_points, search_space.sample(self.num_random_samples, subkey)]
            )
        best_point = _get_discrete_maximizer(query_points, objective)

        def _scalar_objective(x: Float[Array, "1 D"]) -> ScalarFloat:
            # Jaxopt minimises scalar functions.
            return -objective(x)[0]

        lbfgsb = ScipyBoundedMinimize(fun=_scalar_objective, method="l-bfgs-b")
        bounds = (search_space.lower_bounds[None], search_space.upper_bounds[None])
        refined_point = lbfgsb.run(best_point, bounds=bounds).params
        if _scalar_objective(refined_point) < _scalar_objective(best_point):
            return refined_point
        return best_point


__all__ = [
    "AbstractMaximizer",
    "GridThenLBFGSBMaximizer",
]

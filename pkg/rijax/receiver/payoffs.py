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

from dataclasses import dataclass

from beartype.typing import (
    Optional,
    Union,
)
import jax.numpy as jnp
from jaxtyping import Float

from rijax.base import (
    Module,
    check_open_unit,
    check_positive,
    static_field,
)
from rijax.beliefs import CostModel
from rijax.typing import (
    Array,
    PosteriorTie,
    ScalarFloat,
)


@dataclass
class ModelParams(Module):
    r"""Parameters of the two-sender game.

    Attributes
    ----------
        k (float): attention cost coefficient; the floor $`k_F`$ when `cost`
            is experiment dependent.
        mu (float): prior of sender 1's quality.
        l (float): lower support bound of binary sender experiments.
        h (float): upper support bound of binary sender experiments.
        mu2 (Optional[float]): prior of sender 2's quality; defaults to `mu`.
        cost (Optional[CostModel]): attention cost model; defaults to the
            constant coefficient `k`.
        posterior_tie (PosteriorTie): which sender is selected when the first
            posterior equals the other sender's prior.
        grid_points (int): number of uniform nodes of the numerical grids.
    """

    k: float = 1.0
    mu: float = 0.5
    l: float = 0.0
    h: float = 1.0
    mu2: Optional[float] = None
    cost: Optional[CostModel] = None
    posterior_tie: PosteriorTie = static_field("first")
    grid_points: int = static_field(2001)

    def __post_init__(self) -> None:
        if self.cost is not None:
            self.k = float(self.cost.floor)
        check_positive("k", self.k)
        check_open_unit("mu", self.mu)
        if not 0.0 <= self.l < self.mu < self.h <= 1.0:
            raise ValueError(
                f"need 0 <= l < mu < h <= 1, got l={self.l}, mu={self.mu}, h={self.h}."
            )
        if self.mu2 is not None and not self.l < self.mu2 < self.h:
            raise ValueError(
                f"mu2 must lie in (l, h) = ({self.l}, {self.h}), got {self.mu2}."
            )
        if self.grid_points < 3 or self.grid_points % 2 == 0:
            raise ValueError(
                f"grid_points must be odd and at least 3, got {self.grid_points}."
            )

    @property
    def d(self) -> float:
        r"""Half-width $`1/(4k)`$ of the unrestricted stage-2 chord."""
        return 1.0 / (4.0 * self.k)

    @property
    def prior2(self) -> float:
        return float(self.mu if self.mu2 is None else self.mu2)

    def prior(self, sender: int) -> float:
        """Prior of sender 1 or 2."""
        if sender not in (1, 2):
            raise ValueError(f"sender must be 1 or 2, got {sender}.")
        return float(self.mu) if sender == 1 else self.prior2

    @property
    def cost_model(self) -> CostModel:
        return self.cost if self.cost is not None else CostModel(k=float(self.k))


def stage2_payoff(
    y: Union[ScalarFloat, Float[Array, "..."]],
    x: Union[ScalarFloat, Float[Array, "..."]],
    params: ModelParams,
) -> Float[Array, "..."]:
    r"""Stage-2 payoff $`\max\{x, y\} - k(y - \mu)^2`$.

    Args:
        y: posterior about the second-visited sender.
        x: posterior about the first-visited sender.
        params (ModelParams): model parameters; `mu` is the second sender's prior.

    Returns:
        Float[Array, "..."]: the payoff, broadcast over `y` and `x`.
    """
    y = jnp.asarray(y, dtype=jnp.float64)
    x = jnp.asarray(x, dtype=jnp.float64)
    return jnp.maximum(x, y) - params.k * (y - params.mu) ** 2


__all__ = ["ModelParams", "stage2_payoff"]

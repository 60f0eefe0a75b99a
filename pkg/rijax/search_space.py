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
from jaxtyping import Float
import numpy as np

from rijax.typing import (
    Array,
    KeyArray,
)


@dataclass
class AbstractSearchSpace(ABC):
    """Domain over which sender experiments are optimised."""

    @abstractmethod
    def sample(self, num_points: int, key: KeyArray) -> Float[Array, "N D"]:
        """Sample points from the search space.

        Args:
            num_points (int): Number of points to be sampled from the search space.
            key (KeyArray): JAX PRNG key.

        Returns:
            Float[Array, "N D"]: `num_points` points sampled from the search space.
        """
        raise NotImplementedError

    @abstractmethod
    def lattice(self, step: float) -> Float[Array, "N D"]:
        """Regular lattice of points covering the search space."""
        raise NotImplementedError

    @property
    @abstractmethod
    def dimensionality(self) -> int:
        raise NotImplementedError


@dataclass
class BoxSearchSpace(AbstractSearchSpace):
    r"""Axis-aligned box $`\prod_d [\text{lower}_d, \text{upper}_d]`$."""

    lower_bounds: Float[Array, " D"]
    upper_bounds: Float[Array, " D"]

    def __post_init__(self):
        self.lower_bounds = jnp.asarray(self.lower_bounds, dtype=jnp.float64)
        self.upper_bounds = jnp.asarray(self.upper_bounds, dtype=jnp.float64)
        if self.lower_bounds.shape != self.upper_bounds.shape:
            raise ValueError("Lower and upper bounds must have the same shape.")
        if self.lower_bounds.shape[0] == 0:
            raise ValueError("Lower and upper bounds cannot be empty")
        if not (self.lower_bounds <= self.upper_bounds).all():
            raise ValueError("Lower bounds must be less than upper bounds.")

    @property
    def dimensionality(self) -> int:
        return self.lower_bounds.shape[0]

    def sample(self, num_points: int, key: KeyArray) -> Float[Array, "N D"]:
        """Sample points uniformly from the box."""
        if num_points <= 0:
            raise ValueError("Number of points must be greater than 0.")
        return jr.uniform(
            key,
            (num_points, self.dimensionality),
            dtype=jnp.float64,
            minval=self.lower_bounds,
            maxval=self.upper_bounds,
        )

    def lattice(self, step: float) -> Float[Array, "N D"]:
        """Points spaced `step` apart along every axis, box corners included."""
        if not step > 0.0:
            raise ValueError(f"step must be positive, got {step}.")
        axes = []
        for lo, hi in zip(np.asarray(self.lower_bounds), np.asarray(self.upper_bounds)):
            n = max(int(np.ceil((hi - lo) / step - 1e-9)), 0)
            axes.append(np.linspace(lo, hi, n + 1))
        mesh = np.meshgrid(*axes, indexing="ij")
        return jnp.asarray(np.stack([m.ravel() for m in mesh], axis=-1))


__all__ = [
    "AbstractSearchSpace",
    "BoxSearchSpace",
]

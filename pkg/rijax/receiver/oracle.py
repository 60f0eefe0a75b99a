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
"""Numeric counterparts of the closed forms, built on `rijax.concavify`."""

from functools import partial

import jax
import jax.numpy as jnp
from jaxtyping import Float

from rijax.concavify import (
    GarblingSolution,
    SampledFunction,
    _batched_upper_hull,
    _envelope_chord,
    breakpoint_grid,
    optimal_garbling,
)
from rijax.receiver.closed_form import stage1_value
from rijax.receiver.payoffs import (
    ModelParams,
    stage2_payoff,
)
from rijax.typing import (
    Array,
    ScalarFloat,
)


def stage2_breakpoints(x, mu, k, lo, hi) -> Float[Array, " B"]:
    """Kink and tangency points of the stage-2 payoff in the second posterior."""
    d = 1.0 / (4.0 * k)
    return jnp.stack(
        [
            x,
            mu,
            x - d,
            x + d,
            lo + jnp.sqrt(jnp.maximum(x - lo, 0.0) / k),
            hi - jnp.sqrt(jnp.maximum(hi - x, 0.0) / k),
        ]
    )


def stage1_breakpoints(mu, k, lo, hi, prior=None) -> Float[Array, " B"]:
    """Posteriors at which the optimal stage-2 chord changes type."""
    d = 1.0 / (4.0 * k)
    prior = mu if prior is None else prior
    return jnp.stack(
        [
            jnp.asarray(prior, dtype=jnp.float64),
            mu,
            mu - d,
            mu + d,
            lo + d,
            hi - d,
            lo + k * (mu - lo) ** 2,
            hi - k * (hi - mu) ** 2,
            lo + k * (hi - lo) ** 2,
            hi - k * (hi - lo) ** 2,
        ]
    )


def stage2_oracle(x: ScalarFloat, params: ModelParams) -> GarblingSolution:
    r"""Optimal stage-2 garbling by concavifying $`U_2(\cdot; x)`$ on $`[l, h]`$."""
    x = float(x)
    if not params.l <= x <= params.h:
        raise ValueError(f"x must lie in [l, h] = [{params.l}, {params.h}], got {x}.")
    f = SampledFunction.from_callable(
        lambda y: stage2_payoff(y, x, params),
        params.l,
        params.h,
        params.grid_points,
        stage2_breakpoints(x, params.mu, params.k, params.l, params.h),
    )
    return optimal_garbling(f, params.mu)


@partial(jax.jit, static_argnames="n")
def _stage2_oracle_batch(
    x: Float[Array, " D"],
    mu: Float[Array, " D"],
    k: Float[Array, " D"],
    lo: Float[Array, " D"],
    hi: Float[Array, " D"],
    n: int = 2001,
):
    """Batched stage-2 oracle returning `(y1, y2, nu, value, learns)` per draw."""

    def _grid(x, mu, k, lo, hi):
        grid, mask = breakpoint_grid(lo, hi, n, stage2_breakpoints(x, mu, k, lo, hi))
        values = jnp.maximum(x, grid) - k * (grid - mu) ** 2
        return grid, values, mask

    grid, values, mask = jax.vmap(_grid)(x, mu, k, lo, hi)
    vertices = _batched_upper_hull(grid, values, mask, 1e-12)
    return jax.vmap(_envelope_chord)(grid, values, vertices, mu)


def stage1_oracle(params: ModelParams) -> GarblingSolution:
    r"""Optimal stage-1 garbling by concavifying $`U_1`$ on $`[l, h]`$."""
    f = SampledFunction.from_callable(
        lambda x: stage1_value(x, params),
        params.l,
        params.h,
        params.grid_points,
        stage1_breakpoints(params.mu, params.k, params.l, params.h),
    )
    return optimal_garbling(f, params.mu)


__all__ = [
    "stage2_oracle",
    "stage1_oracle",
    "stage2_breakpoints",
    "stage1_breakpoints",
]

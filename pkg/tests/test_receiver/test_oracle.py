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
from jax import config
import jax.numpy as jnp
import jax.random as jr
import numpy as np
import pytest

from rijax.receiver import (
    ModelParams,
    stage1_closed_form,
    stage1_oracle,
    stage2_choice,
    stage2_oracle,
)
from rijax.receiver.oracle import (
    _stage2_oracle_batch,
    stage1_breakpoints,
    stage2_breakpoints,
)

config.update("jax_enable_x64", True)


@pytest.mark.parametrize(
    "x, mu, k, support",
    [
        (0.5, 0.5, 1.0, (0.25, 0.75)),
        (0.9, 0.5, 1.0, (0.5,)),
        (0.2, 0.3, 1.0, (0.0, np.sqrt(0.2))),
        (0.5, 0.5, 0.4, (0.0, 1.0)),
    ],
)
def test_stage2_oracle(x: float, mu: float, k: float, support):
    solution = stage2_oracle(x, ModelParams(k=k, mu=mu))
    assert np.allclose(solution.distribution.points, support, atol=1e-9)


def test_stage2_oracle_rejects_posterior_outside_support():
    with pytest.raises(ValueError):
        stage2_oracle(0.1, ModelParams(mu=0.5, l=0.2, h=0.8))


def test_breakpoints_shapes():
    assert stage2_breakpoints(0.5, 0.5, 1.0, 0.0, 1.0).shape == (6,)
    assert stage1_breakpoints(0.5, 1.0, 0.0, 1.0).shape == (10,)


def test_stage2_closed_form_agrees_with_oracle_on_random_draws():
    n = 256
    keys = jr.split(jr.PRNGKey(123), 5)
    k = jr.uniform(keys[0], (n,), minval=0.3, maxval=3.0)
    lo = jr.uniform(keys[1], (n,), maxval=0.4)
    hi = jr.uniform(keys[2], (n,), minval=0.6, maxval=1.0)
    mu = lo + (hi - lo) * jr.uniform(keys[3], (n,), minval=0.05, maxval=0.95)
    x = lo + (hi - lo) * jr.uniform(keys[4], (n,))

    y1, y2, nu, value, learns = _stage2_oracle_batch(x, mu, k, lo, hi, n=2001)
    closed = stage2_choice(x, mu, k, lo, hi)

    assert jnp.allclose(value, closed.value, atol=1e-5)
    spacing = (hi - lo) / 2000
    both = learns & closed.learn
    assert bool(jnp.all(jnp.where(both, jnp.abs(y1 - closed.y1) <= 2 * spacing, True)))
    assert bool(jnp.all(jnp.where(both, jnp.abs(y2 - closed.y2) <= 2 * spacing, True)))


@pytest.mark.parametrize("k, mu", [(1.0, 0.5), (2.0, 0.5)])
def test_stage1_oracle_keeps_extreme_chord_on_flat_envelope(k: float, mu: float):
    oracle = stage1_oracle(ModelParams(k=k, mu=mu))
    closed = stage1_closed_form(ModelParams(k=k, mu=mu)).most_informative
    assert np.allclose(
        oracle.distribution.points, closed.distribution.points, atol=1e-6
    )

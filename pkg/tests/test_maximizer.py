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
from jaxtyping import (
    Array,
    Float,
)
import pytest

from rijax.maximizer import (
    AbstractMaximizer,
    GridThenLBFGSBMaximizer,
    _get_discrete_maximizer,
)
from rijax.search_space import BoxSearchSpace

config.update("jax_enable_x64", True)


def _quadratic(x: Float[Array, "N D"]) -> Float[Array, " N"]:
    return -((x[:, 0] - 0.33) ** 2) - (x[:, 1] - 0.71) ** 2


def _staircase(x: Float[Array, "N D"]) -> Float[Array, " N"]:
    return jnp.floor(4.0 * x[:, 0]) - x[:, 1]


def test_abstract_maximizer():
    with pytest.raises(TypeError):
        AbstractMaximizer()


def test_discrete_maximizer_returns_first_best_point():
    points = jnp.array([[0.0, 0.0], [0.5, 0.5], [0.5, 0.5], [1.0, 1.0]])
    values = lambda x: -jnp.abs(x[:, 0] - 0.5)
    best = _get_discrete_maximizer(points, values)
    assert best.shape == (1, 2)
    assert jnp.allclose(best, jnp.array([[0.5, 0.5]]))


@pytest.mark.parametrize("step, num_random_samples", [(0.0, 0), (0.1, -1)])
def test_invalid_maximizer(step: float, num_random_samples: int):
    with pytest.raises(ValueError):
        GridThenLBFGSBMaximizer(step=step, num_random_samples=num_random_samples)


@pytest.mark.parametrize("num_random_samples", [0, 20])
def test_grid_then_lbfgsb_refines(num_random_samples: int):
    space = BoxSearchSpace(
        lower_bounds=jnp.array([0.0, 0.0]), upper_bounds=jnp.array([1.0, 1.0])
    )
    maximizer = GridThenLBFGSBMaximizer(step=0.1, num_random_samples=num_random_samples)
    best = maximizer.maximize(_quadratic, space, jr.PRNGKey(0))
    assert best.shape == (1, 2)
    assert jnp.allclose(best, jnp.array([[0.33, 0.71]]), atol=1e-4)


def test_grid_then_lbfgsb_keeps_lattice_answer_on_flat_objective():
    space = BoxSearchSpace(
        lower_bounds=jnp.array([0.0, 0.0]), upper_bounds=jnp.array([1.0, 1.0])
    )
    maximizer = GridThenLBFGSBMaximizer(step=0.25)
    best = maximizer.maximize(_staircase, space, jr.PRNGKey(0))
    assert float(_staircase(best)[0]) == pytest.approx(4.0)
    assert bool(jnp.all(best >= space.lower_bounds))
    assert bool(jnp.all(best <= space.upper_bounds))

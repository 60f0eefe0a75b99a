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
from beartype.roar import BeartypeCallHintParamViolation
from jax import config
import jax.numpy as jnp
import numpy as np
import pytest

from rijax.beliefs import (
    CostModel,
    DiscreteBeliefDistribution,
    atom_benchmark,
    attention_cost,
    from_text,
    informativeness_rank,
    integrated_cdf,
    is_garbling,
    load_distribution,
    mean,
    to_text,
    uniform_benchmark,
    variance,
)

config.update("jax_enable_x64", True)


def test_construction_merges_and_sorts():
    d = DiscreteBeliefDistribution(
        points=np.array([0.8, 0.2, 0.8, 0.5]),
        weights=np.array([0.25, 0.5, 0.25, 0.0]),
    )
    assert d.n_points == 2
    assert jnp.allclose(d.points, jnp.array([0.2, 0.8]))
    assert jnp.allclose(d.weights, jnp.array([0.5, 0.5]))
    assert mean(d) == pytest.approx(0.5)


@pytest.mark.parametrize(
    "points, weights",
    [
        (np.array([0.2, 0.8]), np.array([0.5, 0.6])),
        (np.array([0.2, 1.2]), np.array([0.5, 0.5])),
        (np.array([0.2, 0.8]), np.array([-0.5, 1.5])),
        (np.array([]), np.array([])),
        (np.array([0.2, np.nan]), np.array([0.5, 0.5])),
    ],
)
def test_invalid_distributions(points, weights):
    with pytest.raises((BeartypeCallHintParamViolation, ValueError)):
        DiscreteBeliefDistribution(points=points, weights=weights)


def test_single_precision_warns():
    with pytest.warns(UserWarning, match="float64"):
        DiscreteBeliefDistribution(
            points=np.array([0.5], dtype=np.float32),
            weights=np.array([1.0], dtype=np.float32),
        )


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.9])
def test_constructors(mu: float):
    full = DiscreteBeliefDistribution.full_information(mu)
    assert full.is_binary
    assert full.support_bounds == (0.0, 1.0)
    assert float(full.weights[1]) == pytest.approx(mu)
    assert variance(full) == pytest.approx(mu * (1.0 - mu))
    assert informativeness_rank(full) == pytest.approx(1.0)

    none = DiscreteBeliefDistribution.degenerate(mu)
    assert none.is_degenerate
    assert informativeness_rank(none) == 0.0


def test_binary_mean_outside_support():
    with pytest.raises(ValueError, match="must lie in"):
        DiscreteBeliefDistribution.binary(0.3, 0.6, 0.7)


def test_integrated_cdf():
    d = DiscreteBeliefDistribution.binary(0.0, 1.0, 0.5)
    t = jnp.array([0.0, 0.5, 1.0])
    assert jnp.allclose(integrated_cdf(d, t), jnp.array([0.0, 0.25, 0.5]))


def test_is_garbling():
    full = DiscreteBeliefDistribution.full_information(0.5)
    middle = DiscreteBeliefDistribution.binary(0.25, 0.75, 0.5)
    none = DiscreteBeliefDistribution.degenerate(0.5)

    assert is_garbling(middle, full)
    assert is_garbling(none, middle)
    assert is_garbling(full, full)
    assert not is_garbling(full, middle)

    shifted = DiscreteBeliefDistribution.binary(0.25, 0.75, 0.6)
    assert not is_garbling(shifted, full)


def test_garbling_with_three_points():
    p = DiscreteBeliefDistribution.from_mapping({0.1: 0.3, 0.5: 0.4, 0.9: 0.3})
    inside = DiscreteBeliefDistribution.binary(0.3, 0.7, 0.5)
    outside = DiscreteBeliefDistribution.binary(0.05, 0.95, 0.5)
    assert is_garbling(inside, p)
    assert not is_garbling(outside, p)


def test_cost_model_validation():
    with pytest.raises(ValueError, match="increasing"):
        CostModel(mode="experiment", k=1.0, schedule=((0.5, 2.0), (0.2, 1.5)))
    with pytest.raises(ValueError, match="decreasing"):
        CostModel(mode="experiment", k=1.0, schedule=((0.2, 1.5), (0.5, 2.0)))
    with pytest.raises(ValueError, match="floor"):
        CostModel(mode="experiment", k=1.0, schedule=((0.2, 0.5),))
    with pytest.raises(ValueError):
        CostModel(mode="constant", k=0.0)


def test_experiment_dependent_coefficient():
    cm = CostModel(mode="experiment", k=1.0, schedule=((0.0, 3.0), (0.5, 2.0)))
    assert cm.floor == 1.0
    assert cm.coefficient(DiscreteBeliefDistribution.full_information(0.5)) == 1.0
    half = DiscreteBeliefDistribution.binary(0.25, 0.75, 0.5)
    assert informativeness_rank(half) == pytest.approx(0.25)
    assert cm.coefficient(half) == 3.0
    assert cm.coefficient_from_rank(0.6) == 2.0
    with pytest.raises(ValueError):
        cm.coefficient()

    ranks = cm.coefficients_for_binary(np.array([0.0, 0.25]), np.array([1.0, 0.75]), 0.5)
    assert np.allclose(ranks, [1.0, 3.0])


def test_attention_cost():
    q = DiscreteBeliefDistribution.binary(0.25, 0.75, 0.5)
    assert attention_cost(q, 0.5, CostModel(k=2.0)) == pytest.approx(0.125)


def test_uniform_benchmark():
    d = uniform_benchmark(0.4, n_points=200)
    assert mean(d) == pytest.approx(0.4)
    assert d.support_bounds[1] < 0.8
    with pytest.raises(ValueError):
        uniform_benchmark(0.6)


def test_atom_benchmark():
    mu = 0.7
    d = atom_benchmark(mu, n_points=200)
    assert mean(d) == pytest.approx(mu)
    assert float(d.points[-1]) == 1.0
    assert float(d.weights[-1]) == pytest.approx(2.0 - 1.0 / mu)
    with pytest.raises(ValueError):
        atom_benchmark(0.4)


def test_text_record(tmp_path):
    d = DiscreteBeliefDistribution.from_mapping({0.1: 0.3, 0.5: 0.4, 0.9: 0.3})
    text = to_text(d)
    assert text.startswith("# mean=")

    path = tmp_path / "p.txt"
    path.write_text(text)
    loaded = load_distribution(path)
    assert jnp.allclose(loaded.points, d.points)
    assert jnp.allclose(loaded.weights, d.weights)


def test_text_record_errors():
    with pytest.raises(ValueError, match="declared mean"):
        from_text("# mean=0.9\n0.0,0.5\n1.0,0.5\n")
    with pytest.raises(ValueError, match="line 2"):
        from_text("0.0,0.5\nnot a record\n")
    with pytest.raises(ValueError, match="no 'point,weight'"):
        from_text("# mean=0.5\n")


def _random_experiment(rng: np.random.Generator) -> DiscreteBeliefDistribution:
    n = int(rng.integers(2, 6))
    return DiscreteBeliefDistribution(
        points=rng.random(n), weights=rng.dirichlet(np.ones(n))
    )


def _random_garbling(
    p: DiscreteBeliefDistribution, rng: np.random.Generator
) -> DiscreteBeliefDistribution:
    """Posteriors after passing each point of `p` through a random signal kernel."""
    x, w = np.asarray(p.points), np.asarray(p.weights)
    kernel = rng.dirichlet(np.ones(int(rng.integers(1, 4))), size=x.size)
    joint = w[:, None] * kernel
    mass = joint.sum(axis=0)
    return DiscreteBeliefDistribution(points=(x @ joint) / mass, weights=mass)


def test_garblings_are_cheaper():
    rng = np.random.default_rng(2023)
    for _ in range(1000):
        p = _random_experiment(rng)
        q = _random_garbling(p, rng)
        prior = mean(p)
        k = float(rng.uniform(0.1, 5.0))
        assert mean(q) == pytest.approx(prior, abs=1e-12)
        assert attention_cost(q, prior, CostModel(k=k)) <= (
            attention_cost(p, prior, CostModel(k=k)) + 1e-12
        )


def test_garbling_order_is_reflexive_and_transitive():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p = _random_experiment(rng)
        q = _random_garbling(p, rng)
        r = _random_garbling(q, rng)
        assert is_garbling(p, p)
        assert is_garbling(q, q)
        assert is_garbling(q, p)
        assert is_garbling(r, q)
        assert is_garbling(r, p)


def test_weights_within_tolerance_are_renormalised():
    with pytest.warns(UserWarning, match="renormalising"):
        d = DiscreteBeliefDistribution(
            points=np.array([0.2, 0.8]), weights=np.array([0.5, 0.5 + 5e-10])
        )
    assert float(jnp.sum(d.weights)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError, match="sum to 1"):
        DiscreteBeliefDistribution(
            points=np.array([0.2, 0.8]), weights=np.array([0.5, 0.5 + 1e-8])
        )

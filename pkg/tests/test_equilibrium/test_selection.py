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
import numpy as np
import pytest

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.equilibrium import (
    binary_symmetric_region,
    first_visit_value,
    full_info_region,
    in_multiplicity_region,
    min_cost_for_full_info,
    selection_probability,
)
from rijax.receiver import (
    ModelParams,
    stage1_closed_form,
)

config.update("jax_enable_x64", True)


@pytest.mark.parametrize(
    "k, mu, expected",
    [
        (1.0, 0.5, True),
        (1.0, 0.25, True),
        (1.0, 0.75, True),
        (1.0, 0.1, False),
        (0.5, 0.5, False),
        (0.4, 0.5, False),
        (2.5, 0.1, True),
    ],
)
def test_full_info_region(k: float, mu: float, expected: bool):
    assert full_info_region(k, mu) is expected


def test_binary_symmetric_region():
    assert binary_symmetric_region(1.0, 0.5, 0.2, 0.8)
    assert not binary_symmetric_region(0.8, 0.5, 0.2, 0.8)
    assert not binary_symmetric_region(1.0, 0.3, 0.2, 0.8)
    assert binary_symmetric_region(1.0, 0.5, 0.0, 1.0) == full_info_region(1.0, 0.5)


def test_min_cost_for_full_info():
    assert min_cost_for_full_info(0.25) == pytest.approx(1.0)
    assert min_cost_for_full_info(0.8) == pytest.approx(1.25)
    assert min_cost_for_full_info(0.5) == pytest.approx(0.5)
    for mu in (0.2, 0.3, 0.7):
        assert full_info_region(min_cost_for_full_info(mu), mu)
        assert not full_info_region(0.95 * min_cost_for_full_info(mu), mu)
    with pytest.raises(ValueError):
        min_cost_for_full_info(1.0)


@pytest.mark.parametrize(
    "k, mu, expected",
    [(1.0, 0.5, True), (1.0, 0.7, True), (2.0, 0.5, True), (0.6, 0.5, True), (1.0, 0.2, False), (0.4, 0.3, False)],
)
def test_in_multiplicity_region(k: float, mu: float, expected: bool):
    assert in_multiplicity_region(ModelParams(k=k, mu=mu)) is expected


@pytest.mark.parametrize("x, expected", [(0.5, 0.5), (0.25, 0.0), (0.75, 1.0), (0.4, 0.3)])
def test_selection_probability(x: float, expected: float):
    assert selection_probability(x, ModelParams()) == pytest.approx(expected)


def test_selection_probability_outside_admissible_set():
    with pytest.raises(ValueError, match="admissible"):
        selection_probability(0.9, ModelParams())
    with pytest.raises(ValueError, match="case"):
        selection_probability(0.2, ModelParams(k=1.0, mu=0.2))


def test_first_visit_value_is_one_half_for_every_optimal_garbling():
    params = ModelParams()
    assert first_visit_value(stage1_closed_form(params).most_informative, params) == pytest.approx(0.5)
    spread = DiscreteBeliefDistribution.from_mapping({0.25: 0.25, 0.5: 0.5, 0.75: 0.25})
    narrow = DiscreteBeliefDistribution.binary(0.4, 0.6, 0.5)
    assert first_visit_value(spread, params) == pytest.approx(0.5)
    assert first_visit_value(narrow, params) == pytest.approx(0.5)


def test_first_visit_value_rejects_suboptimal_garblings():
    params = ModelParams()
    with pytest.raises(ValueError, match="not the prior"):
        first_visit_value(DiscreteBeliefDistribution.binary(0.25, 0.75, 0.6), params)
    with pytest.raises(ValueError, match="not an optimal"):
        first_visit_value(DiscreteBeliefDistribution.binary(0.1, 0.9, 0.5), params)


def test_selection_is_affine_on_the_admissible_set():
    params = ModelParams(k=2.0)
    x = np.linspace(0.38, 0.62, 7)
    p = np.array([selection_probability(v, params) for v in x])
    assert np.allclose(np.diff(p, 2), 0.0, atol=1e-12)
    assert np.allclose(np.diff(p) / np.diff(x), 4.0)


@pytest.mark.parametrize(
    "k, first, last", [(0.6, 0.42, 0.58), (1.0, 0.25, 0.75), (2.0, 0.13, 0.87)]
)
def test_full_info_region_flips_at_both_bounds(k: float, first: float, last: float):
    mus = np.linspace(0.01, 0.99, 99)
    inside = np.array([full_info_region(k, mu) for mu in mus])
    assert np.array_equal(inside, (mus >= first - 1e-9) & (mus <= last + 1e-9))
    steps = np.diff(inside.astype(int))
    assert np.count_nonzero(steps == 1) == 1
    assert np.count_nonzero(steps == -1) == 1


def test_full_info_region_is_empty_below_half():
    assert not any(full_info_region(0.4, mu) for mu in np.linspace(0.01, 0.99, 99))

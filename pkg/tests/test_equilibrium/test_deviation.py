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
    DeviationSearchConfig,
    deviation_lattice,
    deviation_search,
    lattice_nodes,
)
from rijax.receiver import (
    ModelParams,
    best_response,
)

config.update("jax_enable_x64", True)

SEARCH = DeviationSearchConfig(step=0.02)
PARAMS = ModelParams(grid_points=401)


def test_lattice_nodes():
    nodes = lattice_nodes(401, 0.02)
    assert nodes.size == 51
    assert nodes[0] == 0.0 and nodes[-1] == 1.0
    assert np.allclose(np.diff(nodes), 0.02)
    assert 0.33 in lattice_nodes(401, 0.02, (0.33,))


def test_deviation_lattice_ends_with_no_disclosure():
    alphas, betas = deviation_lattice(0.5, 401, 0.02)
    assert alphas.shape == betas.shape == (25 * 25 + 1,)
    assert alphas[-1] == betas[-1] == 0.5
    assert np.all(alphas[:-1] < 0.5)
    assert np.all(betas[:-1] > 0.5)


def test_no_profitable_deviation_from_full_information():
    full = DiscreteBeliefDistribution.full_information(0.5)
    result = deviation_search(full, full, PARAMS, SEARCH)
    assert result.margin <= SEARCH.profit_threshold
    assert result.favorable_margin >= result.margin
    assert result.deviations_searched == 2 * (25 * 25 + 1)
    assert result.strategy.first_visit_prob == 0.5
    assert result.three_point_margin is None
    certificate = result.certificate
    assert certificate.sender in (1, 2)
    assert certificate.distribution.mean() == pytest.approx(0.5)
    assert certificate.gain == pytest.approx(result.margin)


def test_unseen_deviations_earn_nothing():
    none = DiscreteBeliefDistribution.degenerate(0.5)
    result = deviation_search(none, none, PARAMS, SEARCH)
    assert result.margin == 0.0
    assert result.favorable_margin == 0.0
    assert result.deviator_ignorable
    assert len(result.ignorable_by_deviation) == result.deviations_searched
    assert all(flag for *_, flag in result.ignorable_by_deviation)


def test_search_accepts_a_precomputed_strategy():
    full = DiscreteBeliefDistribution.full_information(0.5)
    strategy = best_response(full, full, PARAMS)
    result = deviation_search(full, full, PARAMS, SEARCH, strategy=strategy)
    assert result.strategy is strategy


def test_profitable_deviation_below_the_cost_threshold():
    params = ModelParams(k=0.4, grid_points=401)
    full = DiscreteBeliefDistribution.full_information(0.5)
    result = deviation_search(full, full, params, SEARCH)
    assert result.margin > SEARCH.profit_threshold
    certificate = result.certificate
    assert certificate.gain == pytest.approx(
        certificate.first_visit_gain + certificate.second_visit_gain
    )
    lo, hi = certificate.distribution.support_bounds
    assert (lo, hi) != (0.0, 1.0)

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
import jax.random as jr
import numpy as np
import pytest

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.equilibrium import (
    SingleSenderParams,
    acceptance_probability,
    single_sender_response,
    single_sender_solve,
)

config.update("jax_enable_x64", True)


@pytest.mark.parametrize(
    "kwargs",
    [{"lambda_threshold": 0.0}, {"lambda_threshold": 1.0}, {"k": -1.0}, {"mu": 1.0}],
)
def test_invalid_params(kwargs):
    with pytest.raises((BeartypeCallHintParamViolation, ValueError)):
        SingleSenderParams(**kwargs)


def test_acceptance_probability():
    d = DiscreteBeliefDistribution.from_mapping({0.2: 0.5, 0.6: 0.3, 0.9: 0.2})
    assert acceptance_probability(d, 0.6) == pytest.approx(0.5)
    assert acceptance_probability(d, 0.1) == pytest.approx(1.0)
    assert acceptance_probability(d, 0.95) == 0.0


def test_response_requires_the_prior_as_mean():
    with pytest.raises(ValueError, match="mean"):
        single_sender_response(DiscreteBeliefDistribution.full_information(0.4), SingleSenderParams())


def test_response_to_full_information():
    ssp = SingleSenderParams(lambda_threshold=0.6, k=1.0, mu=0.5)
    garbling, acceptance = single_sender_response(DiscreteBeliefDistribution.full_information(0.5), ssp)
    lo, hi = garbling.distribution.support_bounds
    assert hi == pytest.approx(1.0)
    assert lo == pytest.approx(0.5 - np.sqrt(0.4) + 0.5, abs=1e-6)
    assert acceptance == pytest.approx(1.0 - 0.5 / np.sqrt(0.4), abs=1e-6)


def test_threshold_below_prior_needs_no_disclosure():
    solution = single_sender_solve(SingleSenderParams(lambda_threshold=0.3, mu=0.5))
    assert solution.acceptance == 1.0
    assert solution.sender.is_degenerate
    assert solution.full_info_response is None


def test_free_attention():
    solution = single_sender_solve(SingleSenderParams(lambda_threshold=0.6, k=0.0, mu=0.5))
    assert np.allclose(solution.sender.points, [0.0, 0.6])
    assert solution.acceptance == pytest.approx(5.0 / 6.0)
    assert solution.receiver.distribution.n_points == 2


def test_costly_attention():
    ssp = SingleSenderParams(lambda_threshold=0.6, k=1.0, mu=0.5)
    solution = single_sender_solve(ssp, step=0.05, key=jr.PRNGKey(1))
    lo, hi = solution.sender.support_bounds
    assert hi == pytest.approx(0.7, abs=0.02)
    assert lo <= 0.38
    assert solution.acceptance == pytest.approx(0.3675, abs=1e-3)
    assert solution.acceptance < 5.0 / 6.0
    assert solution.strict_garbling_of_full_info_response
    assert not solution.offers_full_information
    assert solution.receiver.distribution.mean() == pytest.approx(0.5)
    as_dict = solution.to_dict()
    assert as_dict["full_info_response"]["kind"] == "binary"

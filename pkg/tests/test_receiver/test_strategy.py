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
import numpy as np
import pytest

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.receiver import (
    AbstractStage2Responder,
    CandidateResponder,
    ClosedFormResponder,
    ModelParams,
    achieves_first_best,
    best_response,
    first_best_value,
    responder_for,
)
from rijax.receiver.strategy import (
    binary_garbling_mask,
    visit_plan,
    visit_probability,
)

config.update("jax_enable_x64", True)

FULL = DiscreteBeliefDistribution.full_information(0.5)
NONE = DiscreteBeliefDistribution.degenerate(0.5)


def test_abstract_responder():
    with pytest.raises(TypeError):
        AbstractStage2Responder()


def test_responder_for():
    assert isinstance(responder_for(FULL, 1.0), ClosedFormResponder)
    assert isinstance(responder_for(NONE, 1.0), ClosedFormResponder)
    three = DiscreteBeliefDistribution.from_mapping({0.1: 0.25, 0.5: 0.5, 0.9: 0.25})
    responder = responder_for(three, 1.0, step=0.05)
    assert isinstance(responder, CandidateResponder)
    assert responder.prior == pytest.approx(0.5)
    with pytest.raises(ValueError):
        CandidateResponder(distribution=three, k=1.0, step=1.5)


def test_binary_garbling_mask():
    p = DiscreteBeliefDistribution.from_mapping({0.1: 0.25, 0.5: 0.5, 0.9: 0.25})
    mask = binary_garbling_mask(jnp.array([0.3, 0.1, 0.0]), jnp.array([0.7, 0.9, 1.0]), p)
    assert mask.tolist() == [True, False, False]


def test_candidate_responder_matches_closed_form_on_binary_experiment():
    closed = ClosedFormResponder(lo=0.0, hi=1.0, mu=0.5, k=1.0)
    candidates = CandidateResponder(distribution=FULL, k=1.0, step=0.05)
    x = jnp.linspace(0.0, 1.0, 21)
    v_closed, p_closed = closed.continuation(x)
    v_cand, p_cand = candidates.continuation(x)
    assert jnp.allclose(v_closed, v_cand, atol=1e-9)
    assert jnp.allclose(p_closed, p_cand)


def test_garbling_at():
    responder = ClosedFormResponder(lo=0.0, hi=1.0, mu=0.5, k=1.0)
    assert np.allclose(responder.garbling_at(0.5).distribution.points, [0.25, 0.75])
    assert responder.garbling_at(0.9).kind == "degenerate"


def test_full_information_best_response():
    strategy = best_response(FULL, FULL, ModelParams())
    assert strategy.value == pytest.approx(9.0 / 16.0)
    assert strategy.first_visit_prob == 0.5
    assert strategy.sender_payoffs() == pytest.approx((0.5, 0.5))
    for first in (1, 2):
        plan = strategy.plan(first)
        assert np.allclose(plan.stage1.distribution.points, [0.25, 0.75], atol=1e-6)
        assert plan.stop_rule == ("select_other", "select_visited")
        assert plan.selection_probability == pytest.approx(0.5)
        assert plan.stage1_cost == pytest.approx(0.0625)
        assert plan.stage2_cost == pytest.approx(0.0)
        assert plan.gross == pytest.approx(0.625)
    with pytest.raises(ValueError):
        strategy.plan(3)


def test_uninformative_best_response():
    strategy = best_response(NONE, NONE, ModelParams())
    assert strategy.value == pytest.approx(0.5)
    assert strategy.plan(1).stage1.kind == "degenerate"
    assert all(rule != "continue" for rule in strategy.plan(1).stop_rule)


def test_learning_only_at_the_informative_sender():
    strategy = best_response(NONE, FULL, ModelParams())
    assert strategy.value == pytest.approx(9.0 / 16.0)
    # both orders learn {1/4, 3/4} about sender 2 and are equally valuable
    assert strategy.first_visit_prob == 0.5
    visit_none_first = strategy.plan(1)
    assert visit_none_first.stage1.kind == "degenerate"
    assert np.allclose(visit_none_first.stage2[0].distribution.points, [0.25, 0.75])
    assert np.allclose(
        strategy.plan(2).stage1.distribution.points, [0.25, 0.75], atol=1e-6
    )


@pytest.mark.parametrize("tie_rule, expected", [("fair", 0.5), ("first", 1.0), ("second", 0.0)])
def test_tie_rules(tie_rule: str, expected: float):
    assert visit_probability(0.5, 0.5, tie_rule) == expected
    assert visit_probability(0.6, 0.5, tie_rule) == 1.0
    assert visit_probability(0.5, 0.6, tie_rule) == 0.0


def test_mean_mismatch_is_rejected():
    with pytest.raises(ValueError, match="not the prior"):
        best_response(DiscreteBeliefDistribution.full_information(0.4), FULL, ModelParams())


def test_first_best():
    params = ModelParams()
    assert first_best_value(params) == pytest.approx(0.5625)
    middle = DiscreteBeliefDistribution.binary(0.25, 0.75, 0.5)
    assert achieves_first_best(middle, middle, params)
    assert not achieves_first_best(NONE, NONE, params)


def test_three_point_experiment_plan():
    three = DiscreteBeliefDistribution.from_mapping({0.0: 0.25, 0.5: 0.5, 1.0: 0.25})
    params = ModelParams()
    plan = visit_plan(1, (three, FULL), params, step=0.05)
    assert plan.stage1.distribution.mean() == pytest.approx(0.5)
    assert len(plan.stage2) == plan.stage1.distribution.n_points
    assert plan.value <= first_best_value(params) + 1e-9
    assert plan.value >= 0.5

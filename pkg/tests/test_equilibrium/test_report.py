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
import numpy as np
import pytest

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.equilibrium import (
    DeviationCertificate,
    DeviationSearchConfig,
    EquilibriumReport,
    OutOfRegionError,
    decide,
    out_of_region_report,
)

config.update("jax_enable_x64", True)


@pytest.mark.parametrize(
    "margin, closed_form, verdict",
    [
        (1e-3, None, "refuted"),
        (1e-3, True, "refuted"),
        (0.0, None, "equilibrium"),
        (0.0, True, "equilibrium"),
        (5e-5, False, "inconclusive"),
    ],
)
def test_decide(margin: float, closed_form, verdict: str):
    assert decide(margin, 1e-4, closed_form) == verdict


@pytest.mark.parametrize(
    "kwargs",
    [
        {"step": 0.0},
        {"step": 0.5},
        {"profit_threshold": 0.0},
        {"tie_rule": "random"},
        {"three_point_step": 0.6},
        {"public_grid_points": 2},
        {"chunk_size": 0},
        {"tie_tol": 0.0},
    ],
)
def test_invalid_search_config(kwargs):
    with pytest.raises((BeartypeCallHintParamViolation, ValueError)):
        DeviationSearchConfig(**kwargs)


def test_search_config_defaults():
    search = DeviationSearchConfig()
    assert search.step == 0.005
    assert search.profit_threshold == 1e-4
    assert search.tie_rule == "fair"
    assert not search.three_point


def test_out_of_region_report():
    report = out_of_region_report("k too small", k=0.3)
    assert report.out_of_region
    assert report.verdict == "inconclusive"
    assert np.isnan(report.margin)
    assert report.details == {"reason": "k too small", "k": 0.3}


def test_out_of_region_error_is_a_value_error():
    with pytest.raises(ValueError):
        raise OutOfRegionError("outside")


def test_report_to_dict():
    certificate = DeviationCertificate(
        sender=2,
        distribution=DiscreteBeliefDistribution.binary(0.1, 0.9, 0.5),
        gain=0.01,
        favorable_gain=0.02,
        first_visit_gain=0.005,
        second_visit_gain=0.005,
        belief=0.25,
        response={"second_learn": True},
    )
    report = EquilibriumReport(
        verdict="refuted",
        on_path_sender_payoffs=(0.5, 0.5),
        receiver_value=0.5625,
        margin=0.01,
        best_deviation=certificate,
        closed_form=False,
        deviations_searched=10,
    )
    as_dict = report.to_dict()
    assert as_dict["verdict"] == "refuted"
    assert as_dict["on_path_sender_payoffs"] == [0.5, 0.5]
    assert as_dict["best_deviation"]["sender"] == 2
    assert as_dict["best_deviation"]["distribution"]["points"] == pytest.approx([0.1, 0.9])
    assert as_dict["best_deviation"]["response"] == {"second_learn": True}
    assert as_dict["deviations_searched"] == 10
    assert not as_dict["out_of_region"]

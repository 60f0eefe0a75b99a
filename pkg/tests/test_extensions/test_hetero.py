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

from rijax.equilibrium import OutOfRegionError
from rijax.extensions import (
    HeteroParams,
    affine_residual,
    check_hetero_fullinfo,
    hetero_cases,
    hetero_fullinfo_region,
    hetero_stage1,
    hetero_value,
    selection_profile,
)

config.update("jax_enable_x64", True)


@pytest.mark.parametrize("kwargs", [{"mu1": 0.0}, {"mu2": 1.0}, {"k": 0.0}])
def test_invalid_params(kwargs):
    with pytest.raises((BeartypeCallHintParamViolation, ValueError)):
        HeteroParams(**kwargs)


def test_prior():
    hp = HeteroParams(mu1=0.4, mu2=0.6)
    assert hp.prior(1) == 0.4
    assert hp.prior(2) == 0.6
    with pytest.raises(ValueError):
        hp.prior(0)
    params = hp.model_params(grid_points=401)
    assert params.prior2 == pytest.approx(0.6)
    assert params.grid_points == 401


@pytest.mark.parametrize(
    "mu1, mu2, case, intervals",
    [
        (0.5, 0.6, 1, [(0.35, 0.75), (0.85, 0.85)]),
        (0.6, 0.8, 2, [(0.55, 0.75)]),
        (0.4, 0.4, 3, [(0.15, 0.15), (0.25, 0.65)]),
        (0.3, 0.2, 4, [(0.25, 0.45)]),
    ],
)
def test_stage1_cases(mu1: float, mu2: float, case: int, intervals):
    stage1 = hetero_stage1(HeteroParams(mu1=mu1, mu2=mu2))
    assert stage1.case == case
    assert np.allclose(stage1.admissible.intervals, intervals)
    assert stage1.learn_nothing_first


def test_stage1_with_sender_one_second():
    stage1 = hetero_stage1(HeteroParams(mu1=0.6, mu2=0.5), second_visited=1)
    assert stage1.case == 1
    assert stage1.admissible.contains(0.85)


def test_stage1_out_of_region():
    with pytest.raises(OutOfRegionError):
        hetero_stage1(HeteroParams(mu1=0.3, mu2=0.7))
    with pytest.raises(OutOfRegionError, match="k = 1"):
        hetero_stage1(HeteroParams(k=2.0))


def test_cases_are_exchangeable():
    rng = np.random.default_rng(0)
    for a, b in rng.uniform(0.0, 1.0, size=(1000, 2)):
        assert bool(hetero_cases(a, b)) == bool(hetero_cases(b, a))


@pytest.mark.parametrize("mu1, mu2, expected", [(0.5, 0.5, 0.5625), (0.5, 0.6, 0.6225)])
def test_value(mu1: float, mu2: float, expected: float):
    assert hetero_value(HeteroParams(mu1=mu1, mu2=mu2)) == pytest.approx(expected)
    assert hetero_value(HeteroParams(mu1=mu2, mu2=mu1)) == pytest.approx(expected)


def test_value_out_of_region():
    with pytest.raises(OutOfRegionError):
        hetero_value(HeteroParams(mu1=0.3, mu2=0.7))


@pytest.mark.parametrize(
    "mu1, mu2, expected",
    [(0.5, 0.6, True), (0.7, 0.8, True), (0.1, 0.3, True), (0.3, 0.7, False), (0.8, 0.9, False)],
)
def test_fullinfo_region(mu1: float, mu2: float, expected: bool):
    assert hetero_fullinfo_region(mu1, mu2) is expected
    assert hetero_fullinfo_region(mu2, mu1) is expected


def test_affine_residual():
    x = np.linspace(0.0, 1.0, 11)
    assert affine_residual(x, np.clip(2.0 * x - 0.5, 0.0, 1.0)) < 1e-12
    assert affine_residual(x, 0.1 + 0.8 * x**2) > 1e-3


def test_selection_profile_is_piecewise_affine():
    x, p = selection_profile(HeteroParams(mu1=0.5, mu2=0.6), n=51)
    assert x.shape == p.shape
    assert np.all((p >= 0.0) & (p <= 1.0))
    assert affine_residual(x, p) < 1e-6


@pytest.mark.parametrize("mu1, mu2", [(0.5, 0.6), (0.7, 0.8)])
def test_fullinfo_equilibrium(mu1: float, mu2: float):
    hp = HeteroParams(mu1=mu1, mu2=mu2)
    report = check_hetero_fullinfo(hp)
    assert report.verdict == "equilibrium"
    assert not report.out_of_region
    details = report.details
    assert details["exchangeable"]
    assert details["affine_residual"] < 1e-6
    assert details["value"] == pytest.approx(hetero_value(hp))
    first, second = details["order_values"]
    assert first == pytest.approx(second, abs=1e-5)
    assert report.receiver_value == pytest.approx(details["value"], abs=1e-5)


def test_fullinfo_out_of_region():
    report = check_hetero_fullinfo(HeteroParams(mu1=0.3, mu2=0.7))
    assert report.out_of_region
    assert report.verdict == "inconclusive"
    assert check_hetero_fullinfo(HeteroParams(k=2.0)).out_of_region


HETERO_PRIORS = np.round(np.linspace(0.01, 0.99, 50), 2).tolist()


@pytest.mark.parametrize("mu1", HETERO_PRIORS)
def test_fullinfo_values_across_the_prior_grid(mu1: float):
    for mu2 in HETERO_PRIORS:
        if not hetero_fullinfo_region(mu1, mu2):
            assert check_hetero_fullinfo(HeteroParams(mu1=mu1, mu2=mu2)).out_of_region
            continue
        hp = HeteroParams(mu1=mu1, mu2=mu2)
        report = check_hetero_fullinfo(hp)
        assert report.verdict == "equilibrium"
        value = hetero_value(hp)
        for order_value in report.details["order_values"]:
            assert order_value == pytest.approx(value, abs=1e-6)

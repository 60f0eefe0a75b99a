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
import pytest

from rijax.cli import (
    ConfigError,
    RunConfig,
    load_config,
    parse_config,
)


def test_defaults():
    config = RunConfig()
    assert config.grid_points == 2001
    assert config.deviation_step == 0.005
    assert config.profit_threshold == 1e-4
    assert config.tie_rule == "fair"
    assert config.output_format is None
    assert not config.parallel
    assert config.seed == 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid_points": 2},
        {"grid_points": 400},
        {"deviation_step": 0.0},
        {"deviation_step": 0.5},
        {"profit_threshold": 0.0},
        {"output_format": "xml"},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises((BeartypeCallHintParamViolation, ConfigError)):
        RunConfig(**kwargs)


def test_config_error_is_a_value_error():
    with pytest.raises(ValueError):
        RunConfig(grid_points=2)


def test_parse_config():
    text = """
    # coarse settings
    grid_points = 401
    deviation_step = 0.02   # lattice spacing
    tie_rule = "first"
    parallel = yes
    output_format = csv
    """
    config = parse_config(text)
    assert config == RunConfig(
        grid_points=401,
        deviation_step=0.02,
        tie_rule="first",
        parallel=True,
        output_format="csv",
    )


@pytest.mark.parametrize(
    "text, message",
    [
        ("grid_points = 401\nwidth = 3", "line 2: unknown key 'width'"),
        ("grid_points 401", "line 1: expected"),
        ("grid_points = many", "grid_points: expected int"),
        ("parallel = maybe", "parallel: expected a boolean"),
        ("grid_points = 2", "odd and at least 3"),
    ],
)
def test_parse_config_errors(text: str, message: str):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_load_config(tmp_path):
    assert load_config() == RunConfig()
    path = tmp_path / "run.cfg"
    path.write_text("seed = 7\nprofit_threshold = 1e-3\n")
    config = load_config(path)
    assert config.seed == 7
    assert config.profit_threshold == 1e-3
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")


def test_merge_skips_unset_overrides():
    config = RunConfig(grid_points=401)
    merged = config.merge(grid_points=None, seed=3, parallel=None)
    assert merged.grid_points == 401
    assert merged.seed == 3
    with pytest.raises(ConfigError):
        config.merge(grid_points=4)


def test_search_config():
    search = RunConfig(deviation_step=0.02, tie_rule="second").search_config(three_point=True)
    assert search.step == 0.02
    assert search.tie_rule == "second"
    assert search.three_point

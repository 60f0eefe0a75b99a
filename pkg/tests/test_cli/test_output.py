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
import io
import json

import numpy as np

from rijax.cli.output import (
    SCHEMA_VERSION,
    sanitize,
    write_csv,
    write_json,
)


def test_sanitize():
    obj = {
        "a": np.float64(0.25),
        "b": float("nan"),
        "c": (1, np.int64(2)),
        "d": np.array([0.5, np.inf]),
        "e": np.bool_(True),
        "f": None,
        "g": "text",
    }
    assert sanitize(obj) == {
        "a": 0.25,
        "b": None,
        "c": [1, 2],
        "d": [0.5, None],
        "e": True,
        "f": None,
        "g": "text",
    }
    assert isinstance(sanitize(np.bool_(False)), bool)


def test_write_json():
    stream = io.StringIO()
    write_json({"verdict": "equilibrium", "margin": float("nan")}, stream)
    text = stream.getvalue()
    assert text.endswith("\n")
    assert json.loads(text) == {"verdict": "equilibrium", "margin": None}


def test_write_csv():
    stream = io.StringIO()
    rows = [
        {"mu": 0.25, "k": 1.0, "verdict": "equilibrium", "margin": 0.0},
        {"mu": 0.75, "k": 1.0, "verdict": "inconclusive", "margin": float("nan")},
    ]
    write_csv(rows, ("mu", "k", "verdict", "margin"), stream)
    assert stream.getvalue() == (
        f"# schema={SCHEMA_VERSION}\n"
        "mu,k,verdict,margin\n"
        "0.25,1.0,equilibrium,0.0\n"
        "0.75,1.0,inconclusive,\n"
    )

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
"""JSON and CSV writers for command results."""

import csv
import json
import math

from beartype.typing import (
    Any,
    Iterable,
    Mapping,
    Sequence,
    TextIO,
)
import numpy as np

SCHEMA_VERSION = 1


def sanitize(obj: Any) -> Any:
    """Convert a result to plain JSON types; NaN and infinities become `None`."""
    if isinstance(obj, Mapping):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)) or hasattr(obj, "dtype"):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def write_json(obj: Any, stream: TextIO) -> None:
    json.dump(sanitize(obj), stream, indent=2)
    stream.write("\n")


def write_csv(
    rows: Iterable[Mapping[str, Any]], header: Sequence[str], stream: TextIO
) -> None:
    """Write `rows` under a `# schema=<version>` line and a header row."""
    stream.write(f"# schema={SCHEMA_VERSION}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if (v := sanitize(row[h])) is None else v for h in header])


__all__ = [
    "SCHEMA_VERSION",
    "sanitize",
    "write_json",
    "write_csv",
]

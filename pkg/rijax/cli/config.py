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
"""Run configuration for the command-line interface."""

from dataclasses import (
    dataclass,
    fields,
    replace,
)
from pathlib import Path

from beartype.typing import (
    Any,
    Dict,
    Optional,
    Union,
)

from rijax.equilibrium import DeviationSearchConfig
from rijax.typing import TieRule


class ConfigError(ValueError):
    """Raised for unknown keys, badly typed values or violated invariants."""


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand.

    Attributes
    ----------
        grid_points (int): uniform nodes of the numerical grids, odd and at least 3.
        deviation_step (float): spacing of the deviation lattice.
        profit_threshold (float): gains above this refute an equilibrium.
        tie_rule (TieRule): visit order when both orders are equally valuable.
        output_format (Optional[str]): `"csv"` or `"json"`; `None` selects the
            subcommand's default.
        parallel (bool): evaluate sweep cells on a thread pool.
        seed (int): seed of randomised computations.
    """

    grid_points: int = 2001
    deviation_step: float = 0.005
    profit_threshold: float = 1e-4
    tie_rule: TieRule = "fair"
    output_format: Optional[str] = None
    parallel: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grid_points < 3 or self.grid_points % 2 == 0:
            raise ConfigError(
                f"grid_points must be odd and at least 3, got {self.grid_points}."
            )
        if not 0.0 < self.deviation_step < 0.5:
            raise ConfigError(
                f"deviation_step must lie in (0, 1/2), got {self.deviation_step}."
            )
        if not self.profit_threshold > 0.0:
            raise ConfigError(
                f"profit_threshold must be positive, got {self.profit_threshold}."
            )
        if self.tie_rule not in ("fair", "first", "second"):
            raise ConfigError(
                f"tie_rule must be 'fair', 'first' or 'second', got {self.tie_rule!r}."
            )
        if self.output_format not in (None, "csv", "json"):
            raise ConfigError(
                f"output_format must be 'csv' or 'json', got {self.output_format!r}."
            )

    def merge(self, **overrides: Any) -> "RunConfig":
        """A copy with every override that is not `None` applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def search_config(self, **kwargs: Any) -> DeviationSearchConfig:
        return DeviationSearchConfig(
            step=self.deviation_step,
            profit_threshold=self.profit_threshold,
            tie_rule=self.tie_rule,
            **kwargs,
        )


def _field_types() -> Dict[str, type]:
    types = {"output_format": str, "tie_rule": str}
    for f in fields(RunConfig):
        types.setdefault(f.name, type(f.default))
    return types


def _coerce(key: str, raw: str, kind: type) -> Any:
    if kind is bool:
        lowered = raw.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}.")
    try:
        return kind(raw)
    except ValueError as err:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {raw!r}.") from err


def parse_config(text: str) -> RunConfig:
    """Parse flat `key = value` lines; `#` starts a comment."""
    types = _field_types()
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got {raw!r}.")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {number}: unknown key {key!r}.")
        values[key] = _coerce(key, value.strip("\"'"), types[key])
    return RunConfig(**values)


def load_config(path: Union[str, Path, None] = None) -> RunConfig:
    """Load a `RunConfig` from `path`, or the defaults when `path` is `None`."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    return parse_config(text)


__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "load_config",
]

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

from dataclasses import (
    dataclass,
    field,
)

from beartype.typing import (
    Any,
    Dict,
    Mapping,
    Optional,
    Tuple,
)

from rijax.base import (
    Module,
    static_field,
)
from rijax.beliefs import DiscreteBeliefDistribution
from rijax.typing import (
    TieRule,
    Verdict,
)


class OutOfRegionError(ValueError):
    """Raised when a closed form is requested outside the region where it holds."""


@dataclass
class DeviationSearchConfig(Module):
    r"""Settings of the binary deviation search.

    Attributes
    ----------
        step (float): spacing of the deviation support lattice.
        profit_threshold (float): gains above this refute an equilibrium.
        tie_rule (TieRule): receiver's visit order when both orders are equally
            valuable on path.
        tie_tol (float): receiver values closer than this are tied; the chord
            tables round values to buckets of this width.
        three_point (bool): also search three-point deviations.
        three_point_step (float): lattice spacing of three-point deviations.
        public_grid_points (int): grid size of the per-deviation envelopes used
            when experiments are publicly observed.
        chunk_size (int): deviations per batch in the public search.
        progress (bool): show a progress bar.
    """

    step: float = 0.005
    profit_threshold: float = 1e-4
    tie_rule: TieRule = static_field("fair")
    tie_tol: float = 1e-9
    three_point: bool = static_field(False)
    three_point_step: float = 0.05
    public_grid_points: int = static_field(401)
    chunk_size: int = static_field(256)
    progress: bool = static_field(False)

    def __post_init__(self) -> None:
        if not 0.0 < self.step < 0.5:
            raise ValueError(f"step must lie in (0, 1/2), got {self.step}.")
        if not self.profit_threshold > 0.0:
            raise ValueError(
                f"profit_threshold must be positive, got {self.profit_threshold}."
            )
        if not self.tie_tol > 0.0:
            raise ValueError(f"tie_tol must be positive, got {self.tie_tol}.")
        if self.tie_rule not in ("fair", "first", "second"):
            raise ValueError(
                f"tie_rule must be 'fair', 'first' or 'second', got {self.tie_rule!r}."
            )
        if not 0.0 < self.three_point_step < 0.5:
            raise ValueError(
                f"three_point_step must lie in (0, 1/2), got {self.three_point_step}."
            )
        if self.public_grid_points < 3:
            raise ValueError(
                f"public_grid_points must be at least 3, got {self.public_grid_points}."
            )
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be greater than 0, got {self.chunk_size}.")


@dataclass(frozen=True)
class DeviationCertificate:
    """The most profitable deviation found, with the receiver's response to it.

    `gain` is computed under the receiver response that is least favourable to
    the deviator among her best responses, `favorable_gain` under the most
    favourable one.
    """

    sender: int
    distribution: DiscreteBeliefDistribution
    gain: float
    favorable_gain: float
    first_visit_gain: float
    second_visit_gain: float
    belief: Optional[float] = None
    response: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sender": self.sender,
            "distribution": self.distribution.to_dict(),
            "gain": self.gain,
            "favorable_gain": self.favorable_gain,
            "first_visit_gain": self.first_visit_gain,
            "second_visit_gain": self.second_visit_gain,
            "belief": self.belief,
            "response": dict(self.response),
        }


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of an equilibrium check."""

    verdict: Verdict
    on_path_sender_payoffs: Tuple[float, float]
    receiver_value: float
    margin: float
    favorable_margin: float = float("nan")
    best_deviation: Optional[DeviationCertificate] = None
    closed_form: Optional[bool] = None
    out_of_region: bool = False
    deviations_searched: int = 0
    details: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "on_path_sender_payoffs": list(self.on_path_sender_payoffs),
            "receiver_value": self.receiver_value,
            "margin": self.margin,
            "favorable_margin": self.favorable_margin,
            "best_deviation": None
            if self.best_deviation is None
            else self.best_deviation.to_dict(),
            "closed_form": self.closed_form,
            "out_of_region": self.out_of_region,
            "deviations_searched": self.deviations_searched,
            "details": dict(self.details),
        }


def decide(margin: float, threshold: float, closed_form: Optional[bool]) -> Verdict:
    """Verdict of a numeric search, cross-checked against a closed-form indicator.

    A gain above `threshold` refutes. Otherwise the profile is an equilibrium
    unless a closed form is known and says it is not.
    """
    if margin > threshold:
        return "refuted"
    if closed_form is None or closed_form:
        return "equilibrium"
    return "inconclusive"


def out_of_region_report(reason: str, **details: Any) -> EquilibriumReport:
    """Report emitted when the hypotheses of a check fail; no verdict is claimed."""
    return EquilibriumReport(
        verdict="inconclusive",
        on_path_sender_payoffs=(float("nan"), float("nan")),
        receiver_value=float("nan"),
        margin=float("nan"),
        out_of_region=True,
        details={"reason": reason, **details},
    )


__all__ = [
    "OutOfRegionError",
    "DeviationSearchConfig",
    "DeviationCertificate",
    "EquilibriumReport",
    "decide",
    "out_of_region_report",
]

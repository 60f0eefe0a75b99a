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
r"""Closed-form stage-2 and stage-1 solutions of the receiver's problem.

At stage 2 the receiver holds a posterior $`x`$ about the visited sender and
garbles the other sender's experiment, whose support lies in $`[l, h]`$. The
optimal garbling is either $`\delta_\mu`$ or one of four binary chords: the
unrestricted chord $`\{x - d, x + d\}`$ with $`d = 1/(4k)`$, the two chords
anchored at a support bound, or $`\{l, h\}`$ itself.
"""

from dataclasses import dataclass
import logging
import warnings

from beartype.typing import (
    Literal,
    NamedTuple,
    Tuple,
    Union,
)
import jax
import jax.numpy as jnp
from jaxopt import Bisection
from jaxtyping import (
    Bool,
    Float,
)
import numpy as np

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.concavify import (
    Chord,
    Degenerate,
    GarblingSolution,
)
from rijax.receiver.payoffs import ModelParams
from rijax.typing import (
    Array,
    ScalarFloat,
)

logger = logging.getLogger(__name__)

MU_TOL = 1e-9
GAIN_TOL = 1e-12
BISECTION_TOL = 1e-8

VectorOrScalar = Union[ScalarFloat, Float[Array, "..."]]


class Stage2Choice(NamedTuple):
    """Optimal stage-2 response, broadcast over the inputs of `stage2_choice`."""

    y1: Float[Array, "..."]
    y2: Float[Array, "..."]
    nu: Float[Array, "..."]
    chord_value: Float[Array, "..."]
    delta_value: Float[Array, "..."]
    learn: Bool[Array, "..."]

    @property
    def value(self) -> Float[Array, "..."]:
        return jnp.where(self.learn, self.chord_value, self.delta_value)


def _safe_sqrt(v, ok):
    return jnp.where(ok, jnp.sqrt(jnp.where(ok, v, 1.0)), 0.0)


@jax.jit
def stage2_choice(
    x: VectorOrScalar,
    mu: VectorOrScalar,
    k: VectorOrScalar,
    lo: VectorOrScalar,
    hi: VectorOrScalar,
) -> Stage2Choice:
    r"""Optimal stage-2 garbling of an experiment supported on $`[lo, hi]`$.

    All arguments broadcast against each other. Learning is chosen only when it
    beats $`\max\{x, \mu\}`$ strictly, so an indifferent receiver does not
    learn.

    Args:
        x: posterior about the first-visited sender.
        mu: prior of the second-visited sender.
        k: attention cost coefficient at stage 2.
        lo: lower support bound of the second sender's experiment.
        hi: upper support bound of the second sender's experiment.

    Returns:
        Stage2Choice: best chord, its value, the no-learning value and the
        learning flag.
    """
    x, mu, k, lo, hi = jnp.broadcast_arrays(
        *(jnp.asarray(v, dtype=jnp.float64) for v in (x, mu, k, lo, hi))
    )
    d = 1.0 / (4.0 * k)

    def payoff(y):
        return jnp.maximum(x, y) - k * (y - mu) ** 2

    def chord(y1, y2, feasible):
        ok = feasible & (y1 + MU_TOL < mu) & (mu < y2 - MU_TOL)
        nu = jnp.where(ok, (y2 - mu) / jnp.where(ok, y2 - y1, 1.0), 1.0)
        value = jnp.where(ok, nu * payoff(y1) + (1.0 - nu) * payoff(y2), -jnp.inf)
        return jnp.stack([y1, y2, nu, value])

    reach_up = _safe_sqrt((x - lo) / k, x > lo)
    reach_down = _safe_sqrt((hi - x) / k, x < hi)
    candidates = jnp.stack(
        [
            chord(x - d, x + d, (x - d >= lo) & (x + d <= hi)),
            chord(lo, lo + reach_up, (x > lo) & (lo + reach_up <= hi)),
            chord(hi - reach_down, hi, (x < hi) & (hi - reach_down >= lo)),
            chord(lo, hi, jnp.ones_like(x, dtype=bool)),
        ]
    )
    best = jnp.argmax(candidates[:, 3], axis=0)
    y1, y2, nu, value = (
        jnp.take_along_axis(candidates[:, i], best[None], axis=0)[0] for i in range(4)
    )
    delta_value = jnp.maximum(x, mu)
    learn = value > delta_value + GAIN_TOL
    return Stage2Choice(y1, y2, nu, value, delta_value, learn)


def first_selected_probability(
    x: VectorOrScalar,
    choice: Stage2Choice,
    mu_second: VectorOrScalar,
    posterior_tie: str = "first",
) -> Float[Array, "..."]:
    r"""Probability that the first-visited sender is selected after stage 2.

    The sender with the higher posterior is selected; equal posteriors go to
    the sender named by `posterior_tie`. Without learning the second sender's
    posterior stays at its prior.
    """
    x = jnp.asarray(x, dtype=jnp.float64)
    tie = 1.0 if posterior_tie == "first" else 0.0

    def beats(y):
        return jnp.where(y < x, 1.0, jnp.where(y > x, 0.0, tie))

    learned = choice.nu * beats(choice.y1) + (1.0 - choice.nu) * beats(choice.y2)
    return jnp.where(choice.learn, learned, beats(jnp.asarray(mu_second, dtype=jnp.float64)))


def _solution(choice: Stage2Choice, mu: float) -> GarblingSolution:
    if bool(choice.learn):
        chord = Chord(float(choice.y1), float(choice.y2), float(choice.nu))
        return GarblingSolution.from_chord(chord, choice.chord_value)
    return GarblingSolution.from_chord(Degenerate(mu), choice.delta_value)


def stage2_closed_form(x: ScalarFloat, params: ModelParams) -> GarblingSolution:
    """Optimal stage-2 garbling at first-stage posterior `x`.

    Args:
        x (ScalarFloat): posterior about the first-visited sender, in `[l, h]`.
        params (ModelParams): model parameters.

    Returns:
        GarblingSolution: $`\\delta_\\mu`$ or the optimal binary chord.
    """
    x = float(x)
    if not params.l <= x <= params.h:
        raise ValueError(f"x must lie in [l, h] = [{params.l}, {params.h}], got {x}.")
    choice = stage2_choice(x, params.mu, params.k, params.l, params.h)
    return _solution(choice, params.mu)


def stage1_value(
    x: VectorOrScalar, params: ModelParams
) -> Float[Array, "..."]:
    r"""Continuation value $`U_1(x) = V_2(x) - k(x - \mu)^2`$ of a first-stage posterior."""
    choice = stage2_choice(x, params.mu, params.k, params.l, params.h)
    return choice.value - params.k * (jnp.asarray(x, dtype=jnp.float64) - params.mu) ** 2


def stage2_case(params: ModelParams) -> int:
    """Which of the five stage-2 parameter cases applies.

    Overlapping boundaries resolve to the lowest case number.
    """
    k, mu, l, h, d = params.k, params.mu, params.l, params.h, params.d
    steep = k > 1.0 / (2.0 * (h - l))
    if steep and mu <= min(h - 2.0 * d, l + 2.0 * d):
        return 1
    if steep and mu >= max(h - 2.0 * d, l + 2.0 * d):
        return 2
    if l + 2.0 * d <= mu <= h - 2.0 * d:
        return 3
    if steep:
        return 4
    return 5


def stage1_case(params: ModelParams) -> str:
    """Label of the stage-1 solution: the stage-2 case plus a sub-case letter."""
    mu, l, h, d = params.mu, params.l, params.h, params.d
    case = stage2_case(params)
    if case == 1:
        return "1a" if mu >= l + d else "1b"
    if case == 2:
        return "2a" if mu <= h - d else "2b"
    if case == 3:
        return "3"
    if case == 4:
        if mu < l + d:
            return "4b"
        if mu > h - d:
            return "4c"
        return "4a"
    return "5a" if mu <= 0.5 * (l + h) else "5b"


@dataclass(frozen=True)
class AdmissibleSupport:
    """A finite union of closed intervals (points are degenerate intervals)."""

    intervals: Tuple[Tuple[float, float], ...]

    def contains(self, x: ScalarFloat, tol: float = MU_TOL) -> bool:
        x = float(x)
        return any(a - tol <= x <= b + tol for a, b in self.intervals)

    def contains_all(self, d: DiscreteBeliefDistribution, tol: float = MU_TOL) -> bool:
        return all(self.contains(x, tol) for x in np.asarray(d.points))

    @property
    def bounds(self) -> Tuple[float, float]:
        return min(a for a, _ in self.intervals), max(b for _, b in self.intervals)

    def to_list(self):
        return [[a, b] for a, b in self.intervals]


@dataclass(frozen=True)
class Stage1Solution:
    """Stage-1 optimum: the most informative optimal garbling and the set of
    beliefs any optimal garbling may use."""

    case: str
    most_informative: GarblingSolution
    admissible: AdmissibleSupport
    unique: bool


def _admissible(label: str, params: ModelParams, y: float) -> AdmissibleSupport:
    mu, l, h, d = params.mu, params.l, params.h, params.d
    sets = {
        "1a": ((mu - d, mu - d), (l + d, mu + d)),
        "2a": ((mu - d, h - d), (mu + d, mu + d)),
        "3": ((mu - d, mu + d),),
        "4a": ((mu - d, mu - d), (l + d, h - d), (mu + d, mu + d)),
    }
    if label in sets:
        return AdmissibleSupport(sets[label])
    if label in ("1b", "4b", "5a"):
        return AdmissibleSupport(((l, l), (y, y)))
    return AdmissibleSupport(((y, y), (h, h)))


def stage1_closed_form(params: ModelParams) -> Stage1Solution:
    r"""Optimal stage-1 garbling of a binary experiment on $`[l, h]`$.

    In the multiplicity cases the receiver is indifferent among every garbling
    supported on the admissible set; the most informative one,
    $`\{\mu - d, \mu + d\}`$, is returned. Otherwise the optimum is unique and
    anchored at a support bound, with the free endpoint from `tangent_point`.
    """
    label = stage1_case(params)
    mu, l, h, d = params.mu, params.l, params.h, params.d
    if label in ("1a", "2a", "3", "4a"):
        chord = Chord(mu - d, mu + d, 0.5)
        value = float(stage1_value(mu, params))
        return Stage1Solution(
            case=label,
            most_informative=GarblingSolution.from_chord(chord, value),
            admissible=_admissible(label, params, mu),
            unique=False,
        )

    if label in ("1b", "4b", "5a"):
        y = tangent_point(params, "left")
        y1, y2 = l, y
    else:
        y = tangent_point(params, "right")
        y1, y2 = y, h
    nu = (y2 - mu) / (y2 - y1)
    u = stage1_value(jnp.array([y1, y2]), params)
    value = nu * float(u[0]) + (1.0 - nu) * float(u[1])
    return Stage1Solution(
        case=label,
        most_informative=GarblingSolution.from_chord(Chord(y1, y2, nu), value),
        admissible=_admissible(label, params, y),
        unique=True,
    )


def tangent_point(
    params: ModelParams, side: Literal["left", "right"] = "left"
) -> float:
    r"""Free endpoint of a stage-1 chord anchored at a support bound.

    With `side="left"` the chord starts at $`l`$ and the returned $`y_1(\mu)`$
    solves $`U_1'(y)(y - l) = U_1(y) - U_1(l)`$; `side="right"` mirrors this at
    $`h`$. The root is bracketed around the grid envelope's estimate and refined
    by bisection.
    """
    from rijax.receiver.oracle import stage1_oracle

    l, h, mu = params.l, params.h, params.mu
    u1 = lambda y: stage1_value(y, params)
    du1 = jax.grad(u1)

    estimate = stage1_oracle(params).distribution.support_bounds
    if side == "left":
        guess, lower_limit, upper_limit = estimate[1], mu, h
        anchor = u1(l)

        def condition(y):
            return du1(y) * (y - l) - (u1(y) - anchor)

    else:
        guess, lower_limit, upper_limit = estimate[0], l, mu
        anchor = u1(h)

        def condition(y):
            return du1(y) * (h - y) - (anchor - u1(y))

    width = 2.0 * (h - l) / (params.grid_points - 1)
    for _ in range(8):
        lower = max(guess - width, lower_limit + MU_TOL)
        upper = min(guess + width, upper_limit - MU_TOL)
        if float(condition(lower)) * float(condition(upper)) < 0.0:
            break
        width *= 2.0
    else:
        warnings.warn(
            f"No sign change of the tangency condition around {guess}; using the grid estimate.",
            UserWarning,
            stacklevel=2,
        )
        return float(guess)

    bisec = Bisection(
        optimality_fun=condition,
        lower=lower,
        upper=upper,
        tol=BISECTION_TOL,
        maxiter=100,
        check_bracket=False,
    )
    root = float(bisec.run().params)
    logger.debug("tangent point (%s) refined from %.6f to %.10f", side, guess, root)
    return root


__all__ = [
    "Stage2Choice",
    "Stage1Solution",
    "AdmissibleSupport",
    "stage2_choice",
    "first_selected_probability",
    "stage2_closed_form",
    "stage1_value",
    "stage2_case",
    "stage1_case",
    "stage1_closed_form",
    "tangent_point",
]

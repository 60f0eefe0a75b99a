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
"""The receiver's best response to a pair of sender experiments."""

from abc import (
    ABC,
    abstractmethod,
)
from dataclasses import dataclass
import logging

from beartype.typing import (
    Any,
    Dict,
    Optional,
    Tuple,
)
import jax
import jax.numpy as jnp
from jaxtyping import (
    Bool,
    Float,
)
import numpy as np

from rijax.beliefs import (
    MAJORIZATION_TOL,
    MASS_TOL,
    DiscreteBeliefDistribution,
    integrated_cdf,
    mean,
    variance,
)
from rijax.concavify import (
    Chord,
    Degenerate,
    GarblingSolution,
    SampledFunction,
    breakpoint_grid,
    optimal_garbling,
)
from rijax.receiver.closed_form import (
    GAIN_TOL,
    Stage2Choice,
    first_selected_probability,
    stage2_choice,
)
from rijax.receiver.oracle import stage1_breakpoints
from rijax.receiver.payoffs import ModelParams
from rijax.typing import (
    Array,
    ScalarFloat,
    TieRule,
)

logger = logging.getLogger(__name__)

VALUE_TIE_TOL = 1e-9


def binary_garbling_mask(
    y1: Float[Array, " P"],
    y2: Float[Array, " P"],
    p: DiscreteBeliefDistribution,
) -> Bool[Array, " P"]:
    r"""Which Bayes-plausible binary distributions $`\{y_1, y_2\}`$ garble `p`.

    The means agree by construction, so only the integrated CDFs are compared,
    at the support points of `p`.
    """
    prior = mean(p)
    y1 = jnp.asarray(y1, dtype=jnp.float64)
    y2 = jnp.asarray(y2, dtype=jnp.float64)
    span = y2 - y1
    nu = jnp.where(span > 0.0, (y2 - prior) / jnp.where(span > 0.0, span, 1.0), 1.0)
    lo, hi = p.support_bounds
    slack = MAJORIZATION_TOL * max(hi - lo, MASS_TOL)
    t = p.points
    jq = nu[:, None] * jnp.maximum(t - y1[:, None], 0.0) + (1.0 - nu)[:, None] * jnp.maximum(
        t - y2[:, None], 0.0
    )
    inside = (y1 >= lo - MASS_TOL) & (y2 <= hi + MASS_TOL)
    return inside & jnp.all(jq <= integrated_cdf(p, t) + slack, axis=-1)


@dataclass
class AbstractStage2Responder(ABC):
    """How the receiver garbles the second-visited sender's experiment."""

    @property
    @abstractmethod
    def prior(self) -> float:
        raise NotImplementedError

    @abstractmethod
    def choose(self, x: Float[Array, " N"]) -> Stage2Choice:
        """Optimal stage-2 response at each first-stage posterior in `x`."""
        raise NotImplementedError

    @abstractmethod
    def breakpoints(self) -> Float[Array, " B"]:
        """First-stage posteriors at which the continuation value may kink."""
        raise NotImplementedError

    def continuation(
        self, x: Float[Array, " N"], posterior_tie: str = "first"
    ) -> Tuple[Float[Array, " N"], Float[Array, " N"]]:
        """Stage-2 value and first-sender selection probability at each posterior."""
        choice = self.choose(x)
        return choice.value, first_selected_probability(
            x, choice, self.prior, posterior_tie
        )

    def garbling_at(self, x: ScalarFloat) -> GarblingSolution:
        choice = self.choose(jnp.array([float(x)]))
        if bool(choice.learn[0]):
            chord = Chord(float(choice.y1[0]), float(choice.y2[0]), float(choice.nu[0]))
            return GarblingSolution.from_chord(chord, choice.chord_value[0])
        return GarblingSolution.from_chord(Degenerate(self.prior), choice.delta_value[0])


@dataclass
class ClosedFormResponder(AbstractStage2Responder):
    """Stage-2 response to a binary (or degenerate) experiment on `[lo, hi]`."""

    lo: float
    hi: float
    mu: float
    k: float

    @property
    def prior(self) -> float:
        return self.mu

    def choose(self, x: Float[Array, " N"]) -> Stage2Choice:
        return stage2_choice(x, self.mu, self.k, self.lo, self.hi)

    def breakpoints(self) -> Float[Array, " B"]:
        return jnp.concatenate(
            [
                stage1_breakpoints(self.mu, self.k, self.lo, self.hi),
                jnp.array([self.lo, self.hi]),
            ]
        )


@dataclass
class CandidateResponder(AbstractStage2Responder):
    """Stage-2 response to an experiment with more than two support points.

    The garblings considered are the binary garblings with endpoints on a
    lattice of spacing `step` over the support, plus the closed-form chord when
    it garbles the experiment, plus no learning.
    """

    distribution: DiscreteBeliefDistribution
    k: float
    step: float = 0.005

    def __post_init__(self) -> None:
        if not 0.0 < self.step < 1.0:
            raise ValueError(f"step must lie in (0, 1), got {self.step}.")
        prior = self.prior
        lo, hi = self.distribution.support_bounds
        nodes = _lattice(lo, hi, self.step)
        left, right = nodes[nodes < prior - MASS_TOL], nodes[nodes > prior + MASS_TOL]
        y1, y2 = (a.ravel() for a in np.meshgrid(left, right, indexing="ij"))
        keep = np.asarray(binary_garbling_mask(y1, y2, self.distribution))
        self._y1, self._y2 = jnp.asarray(y1[keep]), jnp.asarray(y2[keep])
        self._nu = (self._y2 - prior) / (self._y2 - self._y1)
        logger.debug("candidate responder keeps %d of %d binary garblings", keep.sum(), keep.size)

    @property
    def prior(self) -> float:
        return mean(self.distribution)

    @property
    def bounds(self) -> Tuple[float, float]:
        return self.distribution.support_bounds

    def breakpoints(self) -> Float[Array, " B"]:
        lo, hi = self.bounds
        return jnp.concatenate(
            [
                stage1_breakpoints(self.prior, self.k, lo, hi),
                jnp.array([lo, hi]),
            ]
        )

    def choose(self, x: Float[Array, " N"]) -> Stage2Choice:
        x = jnp.asarray(x, dtype=jnp.float64)
        mu, k = self.prior, self.k
        lo, hi = self.bounds
        closed = stage2_choice(x, mu, k, lo, hi)
        valid = closed.learn & binary_garbling_mask(closed.y1, closed.y2, self.distribution)
        closed_value = jnp.where(valid, closed.chord_value, -jnp.inf)

        has_pairs = self._y1.shape[0] > 0
        y1s, y2s, nus = (
            (self._y1, self._y2, self._nu) if has_pairs else (jnp.full(1, mu),) * 3
        )
        cost1 = k * (y1s - mu) ** 2
        cost2 = k * (y2s - mu) ** 2

        def _best(xi):
            values = nus * (jnp.maximum(xi, y1s) - cost1) + (1.0 - nus) * (
                jnp.maximum(xi, y2s) - cost2
            )
            i = jnp.argmax(values)
            return values[i], i

        pair_value, index = jax.lax.map(_best, x)
        if not has_pairs:
            pair_value = jnp.full(x.shape, -jnp.inf)

        use_pair = pair_value >= closed_value
        y1 = jnp.where(use_pair, y1s[index], closed.y1)
        y2 = jnp.where(use_pair, y2s[index], closed.y2)
        nu = jnp.where(use_pair, nus[index], closed.nu)
        value = jnp.maximum(pair_value, closed_value)
        delta = jnp.maximum(x, mu)
        learn = value > delta + GAIN_TOL
        return Stage2Choice(y1, y2, nu, value, delta, learn)


def _lattice(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(int(round((hi - lo) / step)), 1) + 1
    return np.linspace(lo, hi, n)


def responder_for(
    distribution: DiscreteBeliefDistribution, k: float, step: float = 0.005
) -> AbstractStage2Responder:
    """The stage-2 responder suited to the support of `distribution`."""
    if distribution.n_points <= 2:
        lo, hi = distribution.support_bounds
        return ClosedFormResponder(lo=lo, hi=hi, mu=mean(distribution), k=float(k))
    return CandidateResponder(distribution=distribution, k=float(k), step=step)


@dataclass(frozen=True)
class VisitPlan:
    """The receiver's plan when a given sender is visited first.

    `stage2`, `stop_rule` and `first_selected` are aligned with the support
    points of `stage1`.
    """

    first: int
    stage1: GarblingSolution
    stage2: Tuple[GarblingSolution, ...]
    stop_rule: Tuple[str, ...]
    first_selected: Tuple[float, ...]
    value: float
    stage1_cost: float
    stage2_cost: float

    @property
    def gross(self) -> float:
        return self.value + self.stage1_cost + self.stage2_cost

    @property
    def selection_probability(self) -> float:
        """Probability that the first-visited sender is selected."""
        weights = np.asarray(self.stage1.distribution.weights)
        return float(np.dot(weights, self.first_selected))

    def to_dict(self) -> Dict[str, Any]:
        points = [float(x) for x in self.stage1.distribution.points]
        return {
            "first": self.first,
            "stage1": self.stage1.to_dict(),
            "stage2": [
                {"belief": x, "action": rule, "garbling": g.to_dict()}
                for x, rule, g in zip(points, self.stop_rule, self.stage2)
            ],
            "value": self.value,
            "gross": self.gross,
            "stage1_cost": self.stage1_cost,
            "stage2_cost": self.stage2_cost,
            "first_selected": self.selection_probability,
        }


@dataclass(frozen=True)
class ReceiverStrategy:
    r"""Visit-order randomisation over the two visit plans.

    `first_visit_prob` is the probability $`\lambda`$ that sender 1 is visited
    first; `plans[0]` starts at sender 1 and `plans[1]` at sender 2.
    """

    first_visit_prob: float
    plans: Tuple[VisitPlan, VisitPlan]
    value: float

    def plan(self, first: int) -> VisitPlan:
        if first not in (1, 2):
            raise ValueError(f"first must be 1 or 2, got {first}.")
        return self.plans[first - 1]

    @property
    def primary(self) -> VisitPlan:
        return self.plans[0] if self.first_visit_prob >= 0.5 else self.plans[1]

    @property
    def stage1(self) -> GarblingSolution:
        return self.primary.stage1

    @property
    def stage2(self) -> Dict[float, GarblingSolution]:
        points = [float(x) for x in self.primary.stage1.distribution.points]
        return dict(zip(points, self.primary.stage2))

    @property
    def stop_rule(self) -> Dict[float, str]:
        points = [float(x) for x in self.primary.stage1.distribution.points]
        return dict(zip(points, self.primary.stop_rule))

    def sender_payoffs(self) -> Tuple[float, float]:
        """Selection probabilities $`(u_1, u_2)`$, summing to one."""
        lam = self.first_visit_prob
        u1 = lam * self.plans[0].selection_probability + (1.0 - lam) * (
            1.0 - self.plans[1].selection_probability
        )
        return u1, 1.0 - u1

    def to_dict(self) -> Dict[str, Any]:
        u1, u2 = self.sender_payoffs()
        return {
            "first_visit_prob": self.first_visit_prob,
            "value": self.value,
            "sender_payoffs": [u1, u2],
            "plans": [plan.to_dict() for plan in self.plans],
        }


def _stage1_on_grid(
    dist: DiscreteBeliefDistribution,
    prior: float,
    k: float,
    responder: AbstractStage2Responder,
    posterior_tie: str,
    grid_points: int,
) -> GarblingSolution:
    lo, hi = dist.support_bounds
    if hi - lo <= 0.0:
        value, _ = responder.continuation(jnp.array([prior]), posterior_tie)
        return GarblingSolution.from_chord(Degenerate(prior), value[0])
    extra = jnp.concatenate([responder.breakpoints(), jnp.array([prior])])
    grid, mask = breakpoint_grid(lo, hi, grid_points, extra)
    grid = grid[np.asarray(mask)]
    v2, _ = responder.continuation(grid, posterior_tie)
    f = SampledFunction(grid=grid, values=v2 - k * (grid - prior) ** 2)
    return optimal_garbling(f, prior)


def _stage1_by_candidates(
    dist: DiscreteBeliefDistribution,
    prior: float,
    k: float,
    responder: AbstractStage2Responder,
    posterior_tie: str,
    step: float,
) -> GarblingSolution:
    lo, hi = dist.support_bounds
    nodes = _lattice(lo, hi, step)
    left, right = nodes[nodes < prior - MASS_TOL], nodes[nodes > prior + MASS_TOL]
    y1, y2 = (a.ravel() for a in np.meshgrid(left, right, indexing="ij"))
    d = 1.0 / (4.0 * k)
    y1 = np.append(y1, prior - d)
    y2 = np.append(y2, prior + d)
    keep = np.asarray(binary_garbling_mask(y1, y2, dist))
    y1, y2 = y1[keep], y2[keep]

    def u1(x):
        x = jnp.asarray(x, dtype=jnp.float64)
        v2, _ = responder.continuation(x, posterior_tie)
        return v2 - k * (x - prior) ** 2

    nu = (y2 - prior) / (y2 - y1)
    pair_values = nu * u1(y1) + (1.0 - nu) * u1(y2)
    own_value = float(jnp.dot(dist.weights, u1(dist.points)))
    delta_value = float(u1(jnp.array([prior]))[0])

    # (value, spread, solution); value ties go to the larger spread
    candidates = [
        (delta_value, 0.0, GarblingSolution.from_chord(Degenerate(prior), delta_value)),
        (own_value, variance(dist, prior), GarblingSolution(distribution=dist, value=own_value)),
    ]
    if y1.size:
        spread = np.asarray((y2 - prior) * (prior - y1))
        pair_values = np.asarray(pair_values)
        tied = pair_values >= pair_values.max() - GAIN_TOL
        best = int(np.argmax(np.where(tied, spread, -np.inf)))
        chord = Chord(float(y1[best]), float(y2[best]), float(nu[best]))
        value = float(pair_values[best])
        candidates.append((value, spread[best], GarblingSolution.from_chord(chord, value)))
    top = max(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] >= top - GAIN_TOL]
    return max(tied, key=lambda c: c[1])[2]


def visit_plan(
    first: int,
    dists: Tuple[DiscreteBeliefDistribution, DiscreteBeliefDistribution],
    params: ModelParams,
    step: float = 0.005,
) -> VisitPlan:
    """Optimal two-stage plan when sender `first` is visited first."""
    i, j = first - 1, 2 - first
    dist_first, dist_second = dists[i], dists[j]
    prior_first, prior_second = params.prior(first), params.prior(j + 1)
    cost = params.cost_model
    k_first, k_second = cost.coefficient(dist_first), cost.coefficient(dist_second)
    responder = responder_for(dist_second, k_second, step)

    if dist_first.n_points <= 2:
        stage1 = _stage1_on_grid(
            dist_first, prior_first, k_first, responder, params.posterior_tie, params.grid_points
        )
    else:
        stage1 = _stage1_by_candidates(
            dist_first, prior_first, k_first, responder, params.posterior_tie, step
        )

    points = stage1.distribution.points
    choice = responder.choose(points)
    selected = first_selected_probability(points, choice, prior_second, params.posterior_tie)
    stage2, rules = [], []
    for m in range(points.shape[0]):
        if bool(choice.learn[m]):
            chord = Chord(float(choice.y1[m]), float(choice.y2[m]), float(choice.nu[m]))
            stage2.append(GarblingSolution.from_chord(chord, choice.chord_value[m]))
            rules.append("continue")
        else:
            stage2.append(GarblingSolution.from_chord(Degenerate(prior_second), choice.delta_value[m]))
            rules.append("select_visited" if float(selected[m]) > 0.5 else "select_other")

    weights = np.asarray(stage1.distribution.weights)
    stage1_cost = k_first * variance(stage1.distribution, prior_first)
    stage2_cost = float(
        sum(w * k_second * variance(g.distribution, prior_second) for w, g in zip(weights, stage2))
    )
    return VisitPlan(
        first=first,
        stage1=stage1,
        stage2=tuple(stage2),
        stop_rule=tuple(rules),
        first_selected=tuple(float(s) for s in selected),
        value=float(stage1.value),
        stage1_cost=float(stage1_cost),
        stage2_cost=stage2_cost,
    )


def visit_probability(v1: float, v2: float, tie_rule: TieRule) -> float:
    """Probability of visiting sender 1 first given the two plan values."""
    if abs(v1 - v2) <= VALUE_TIE_TOL:
        return {"fair": 0.5, "first": 1.0, "second": 0.0}[tie_rule]
    return 1.0 if v1 > v2 else 0.0


def best_response(
    p1: DiscreteBeliefDistribution,
    p2: DiscreteBeliefDistribution,
    params: ModelParams,
    tie_rule: TieRule = "fair",
    step: float = 0.005,
) -> ReceiverStrategy:
    """The receiver's optimal strategy against the experiments `p1` and `p2`.

    Args:
        p1 (DiscreteBeliefDistribution): sender 1's experiment, with mean `params.mu`.
        p2 (DiscreteBeliefDistribution): sender 2's experiment, with mean `params.prior2`.
        params (ModelParams): model parameters.
        tie_rule (TieRule): visit order when both orders are equally valuable.
        step (float): lattice spacing for experiments with more than two points.

    Returns:
        ReceiverStrategy: the best response.
    """
    for sender, p in ((1, p1), (2, p2)):
        if abs(mean(p) - params.prior(sender)) > MASS_TOL:
            raise ValueError(
                f"sender {sender}'s experiment has mean {mean(p)}, not the prior {params.prior(sender)}."
            )
    plans = (visit_plan(1, (p1, p2), params, step), visit_plan(2, (p1, p2), params, step))
    lam = visit_probability(plans[0].value, plans[1].value, tie_rule)
    logger.debug("plan values %.10f / %.10f, first-visit probability %.2f", plans[0].value, plans[1].value, lam)
    return ReceiverStrategy(
        first_visit_prob=lam, plans=plans, value=max(plans[0].value, plans[1].value)
    )


def first_best_value(params: ModelParams) -> float:
    """Receiver value when both senders disclose fully."""
    full = (
        DiscreteBeliefDistribution.full_information(params.mu),
        DiscreteBeliefDistribution.full_information(params.prior2),
    )
    return best_response(*full, params).value


def achieves_first_best(
    p1: DiscreteBeliefDistribution,
    p2: DiscreteBeliefDistribution,
    params: ModelParams,
    tol: float = VALUE_TIE_TOL,
) -> bool:
    return abs(best_response(p1, p2, params).value - first_best_value(params)) <= tol


__all__ = [
    "AbstractStage2Responder",
    "ClosedFormResponder",
    "CandidateResponder",
    "ReceiverStrategy",
    "VisitPlan",
    "binary_garbling_mask",
    "responder_for",
    "visit_plan",
    "visit_probability",
    "best_response",
    "first_best_value",
    "achieves_first_best",
]

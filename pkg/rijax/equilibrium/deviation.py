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
r"""Search for profitable unilateral deviations by a sender.

A deviation is observed only when the receiver looks at the deviator on path,
so her visit order and her stage-1 plan at the other sender stay fixed. The
deviation then matters in two places:

* when the deviator is visited first, the receiver re-optimises her stage-1
  garbling of the new experiment, anticipating her fixed stage-2 behaviour at
  the other sender;
* when the deviator is visited second, she re-optimises her stage-2 garbling at
  every stage-1 posterior after which she learns on path.

Binary deviations $`\{\alpha, \beta\}`$ are scanned on a lattice. First-visit
responses for all of them come from one restricted chord table per cost
coefficient; second-visit responses from the closed-form stage-2 kernel.
"""

from dataclasses import dataclass
import logging

from beartype.typing import (
    Dict,
    Iterable,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)
import jax.numpy as jnp
import numpy as np

from rijax.beliefs import (
    MASS_TOL,
    DiscreteBeliefDistribution,
    informativeness_rank,
)
from rijax.concavify import (
    RestrictedChordTable,
    breakpoint_grid,
    restricted_chord_table,
)
from rijax.equilibrium.report import (
    DeviationCertificate,
    DeviationSearchConfig,
    EquilibriumReport,
    decide,
)
from rijax.receiver import (
    AbstractStage2Responder,
    ModelParams,
    ReceiverStrategy,
    best_response,
    responder_for,
    stage2_choice,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeviationSearchResult:
    """Outcome of `deviation_search`.

    `margin` is the largest deviation gain found under the receiver response
    least favourable to the deviator; `favorable_margin` under the most
    favourable one. `ignorable_by_deviation` lists `(sender, alpha, beta, flag)`
    for every searched binary deviation, where `flag` says whether learning
    nothing at the deviator stays a best response when it is visited first.
    """

    margin: float
    favorable_margin: float
    certificate: Optional[DeviationCertificate]
    deviations_searched: int
    strategy: ReceiverStrategy
    three_point_margin: Optional[float] = None
    deviator_ignorable: bool = True
    ignorable_by_deviation: Tuple[Tuple[int, float, float, bool], ...] = ()


class _SenderGains(NamedTuple):
    alphas: np.ndarray
    betas: np.ndarray
    low: np.ndarray
    high: np.ndarray
    first: np.ndarray
    second: np.ndarray
    tables: Dict[float, RestrictedChordTable]
    coefficients: np.ndarray
    trace: Dict[str, np.ndarray]
    ignorable: np.ndarray
    three_point: Optional[float]


def lattice_nodes(
    grid_points: int, step: float, extra: Sequence[float] = ()
) -> np.ndarray:
    """Nodes of the uniform grid spaced (approximately) `step` apart, plus `extra`."""
    stride = max(1, int(round(step * (grid_points - 1))))
    nodes = np.linspace(0.0, 1.0, grid_points)[::stride]
    return np.unique(np.concatenate([nodes, [0.0, 1.0], np.asarray(extra, dtype=np.float64)]))


def deviation_lattice(
    mu: float, grid_points: int, step: float, extra: Sequence[float] = ()
) -> Tuple[np.ndarray, np.ndarray]:
    r"""Endpoints $`(\alpha, \beta)`$ of the binary deviations, with $`\delta_\mu`$ last."""
    nodes = lattice_nodes(grid_points, step, extra)
    left, right = nodes[nodes < mu - MASS_TOL], nodes[nodes > mu + MASS_TOL]
    a, b = np.meshgrid(left, right, indexing="ij")
    return np.append(a.ravel(), mu), np.append(b.ravel(), mu)


def _beats(y, x, tie: float):
    return jnp.where(y < x, 1.0, jnp.where(y > x, 0.0, tie))


def first_visit_tables(
    mu: float,
    responder: AbstractStage2Responder,
    coefficients: Iterable[float],
    params: ModelParams,
    tie_tol: float,
    extra: Sequence[float] = (),
) -> Dict[float, RestrictedChordTable]:
    """Restricted chord tables of the deviator's stage-1 problem, one per coefficient.

    The attached payoff is the probability that the first-visited sender is
    selected, given the receiver's stage-2 behaviour at the other sender.
    """
    breakpoints = jnp.concatenate(
        [responder.breakpoints(), jnp.asarray([mu, *extra], dtype=jnp.float64)]
    )
    grid, mask = breakpoint_grid(0.0, 1.0, params.grid_points, breakpoints)
    grid = grid[np.asarray(mask)]
    v2, selected = responder.continuation(grid, params.posterior_tie)
    return {
        float(c): restricted_chord_table(grid, v2 - c * (grid - mu) ** 2, selected, mu, tie_tol)
        for c in coefficients
    }


def _search_sender(
    sender: int,
    dists: Tuple[DiscreteBeliefDistribution, DiscreteBeliefDistribution],
    params: ModelParams,
    search: DeviationSearchConfig,
    strategy: ReceiverStrategy,
) -> _SenderGains:
    other = 3 - sender
    mu_i = params.prior(sender)
    dist_i, dist_j = dists[sender - 1], dists[other - 1]
    cost = params.cost_model
    k_i, k_j = cost.coefficient(dist_i), cost.coefficient(dist_j)
    responder = responder_for(dist_j, k_j, search.step)
    lo_i, hi_i = dist_i.support_bounds
    tie = 1.0 if params.posterior_tie == "first" else 0.0

    alphas, betas = deviation_lattice(mu_i, params.grid_points, search.step, (lo_i, hi_i))
    coefficients = np.asarray(cost.coefficients_for_binary(alphas, betas, mu_i))
    lam = strategy.first_visit_prob if sender == 1 else 1.0 - strategy.first_visit_prob
    n = alphas.size

    first_low, first_high = np.zeros(n), np.zeros(n)
    trace = {}
    tables: Dict[float, RestrictedChordTable] = {}
    ignorable = np.ones(n, dtype=bool)
    baseline = None
    plan_first = strategy.plan(sender)
    if lam > 0.0 and plan_first.stage1.learns:
        distinct = np.unique(np.append(coefficients, k_i))
        tables = first_visit_tables(
            mu_i, responder, distinct, params, search.tie_tol, (lo_i, hi_i)
        )
        if dist_i.n_points <= 2:
            baseline = float(tables[float(k_i)].lookup(np.array([lo_i]), np.array([hi_i])).low[0])
        else:
            baseline = plan_first.selection_probability
        low, high = np.zeros(n), np.zeros(n)
        y1, y2, nu = np.zeros(n), np.zeros(n), np.ones(n)
        for c, table in tables.items():
            rows = coefficients == c
            if not rows.any():
                continue
            entry = table.lookup(alphas[rows], betas[rows])
            low[rows], high[rows] = np.asarray(entry.low), np.asarray(entry.high)
            y1[rows], y2[rows], nu[rows] = np.asarray(entry.y1), np.asarray(entry.y2), np.asarray(entry.nu)
            stay = table.lookup(np.array([mu_i]), np.array([mu_i])).value[0]
            ignorable[rows] = np.asarray(entry.value) <= float(stay) + search.tie_tol
        first_low, first_high = low - baseline, high - baseline
        trace.update(first_y1=y1, first_y2=y2, first_nu=nu, first_payoff=low)

    second_low, second_high = np.zeros(n), np.zeros(n)
    plan_second = strategy.plan(other)
    learns = np.array([g.learns for g in plan_second.stage2])
    if lam < 1.0 and learns.any():
        x = np.asarray(plan_second.stage1.distribution.points)[learns]
        w = np.asarray(plan_second.stage1.distribution.weights)[learns]
        s_on = 1.0 - np.asarray(plan_second.first_selected)[learns]
        choice = stage2_choice(x[:, None], mu_i, coefficients[None, :], alphas[None, :], betas[None, :])
        xs = x[:, None]
        s_chord = 1.0 - (
            choice.nu * _beats(choice.y1, xs, tie) + (1.0 - choice.nu) * _beats(choice.y2, xs, tie)
        )
        s_delta = 1.0 - _beats(mu_i, xs, tie)
        gap = choice.chord_value - choice.delta_value
        chord_wins = gap > search.tie_tol
        tied = jnp.abs(gap) <= search.tie_tol
        low = jnp.where(chord_wins, s_chord, jnp.where(tied, jnp.minimum(s_chord, s_delta), s_delta))
        high = jnp.where(chord_wins, s_chord, jnp.where(tied, jnp.maximum(s_chord, s_delta), s_delta))
        second_low = np.asarray(w @ (low - s_on[:, None]))
        second_high = np.asarray(w @ (high - s_on[:, None]))
        contribution = np.asarray(w[:, None] * (low - s_on[:, None]))
        m = np.argmax(np.abs(contribution), axis=0)
        columns = np.arange(n)
        trace.update(
            second_belief=x[m],
            second_y1=np.asarray(choice.y1)[m, columns],
            second_y2=np.asarray(choice.y2)[m, columns],
            second_nu=np.asarray(choice.nu)[m, columns],
            second_learn=np.asarray(chord_wins)[m, columns],
        )

    three_point = None
    if search.three_point:
        three_point = _three_point_margin(
            sender, dists, params, search, strategy, responder, baseline
        )

    return _SenderGains(
        alphas=alphas,
        betas=betas,
        low=lam * first_low + (1.0 - lam) * second_low,
        high=lam * first_high + (1.0 - lam) * second_high,
        first=lam * first_low,
        second=(1.0 - lam) * second_low,
        tables=tables,
        coefficients=coefficients,
        trace=trace,
        ignorable=ignorable,
        three_point=three_point,
    )


def _three_point_deviations(mu: float, nodes: np.ndarray):
    triples = [
        (a, b, c)
        for a in nodes[nodes < mu - MASS_TOL]
        for c in nodes[nodes > mu + MASS_TOL]
        for b in nodes[(nodes > a) & (nodes < c)]
        if abs(b - mu) > MASS_TOL
    ]
    rows = []
    for a, b, c in triples:
        wb_max = min((c - mu) / (c - b), (mu - a) / (b - a))
        for t in (0.25, 0.5, 0.75):
            wb = t * wb_max
            wc = (mu - wb * b - (1.0 - wb) * a) / (c - a)
            rows.append((a, b, c, 1.0 - wb - wc, wb, wc))
    return np.array(rows).reshape(-1, 6)


def _three_point_candidates(dev: np.ndarray, mu: float, nodes: np.ndarray):
    """Garblings of each three-point deviation: itself, its merges and lattice pairs.

    Returns points `(D, C, 3)` and weights `(D, C, 3)`; degenerate and binary
    candidates pad with zero weights.
    """
    a, b, c, wa, wb, wc = (dev[:, i] for i in range(6))
    zero = np.zeros_like(a)

    def merge(x1, w1, x2, w2):
        return (w1 * x1 + w2 * x2) / (w1 + w2), w1 + w2

    m_bc, w_bc = merge(b, wb, c, wc)
    m_ab, w_ab = merge(a, wa, b, wb)
    m_ac, w_ac = merge(a, wa, c, wc)
    fixed_points = [
        np.stack([a, b, c], -1),
        np.stack([a, m_bc, zero], -1),
        np.stack([m_ab, c, zero], -1),
        np.stack([b, m_ac, zero], -1),
        np.stack([np.full_like(a, mu), zero, zero], -1),
    ]
    fixed_weights = [
        np.stack([wa, wb, wc], -1),
        np.stack([wa, w_bc, zero], -1),
        np.stack([w_ab, wc, zero], -1),
        np.stack([wb, w_ac, zero], -1),
        np.stack([np.ones_like(a), zero, zero], -1),
    ]

    left, right = nodes[nodes < mu - MASS_TOL], nodes[nodes > mu + MASS_TOL]
    y1, y2 = (v.ravel() for v in np.meshgrid(left, right, indexing="ij"))
    nu = (y2 - mu) / (y2 - y1)
    j_q = nu[None, :] * np.maximum(b[:, None] - y1[None, :], 0.0)
    j_p = wa[:, None] * (b[:, None] - a[:, None])
    valid = (y1[None, :] >= a[:, None] - MASS_TOL) & (y2[None, :] <= c[:, None] + MASS_TOL)
    valid &= j_q <= j_p + 1e-12
    pair_points = np.broadcast_to(np.stack([y1, y2, np.zeros_like(y1)], -1), (a.size, y1.size, 3))
    pair_weights = np.where(
        valid[..., None], np.stack([nu, 1.0 - nu, np.zeros_like(nu)], -1)[None], 0.0
    )
    points = np.concatenate([np.stack(fixed_points, 1), pair_points], 1)
    weights = np.concatenate([np.stack(fixed_weights, 1), pair_weights], 1)
    usable = weights.sum(-1) > 0.5
    return points, weights, usable


def _best_by_value(values, payoffs, usable, tie_tol):
    values = np.where(usable, values, -np.inf)
    top = values.max(axis=-1, keepdims=True)
    tied = values >= top - tie_tol
    return np.where(tied, payoffs, np.inf).min(axis=-1)


def _three_point_margin(
    sender: int,
    dists,
    params: ModelParams,
    search: DeviationSearchConfig,
    strategy: ReceiverStrategy,
    responder: AbstractStage2Responder,
    baseline: Optional[float],
) -> float:
    """Largest gain over three-point deviations on the coarse lattice."""
    other = 3 - sender
    mu = params.prior(sender)
    cost = params.cost_model
    nodes = lattice_nodes(params.grid_points, search.three_point_step)
    dev = _three_point_deviations(mu, nodes)
    if dev.size == 0:
        return 0.0
    points, weights, usable = _three_point_candidates(dev, mu, nodes)
    ranks = np.array(
        [
            informativeness_rank(
                DiscreteBeliefDistribution(points=row[:3].copy(), weights=row[3:].copy())
            )
            for row in dev
        ]
    )
    coefficients = np.array([cost.coefficient_from_rank(r) for r in ranks])[:, None, None]
    lam = strategy.first_visit_prob if sender == 1 else 1.0 - strategy.first_visit_prob
    tie = 1.0 if params.posterior_tie == "first" else 0.0
    gains = np.zeros(dev.shape[0])

    if baseline is not None and lam > 0.0:
        v2, selected = responder.continuation(jnp.asarray(points.ravel()), params.posterior_tie)
        v2 = np.asarray(v2).reshape(points.shape)
        selected = np.asarray(selected).reshape(points.shape)
        values = (weights * (v2 - coefficients * (points - mu) ** 2)).sum(-1)
        payoffs = (weights * selected).sum(-1)
        gains += lam * (_best_by_value(values, payoffs, usable, search.tie_tol) - baseline)

    plan_second = strategy.plan(other)
    if lam < 1.0:
        for x, w, g, s in zip(
            np.asarray(plan_second.stage1.distribution.points),
            np.asarray(plan_second.stage1.distribution.weights),
            plan_second.stage2,
            plan_second.first_selected,
        ):
            if not g.learns:
                continue
            u2 = np.maximum(x, points) - coefficients * (points - mu) ** 2
            own = 1.0 - np.asarray(_beats(points, x, tie))
            values = (weights * u2).sum(-1)
            payoffs = (weights * own).sum(-1)
            best = _best_by_value(values, payoffs, usable, search.tie_tol)
            gains += (1.0 - lam) * w * (best - (1.0 - s))

    return float(gains.max())


def deviation_search(
    p1: DiscreteBeliefDistribution,
    p2: DiscreteBeliefDistribution,
    params: ModelParams,
    search: Optional[DeviationSearchConfig] = None,
    strategy: Optional[ReceiverStrategy] = None,
) -> DeviationSearchResult:
    r"""Scan binary deviations of both senders and return the most profitable one.

    Args:
        p1 (DiscreteBeliefDistribution): sender 1's on-path experiment.
        p2 (DiscreteBeliefDistribution): sender 2's on-path experiment.
        params (ModelParams): model parameters.
        search (Optional[DeviationSearchConfig]): search settings.
        strategy (Optional[ReceiverStrategy]): the receiver's on-path strategy;
            computed with `best_response` when omitted.

    Returns:
        DeviationSearchResult: margins and a certificate for the best deviation.
    """
    search = DeviationSearchConfig() if search is None else search
    if strategy is None:
        strategy = best_response(p1, p2, params, search.tie_rule, search.step)
    dists = (p1, p2)

    results = [_search_sender(s, dists, params, search, strategy) for s in (1, 2)]
    searched = sum(r.alphas.size for r in results)
    best_sender = int(np.argmax([r.low.max() for r in results]))
    best = results[best_sender]
    d = int(np.argmax(best.low))
    sender = best_sender + 1
    mu_i = params.prior(sender)
    alpha, beta = float(best.alphas[d]), float(best.betas[d])

    response = {key: _jsonable(value[d]) for key, value in best.trace.items()}
    certificate = DeviationCertificate(
        sender=sender,
        distribution=DiscreteBeliefDistribution.binary(alpha, beta, mu_i),
        gain=float(best.low[d]),
        favorable_gain=float(best.high[d]),
        first_visit_gain=float(best.first[d]),
        second_visit_gain=float(best.second[d]),
        belief=response.get("second_belief"),
        response=response,
    )
    three = [r.three_point for r in results if r.three_point is not None]
    margin = float(max(r.low.max() for r in results))
    logger.info(
        "searched %d deviations: margin %.3e (sender %d, {%.4f, %.4f})",
        searched,
        margin,
        sender,
        alpha,
        beta,
    )
    return DeviationSearchResult(
        margin=margin,
        favorable_margin=float(max(r.high.max() for r in results)),
        certificate=certificate,
        deviations_searched=searched,
        strategy=strategy,
        three_point_margin=max(three) if three else None,
        deviator_ignorable=bool(all(r.ignorable.all() for r in results)),
        ignorable_by_deviation=tuple(
            (s, float(a), float(b), bool(flag))
            for s, r in enumerate(results, start=1)
            for a, b, flag in zip(r.alphas, r.betas, r.ignorable)
        ),
    )


def _jsonable(value):
    value = np.asarray(value)
    return bool(value) if value.dtype == bool else float(value)


def check_profile(
    p1: DiscreteBeliefDistribution,
    p2: DiscreteBeliefDistribution,
    params: ModelParams,
    search: Optional[DeviationSearchConfig] = None,
    closed_form: Optional[bool] = None,
    **details,
) -> EquilibriumReport:
    """Equilibrium check of an arbitrary profile by deviation search.

    Args:
        p1 (DiscreteBeliefDistribution): sender 1's experiment.
        p2 (DiscreteBeliefDistribution): sender 2's experiment.
        params (ModelParams): model parameters.
        search (Optional[DeviationSearchConfig]): search settings.
        closed_form (Optional[bool]): closed-form equilibrium indicator, when known.
        **details: extra entries for the report.

    Returns:
        EquilibriumReport: the verdict with the best deviation found.
    """
    search = DeviationSearchConfig() if search is None else search
    result = deviation_search(p1, p2, params, search)
    verdict = decide(result.margin, search.profit_threshold, closed_form)
    extra = dict(details)
    if result.three_point_margin is not None:
        extra["three_point_margin"] = result.three_point_margin
    extra["first_visit_prob"] = result.strategy.first_visit_prob
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=result.strategy.sender_payoffs(),
        receiver_value=result.strategy.value,
        margin=result.margin,
        favorable_margin=result.favorable_margin,
        best_deviation=result.certificate,
        closed_form=closed_form,
        deviations_searched=result.deviations_searched,
        details=extra,
    )


__all__ = [
    "DeviationSearchResult",
    "lattice_nodes",
    "deviation_lattice",
    "first_visit_tables",
    "deviation_search",
    "check_profile",
]

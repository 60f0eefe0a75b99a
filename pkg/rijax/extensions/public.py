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
"""Equilibrium checks when the senders' experiments are publicly observed.

Seeing a deviation before her first visit, the receiver re-optimises the visit
order as well as every garbling. For each binary deviation both orders are
evaluated: with the deviator first through the restricted chord table, and
with the other sender first through an envelope of the stage-1 problem at the
other sender, one per deviation.
"""

from functools import partial
import logging

from beartype.typing import (
    Optional,
    Tuple,
)
import jax
import jax.numpy as jnp
import numpy as np
from tqdm.auto import tqdm

from rijax.beliefs import (
    MASS_TOL,
    DiscreteBeliefDistribution,
    mean,
)
from rijax.concavify import (
    HULL_TOL,
    _chord_average,
    _envelope_chord,
    _upper_hull,
    breakpoint_grid,
)
from rijax.equilibrium import (
    DeviationCertificate,
    DeviationSearchConfig,
    EquilibriumReport,
    binary_symmetric_region,
    decide,
    deviation_lattice,
    first_visit_tables,
)
from rijax.receiver import (
    ModelParams,
    best_response,
    first_selected_probability,
    responder_for,
    stage2_choice,
)
from rijax.receiver.oracle import stage1_breakpoints
from rijax.receiver.strategy import visit_probability

logger = logging.getLogger(__name__)


@partial(jax.jit, static_argnames=("n", "posterior_tie"))
def _other_first_batch(alpha, beta, c, mu_i, mu_j, k_j, lo_j, hi_j, n, posterior_tie):
    """Receiver value and deviator payoff when the other sender is visited first."""

    def _one(alpha, beta, c):
        breakpoints = jnp.concatenate(
            [stage1_breakpoints(mu_i, c, alpha, beta, mu_j), jnp.stack([lo_j, hi_j])]
        )
        grid, mask = breakpoint_grid(lo_j, hi_j, n, breakpoints)
        choice = stage2_choice(grid, mu_i, c, alpha, beta)
        values = choice.value - k_j * (grid - mu_j) ** 2
        own = 1.0 - first_selected_probability(grid, choice, mu_i, posterior_tie)
        vertices = _upper_hull(grid, values, mask, HULL_TOL)
        value = _envelope_chord(grid, values, vertices, mu_j)[3]
        return value, _chord_average(grid, vertices, own, mu_j)

    return jax.vmap(_one)(alpha, beta, c)


def other_first_response(
    alphas: np.ndarray,
    betas: np.ndarray,
    coefficients: np.ndarray,
    mu_i: float,
    other: DiscreteBeliefDistribution,
    k_j: float,
    params: ModelParams,
    search: DeviationSearchConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """Chunked evaluation of `_other_first_batch` over all deviations."""
    lo_j, hi_j = other.support_bounds
    mu_j = mean(other)
    size = search.chunk_size
    total = alphas.size
    values, payoffs = np.empty(total), np.empty(total)
    starts = range(0, total, size)
    for start in tqdm(starts, desc="public deviations", disable=not search.progress):
        stop = min(start + size, total)
        pad = size - (stop - start)
        chunk = [np.pad(v[start:stop], (0, pad), mode="edge") for v in (alphas, betas, coefficients)]
        value, payoff = _other_first_batch(
            *chunk,
            mu_i,
            mu_j,
            k_j,
            lo_j,
            hi_j,
            n=search.public_grid_points,
            posterior_tie=params.posterior_tie,
        )
        values[start:stop] = np.asarray(value)[: stop - start]
        payoffs[start:stop] = np.asarray(payoff)[: stop - start]
    return values, payoffs


def _public_sender(
    sender: int,
    p: DiscreteBeliefDistribution,
    params: ModelParams,
    search: DeviationSearchConfig,
):
    mu = params.prior(sender)
    cost = params.cost_model
    k = cost.coefficient(p)
    lo, hi = p.support_bounds
    alphas, betas = deviation_lattice(mu, params.grid_points, search.step, (lo, hi))
    alphas, betas = np.append(alphas, lo), np.append(betas, hi)
    coefficients = np.asarray(cost.coefficients_for_binary(alphas, betas, mu))
    coefficients[-1] = k

    tables = first_visit_tables(
        mu, responder_for(p, k), np.unique(coefficients), params, search.tie_tol, (lo, hi)
    )
    value_a, low_a, high_a = np.empty(alphas.size), np.empty(alphas.size), np.empty(alphas.size)
    for c, table in tables.items():
        rows = coefficients == c
        entry = table.lookup(alphas[rows], betas[rows])
        value_a[rows] = np.asarray(entry.value)
        low_a[rows], high_a[rows] = np.asarray(entry.low), np.asarray(entry.high)
    value_b, payoff_b = other_first_response(
        alphas, betas, coefficients, mu, p, k, params, search
    )

    # the last entry is the on-path experiment
    sender_first = value_a[-1], value_b[-1]
    one_first = visit_probability(
        *(sender_first if sender == 1 else sender_first[::-1]), search.tie_rule
    )
    lam = one_first if sender == 1 else 1.0 - one_first
    baseline = lam * low_a[-1] + (1.0 - lam) * payoff_b[-1]

    a_wins = value_a > value_b + search.tie_tol
    b_wins = value_b > value_a + search.tie_tol
    low = np.where(a_wins, low_a, np.where(b_wins, payoff_b, np.minimum(low_a, payoff_b)))
    high = np.where(a_wins, high_a, np.where(b_wins, payoff_b, np.maximum(high_a, payoff_b)))
    order = np.where(a_wins, "deviator_first", np.where(b_wins, "other_first", "tie"))
    return (
        alphas[:-1],
        betas[:-1],
        low[:-1] - baseline,
        high[:-1] - baseline,
        order[:-1],
        value_a[:-1],
        value_b[:-1],
    )


def check_public(
    p: DiscreteBeliefDistribution,
    params: ModelParams,
    search: Optional[DeviationSearchConfig] = None,
) -> EquilibriumReport:
    r"""Is the symmetric profile `(p, p)` an equilibrium with public experiments?

    Args:
        p (DiscreteBeliefDistribution): the common experiment on $`\{l, h\}`$.
        params (ModelParams): model parameters with a common prior.
        search (Optional[DeviationSearchConfig]): search settings.

    Returns:
        EquilibriumReport: the verdict, with the chosen visit order of the best
        deviation in its response trace.
    """
    search = DeviationSearchConfig() if search is None else search
    lo, hi = p.support_bounds
    if not p.is_binary or abs(lo - params.l) > MASS_TOL or abs(hi - params.h) > MASS_TOL:
        raise ValueError(
            f"p must be supported on {{l, h}} = {{{params.l}, {params.h}}}, got {p.to_dict()['points']}."
        )
    if abs(mean(p) - params.mu) > MASS_TOL or abs(params.prior2 - params.mu) > MASS_TOL:
        raise ValueError(f"p must have the common prior {params.mu} as its mean, got {mean(p)}.")
    strategy = best_response(p, p, params, search.tie_rule, search.step)
    closed_form = binary_symmetric_region(params.k, params.mu, params.l, params.h)

    best = None
    favorable = -np.inf
    searched = 0
    for sender in (1, 2):
        alphas, betas, low, high, order, value_a, value_b = _public_sender(
            sender, p, params, search
        )
        searched += alphas.size
        favorable = max(favorable, float(high.max()))
        d = int(np.argmax(low))
        if best is None or low[d] > best["gain"]:
            best = {
                "sender": sender,
                "alpha": float(alphas[d]),
                "beta": float(betas[d]),
                "gain": float(low[d]),
                "favorable_gain": float(high[d]),
                "order": str(order[d]),
                "value_deviator_first": float(value_a[d]),
                "value_other_first": float(value_b[d]),
            }

    margin = best["gain"]
    certificate = DeviationCertificate(
        sender=best["sender"],
        distribution=DiscreteBeliefDistribution.binary(best["alpha"], best["beta"], params.mu),
        gain=margin,
        favorable_gain=best["favorable_gain"],
        first_visit_gain=margin if best["order"] == "deviator_first" else 0.0,
        second_visit_gain=margin if best["order"] == "other_first" else 0.0,
        response={
            "order": best["order"],
            "value_deviator_first": best["value_deviator_first"],
            "value_other_first": best["value_other_first"],
        },
    )
    verdict = decide(margin, search.profit_threshold, closed_form)
    logger.info("public experiments at k=%s, mu=%s: %s", params.k, params.mu, verdict)
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=strategy.sender_payoffs(),
        receiver_value=strategy.value,
        margin=margin,
        favorable_margin=favorable,
        best_deviation=certificate,
        closed_form=closed_form,
        deviations_searched=searched,
        details={"observability": "public"},
    )


__all__ = [
    "other_first_response",
    "check_public",
]

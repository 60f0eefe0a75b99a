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
r"""Benchmarks without attention costs.

With $`k = 0`$ the receiver learns every experiment she visits in full, so a
sender is selected exactly when her posterior beats the other's. The
opponents used here are the uniform distribution on $`[0, 2\mu]`$ and, for
$`\mu > 1/2`$, the density $`1/(2\mu)`$ on $`[0, 2(1-\mu)]`$ with an atom at
$`1`$. Against both, the probability of beating the opponent at posterior
$`x`$ is at most $`x / (2\mu)`$, which averages to exactly $`1/2`$.
"""

import logging
import math

from beartype.typing import Optional
import numpy as np

from rijax.beliefs import (
    DiscreteBeliefDistribution,
    atom_benchmark,
    uniform_benchmark,
)
from rijax.equilibrium.report import (
    DeviationCertificate,
    EquilibriumReport,
)
from rijax.typing import ScalarFloat

logger = logging.getLogger(__name__)

PAYOFF_TOL = 1e-9


def _beat_probability(x, spread: float, atom: float, first_prob: float):
    """Probability that posterior `x` beats an opponent uniform on `[0, spread]`
    with an extra atom at one.

    When both posteriors equal one, the sender visited first (with probability
    `first_prob`) is selected.
    """
    x = np.asarray(x, dtype=np.float64)
    continuous = (1.0 - atom) * np.clip(x / spread, 0.0, 1.0)
    return continuous + np.where(x >= 1.0, atom * first_prob, 0.0)


def _binary_grid(mu: float, step: float):
    nodes = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)
    left, right = nodes[nodes < mu], nodes[nodes > mu]
    a, b = (v.ravel() for v in np.meshgrid(left, right, indexing="ij"))
    return a, b, (b - mu) / (b - a)


def kzero_uniform_payoff(dist: DiscreteBeliefDistribution, mu: ScalarFloat) -> float:
    r"""Selection probability of `dist` against the uniform distribution on $`[0, 2\mu]`$."""
    mu = float(mu)
    beats = _beat_probability(dist.points, 2.0 * mu, 0.0, 0.5)
    return float(np.dot(np.asarray(dist.weights), beats))


def _kzero_report(verdict, payoffs, margin, certificate, receiver_value, **details):
    return EquilibriumReport(
        verdict=verdict,
        on_path_sender_payoffs=payoffs,
        receiver_value=receiver_value,
        margin=margin,
        favorable_margin=margin,
        best_deviation=certificate,
        closed_form=verdict == "equilibrium",
        details=details,
    )


def kzero_uniform_check(mu: ScalarFloat, step: float = 0.01) -> EquilibriumReport:
    r"""Both senders offering the uniform distribution on $`[0, 2\mu]`$, $`\mu \le 1/2`$.

    Every binary deviation supported on $`[0, 2\mu]`$ earns exactly $`1/2`$;
    deviations reaching above $`2\mu`$ earn less.

    Args:
        mu (ScalarFloat): the common prior, in $`(0, 1/2]`$.
        step (float): spacing of the deviation lattice.

    Returns:
        EquilibriumReport: the verdict, with the largest payoff discrepancy on
        $`[0, 2\mu]`$ in `details`.
    """
    mu = float(mu)
    if not 0.0 < mu <= 0.5:
        raise ValueError(f"the uniform benchmark needs 0 < mu <= 1/2, got {mu}.")
    a, b, nu = _binary_grid(mu, step)
    beats = _beat_probability(np.stack([a, b]), 2.0 * mu, 0.0, 0.5)
    payoffs = nu * beats[0] + (1.0 - nu) * beats[1]
    inside = b <= 2.0 * mu + PAYOFF_TOL

    on_path = kzero_uniform_payoff(uniform_benchmark(mu), mu)
    gains = payoffs - on_path
    best = int(np.argmax(gains))
    margin = float(gains[best])
    certificate = DeviationCertificate(
        sender=1,
        distribution=DiscreteBeliefDistribution.binary(a[best], b[best], mu),
        gain=margin,
        favorable_gain=margin,
        first_visit_gain=margin,
        second_visit_gain=margin,
    )
    verdict = "equilibrium" if margin <= PAYOFF_TOL else "refuted"
    return _kzero_report(
        verdict,
        (0.5, 0.5),
        margin,
        certificate,
        4.0 * mu / 3.0,
        family="uniform",
        mu=mu,
        deviations=int(a.size),
        max_payoff_error_inside=float(np.max(np.abs(payoffs[inside] - 0.5))),
        max_payoff_outside=float(payoffs[~inside].max()) if (~inside).any() else None,
    )


def kzero_atom_gain_formula(mu: ScalarFloat, lambda_visit: ScalarFloat) -> float:
    r"""Gain of sender 1's deviation to full disclosure against the atom profile."""
    mu, lam = float(mu), float(lambda_visit)
    return (1.0 - mu) ** 2 * (2.0 * mu - 1.0) * (2.0 * lam - 1.0) / (2.0 * mu**2)


def kzero_atom_check(
    mu: ScalarFloat, lambda_visit: ScalarFloat = 0.5, step: float = 0.01
) -> EquilibriumReport:
    r"""Both senders offering the atom profile, $`\mu > 1/2`$.

    Sender 1 is visited first with probability `lambda_visit`. Ties at
    posterior one go to the sender visited first, so the profile survives
    only when both orders are equally likely.

    Args:
        mu (ScalarFloat): the common prior, in $`(1/2, 1)`$.
        lambda_visit (ScalarFloat): probability that sender 1 is visited first.
        step (float): spacing of the binary deviation lattice.

    Returns:
        EquilibriumReport: the verdict, with the computed and closed-form gains
        of the full-disclosure deviation in `details`.
    """
    mu, lam = float(mu), float(lambda_visit)
    if not 0.5 < mu < 1.0:
        raise ValueError(f"the atom benchmark needs 1/2 < mu < 1, got {mu}.")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda_visit must lie in [0, 1], got {lam}.")
    spread, atom = 2.0 * (1.0 - mu), 2.0 - 1.0 / mu
    profile = atom_benchmark(mu)

    def payoff(dist, first_prob):
        beats = _beat_probability(dist.points, spread, atom, first_prob)
        return float(np.dot(np.asarray(dist.weights), beats))

    u1 = payoff(profile, lam)
    on_path = (u1, 1.0 - u1)
    full = DiscreteBeliefDistribution.full_information(mu)
    computed = payoff(full, lam) - u1

    a, b, nu = _binary_grid(mu, step)
    best = None
    for sender, first_prob in ((1, lam), (2, 1.0 - lam)):
        beats = _beat_probability(np.stack([a, b]), spread, atom, first_prob)
        gains = nu * beats[0] + (1.0 - nu) * beats[1] - on_path[sender - 1]
        i = int(np.argmax(gains))
        if best is None or gains[i] > best[0]:
            best = (float(gains[i]), sender, a[i], b[i])
    margin, sender, alpha, beta = best
    certificate = DeviationCertificate(
        sender=sender,
        distribution=DiscreteBeliefDistribution.binary(alpha, beta, mu),
        gain=margin,
        favorable_gain=margin,
        first_visit_gain=margin,
        second_visit_gain=margin,
    )
    verdict = "refuted" if margin > PAYOFF_TOL else "equilibrium"
    logger.info("atom profile at mu=%s, lambda=%s: %s", mu, lam, verdict)
    return _kzero_report(
        verdict,
        on_path,
        margin,
        certificate,
        float("nan"),
        family="atom",
        mu=mu,
        lambda_visit=lam,
        full_disclosure_gain=computed,
        full_disclosure_gain_formula=kzero_atom_gain_formula(mu, lam),
    )


def kzero_fullinfo_lhs(n: int) -> float:
    r"""Left-hand side $`(1 + 2n - \sqrt{1 + 4n}) / (2n)`$ of the profitability condition."""
    return (1.0 + 2.0 * n - math.sqrt(1.0 + 4.0 * n)) / (2.0 * n)


def kzero_fullinfo_refute(
    mu: ScalarFloat, n: Optional[int] = None, lambda_visit: ScalarFloat = 0.5
) -> EquilibriumReport:
    r"""Refute full disclosure by both senders when attention is free.

    The deviating sender puts mass $`\eta = \mu - 1/n`$ on one and the rest on
    $`\epsilon = 1/(n + 1 - \mu n)`$. When visited first, a realisation of
    $`\epsilon`$ is selected whenever the other sender reveals a bad state. When
    visited second, the deviator is reached only after a bad state and is then
    selected on any realisation, which matches its on-path payoff $`1 - \mu`$;
    both visit orders enter the certificate. The deviation is profitable
    exactly when the left-hand side exceeds $`\mu`$.

    Args:
        mu (ScalarFloat): the common prior, in $`(0, 1)`$.
        n (Optional[int]): family index, above $`1/\mu`$. When omitted, the
            smallest profitable index is searched for.
        lambda_visit (ScalarFloat): probability that sender 1 is visited first.

    Returns:
        EquilibriumReport: `refuted` when the deviation is profitable,
        `inconclusive` otherwise.
    """
    mu, lam = float(mu), float(lambda_visit)
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu}.")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda_visit must lie in [0, 1], got {lam}.")
    if n is None:
        n = max(math.floor(1.0 / mu) + 1, math.floor(mu / (1.0 - mu) ** 2) + 1)
        while kzero_fullinfo_lhs(n) <= mu:
            n += 1
    elif not n > 1.0 / mu:
        raise ValueError(f"n must exceed 1/mu = {1.0 / mu}, got {n}.")

    eta = mu - 1.0 / n
    epsilon = 1.0 / (n + 1.0 - mu * n)
    lhs = kzero_fullinfo_lhs(n)
    # the deviator is the sender visited first more often
    sender = 2 if lam <= 0.5 else 1
    first_prob = 1.0 - lam if sender == 2 else lam
    first_gain = first_prob * (eta + (1.0 - eta) * (1.0 - mu) - mu)
    second_gain = (1.0 - first_prob) * ((1.0 - mu) * (eta + (1.0 - eta)) - (1.0 - mu))
    gain = first_gain + second_gain
    deviation = DiscreteBeliefDistribution(
        points=np.array([epsilon, 1.0]), weights=np.array([1.0 - eta, eta])
    )
    certificate = DeviationCertificate(
        sender=sender,
        distribution=deviation,
        gain=gain,
        favorable_gain=gain,
        first_visit_gain=first_gain,
        second_visit_gain=second_gain,
        response={"n": n, "eta": eta, "epsilon": epsilon},
    )
    u1 = lam * mu + (1.0 - lam) * (1.0 - mu)
    return EquilibriumReport(
        verdict="refuted" if lhs > mu else "inconclusive",
        on_path_sender_payoffs=(u1, 1.0 - u1),
        receiver_value=1.0 - (1.0 - mu) ** 2,
        margin=gain,
        favorable_margin=gain,
        best_deviation=certificate,
        closed_form=False,
        details={"family": "fullinfo", "mu": mu, "n": n, "lhs": lhs},
    )


def kzero_uninformative_check(mu: ScalarFloat) -> EquilibriumReport:
    """Neither sender discloses; the receiver never visits, so no deviation is seen."""
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu}.")
    return _kzero_report(
        "equilibrium", (0.5, 0.5), 0.0, None, mu, family="none", mu=mu
    )


__all__ = [
    "kzero_uniform_payoff",
    "kzero_uniform_check",
    "kzero_atom_gain_formula",
    "kzero_atom_check",
    "kzero_fullinfo_lhs",
    "kzero_fullinfo_refute",
    "kzero_uninformative_check",
]

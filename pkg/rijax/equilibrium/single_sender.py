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
r"""The single-sender benchmark.

One sender offers an experiment about her quality; the receiver garbles it at
cost $`k\,\mathbb{E}[(y - \mu)^2]`$ and accepts when her posterior reaches the
threshold $`\lambda`$. Her payoff from posterior $`y`$ is
$`\max\{y, \lambda\} - k(y - \mu)^2`$, the stage-2 payoff with the first
posterior replaced by the threshold, so the receiver's problem is solved by the
stage-2 kernel.
"""

from dataclasses import dataclass
import logging

from beartype.typing import (
    Any,
    Dict,
    Optional,
    Tuple,
)
import jax.numpy as jnp
import jax.random as jr
import numpy as np

from rijax.base import (
    Module,
    check_open_unit,
    check_positive,
)
from rijax.beliefs import (
    DiscreteBeliefDistribution,
    is_garbling,
)
from rijax.concavify import (
    Chord,
    Degenerate,
    GarblingSolution,
)
from rijax.maximizer import (
    AbstractMaximizer,
    GridThenLBFGSBMaximizer,
)
from rijax.receiver import (
    responder_for,
    stage2_choice,
)
from rijax.search_space import BoxSearchSpace
from rijax.typing import (
    Array,
    Float,
    KeyArray,
)

logger = logging.getLogger(__name__)

ACCEPT_TOL = 1e-12


@dataclass
class SingleSenderParams(Module):
    r"""Parameters of the single-sender benchmark.

    Attributes
    ----------
        lambda_threshold (float): acceptance threshold $`\lambda \in (0, 1)`$.
        k (float): attention cost coefficient, zero for free attention.
        mu (float): prior of the sender's quality.
    """

    lambda_threshold: float = 0.6
    k: float = 1.0
    mu: float = 0.5

    def __post_init__(self) -> None:
        check_open_unit("lambda_threshold", self.lambda_threshold)
        check_positive("k", self.k, allow_zero=True)
        check_open_unit("mu", self.mu)


@dataclass(frozen=True)
class SingleSenderSolution:
    """Sender-optimal experiment and the receiver's response to it."""

    sender: DiscreteBeliefDistribution
    receiver: GarblingSolution
    acceptance: float
    full_info_response: Optional[GarblingSolution] = None
    strict_garbling_of_full_info_response: Optional[bool] = None
    offers_full_information: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sender": self.sender.to_dict(),
            "receiver": self.receiver.to_dict(),
            "acceptance": self.acceptance,
            "full_info_response": None
            if self.full_info_response is None
            else self.full_info_response.to_dict(),
            "strict_garbling_of_full_info_response": self.strict_garbling_of_full_info_response,
            "offers_full_information": self.offers_full_information,
        }


def acceptance_probability(
    garbling: DiscreteBeliefDistribution, lambda_threshold: float
) -> float:
    """Probability that the receiver's posterior reaches the threshold."""
    accepted = np.asarray(garbling.points) >= lambda_threshold - ACCEPT_TOL
    return float(np.dot(np.asarray(garbling.weights), accepted))


def single_sender_response(
    sender: DiscreteBeliefDistribution, ssp: SingleSenderParams
) -> Tuple[GarblingSolution, float]:
    """The receiver's optimal garbling of `sender` and the acceptance probability.

    Args:
        sender (DiscreteBeliefDistribution): the offered experiment, with mean `ssp.mu`.
        ssp (SingleSenderParams): benchmark parameters.

    Returns:
        Tuple[GarblingSolution, float]: the garbling and the acceptance probability.
    """
    lam = ssp.lambda_threshold
    if abs(sender.mean() - ssp.mu) > 1e-9:
        raise ValueError(f"the sender's experiment has mean {sender.mean()}, not {ssp.mu}.")
    if ssp.k == 0.0:
        points = np.asarray(sender.points)
        value = float(np.dot(np.asarray(sender.weights), np.maximum(points, lam)))
        garbling = GarblingSolution(distribution=sender, value=value)
    else:
        garbling = responder_for(sender, ssp.k).garbling_at(lam)
    return garbling, acceptance_probability(garbling.distribution, lam)


def _acceptance_objective(ssp: SingleSenderParams):
    lam, mu, k = ssp.lambda_threshold, ssp.mu, ssp.k

    def objective(points: Float[Array, "N 2"]) -> Float[Array, " N"]:
        choice = stage2_choice(lam, mu, k, points[:, 0], points[:, 1])
        learned = choice.nu * (choice.y1 >= lam - ACCEPT_TOL) + (1.0 - choice.nu) * (
            choice.y2 >= lam - ACCEPT_TOL
        )
        return jnp.where(choice.learn, learned, jnp.where(mu >= lam, 1.0, 0.0))

    return objective


def _same(p: DiscreteBeliefDistribution, q: DiscreteBeliefDistribution) -> bool:
    return p.n_points == q.n_points and bool(
        np.allclose(p.points, q.points, atol=1e-9) and np.allclose(p.weights, q.weights, atol=1e-9)
    )


def single_sender_solve(
    ssp: SingleSenderParams,
    step: float = 0.01,
    maximizer: Optional[AbstractMaximizer] = None,
    key: Optional[KeyArray] = None,
) -> SingleSenderSolution:
    r"""Sender-optimal experiment in the single-sender benchmark.

    Below the threshold's prior the sender discloses nothing and is accepted for
    sure. With free attention the optimum is $`\{0, \lambda\}`$. Otherwise binary
    experiments $`\{a, b\}`$ with $`a \le \mu`$ and $`b \ge \lambda`$ are
    searched, the receiver garbling each one optimally.

    Args:
        ssp (SingleSenderParams): benchmark parameters.
        step (float): lattice spacing of the search over `(a, b)`.
        maximizer (Optional[AbstractMaximizer]): the optimiser; defaults to a
            lattice search polished with L-BFGS-B.
        key (Optional[KeyArray]): PRNG key for randomised maximisers.

    Returns:
        SingleSenderSolution: the sender's experiment, the receiver's response,
        the acceptance probability and, for positive costs, how the response
        compares to the receiver's response to full information.
    """
    lam, mu, k = ssp.lambda_threshold, ssp.mu, ssp.k
    if lam <= mu:
        sender = DiscreteBeliefDistribution.degenerate(mu)
        receiver = GarblingSolution(distribution=sender, value=mu)
        return SingleSenderSolution(sender=sender, receiver=receiver, acceptance=1.0)
    if k == 0.0:
        sender = DiscreteBeliefDistribution.binary(0.0, lam, mu)
        receiver, acceptance = single_sender_response(sender, ssp)
        return SingleSenderSolution(
            sender=sender, receiver=receiver, acceptance=acceptance
        )

    maximizer = GridThenLBFGSBMaximizer(step=step) if maximizer is None else maximizer
    key = jr.PRNGKey(0) if key is None else key
    space = BoxSearchSpace(
        lower_bounds=jnp.array([0.0, lam]), upper_bounds=jnp.array([mu, 1.0])
    )
    a, b = (float(v) for v in maximizer.maximize(_acceptance_objective(ssp), space, key)[0])
    sender = DiscreteBeliefDistribution.binary(min(a, mu), max(b, lam), mu)
    receiver, acceptance = single_sender_response(sender, ssp)

    full = stage2_choice(lam, mu, k, 0.0, 1.0)
    if bool(full.learn):
        full_chord = Chord(float(full.y1), float(full.y2), float(full.nu))
    else:
        full_chord = Degenerate(mu)
    full_response = GarblingSolution.from_chord(full_chord, full.value)
    strict = bool(is_garbling(receiver.distribution, full_response.distribution)) and not _same(
        receiver.distribution, full_response.distribution
    )
    logger.info("single sender: {%.4f, %.4f}, acceptance %.4f", a, b, acceptance)
    return SingleSenderSolution(
        sender=sender,
        receiver=receiver,
        acceptance=acceptance,
        full_info_response=full_response,
        strict_garbling_of_full_info_response=strict,
        offers_full_information=sender.support_bounds == (0.0, 1.0) and sender.is_binary,
    )


__all__ = [
    "SingleSenderParams",
    "SingleSenderSolution",
    "acceptance_probability",
    "single_sender_response",
    "single_sender_solve",
]

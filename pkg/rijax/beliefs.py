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
r"""Distributions of posterior beliefs and the quadratic attention cost.

A sender's experiment and a receiver's garbling of it are both represented by a
finitely supported distribution of posterior beliefs on $`[0, 1]`$. Garbling is
tested through integrated CDFs: $`q`$ is a mean-preserving contraction of $`p`$
iff both share a mean and $`J_q(t) \le J_p(t)`$ for every $`t`$, where
$`J_d(t) = \sum_i w_i (t - x_i)^+`$.
"""

from dataclasses import dataclass
from pathlib import Path
import warnings

from beartype.typing import (
    Dict,
    Literal,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)
import jax.numpy as jnp
from jaxtyping import Float
import numpy as np
from simple_pytree import Pytree

from rijax.base import (
    Module,
    static_field,
)
from rijax.typing import (
    Array,
    ScalarFloat,
)

MASS_TOL = 1e-9
NORMALIZATION_TOL = 1e-12
MAJORIZATION_TOL = 1e-7
POINT_TOL = 1e-12


@dataclass
class DiscreteBeliefDistribution(Pytree):
    r"""Finitely supported distribution of posterior beliefs.

    On construction, zero weights are stripped, duplicated points are merged and
    the support is sorted, so `points` is strictly increasing.

    Attributes
    ----------
        points (Float[Array, " N"]): posterior beliefs, each in $`[0, 1]`$.
        weights (Float[Array, " N"]): probabilities of the points.
    """

    points: Float[Array, " N"]
    weights: Float[Array, " N"]

    def __post_init__(self) -> None:
        _check_precision(self.points, self.weights)
        points = np.asarray(self.points, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)

        if points.shape != weights.shape:
            raise ValueError(
                "points and weights must have the same length, got"
                f" {points.shape[0]} and {weights.shape[0]}."
            )
        if points.size == 0:
            raise ValueError("A belief distribution needs at least one point.")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise ValueError("points and weights must be finite.")
        if np.any(weights < 0.0):
            raise ValueError(f"weights must be nonnegative, got {weights.min()}.")
        if np.any(points < -POINT_TOL) or np.any(points > 1.0 + POINT_TOL):
            raise ValueError(
                f"points must lie in [0, 1], got range [{points.min()}, {points.max()}]."
            )
        points = np.clip(points, 0.0, 1.0)
        total = weights.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"weights must sum to 1, got {total}.")
        if abs(total - 1.0) > NORMALIZATION_TOL:
            warnings.warn(
                f"weights sum to {total!r}; renormalising to unit mass.",
                UserWarning,
                stacklevel=2,
            )

        keep = weights > 0.0
        points, weights = points[keep], weights[keep] / total
        support, inverse = np.unique(points, return_inverse=True)
        merged = np.zeros_like(support)
        np.add.at(merged, inverse, weights)

        self.points = jnp.asarray(support)
        self.weights = jnp.asarray(merged)

    @classmethod
    def degenerate(cls, mu: ScalarFloat) -> "DiscreteBeliefDistribution":
        r"""The uninformative experiment $`\delta_\mu`$."""
        return cls(points=np.array([float(mu)]), weights=np.array([1.0]))

    @classmethod
    def binary(
        cls, l: ScalarFloat, h: ScalarFloat, mean: ScalarFloat
    ) -> "DiscreteBeliefDistribution":
        r"""The Bayes-plausible distribution on $`\{l, h\}`$ with the given mean."""
        l, h, mean = float(l), float(h), float(mean)
        if not l <= mean <= h:
            raise ValueError(f"mean {mean} must lie in [l, h] = [{l}, {h}].")
        if h - l <= 0.0:
            return cls.degenerate(mean)
        nu = (h - mean) / (h - l)
        return cls(points=np.array([l, h]), weights=np.array([nu, 1.0 - nu]))

    @classmethod
    def full_information(cls, mu: ScalarFloat) -> "DiscreteBeliefDistribution":
        r"""Full disclosure of a binary state with prior $`\mu`$."""
        return cls.binary(0.0, 1.0, mu)

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[float, float]
    ) -> "DiscreteBeliefDistribution":
        """Build a distribution from a `{point: weight}` mapping."""
        items = sorted((float(x), float(w)) for x, w in mapping.items())
        return cls(
            points=np.array([x for x, _ in items], dtype=np.float64),
            weights=np.array([w for _, w in items], dtype=np.float64),
        )

    @property
    def n_points(self) -> int:
        return int(self.points.shape[0])

    @property
    def is_degenerate(self) -> bool:
        return self.n_points == 1

    @property
    def is_binary(self) -> bool:
        return self.n_points == 2

    @property
    def support_bounds(self) -> Tuple[float, float]:
        """Smallest and largest support point."""
        return float(self.points[0]), float(self.points[-1])

    def mean(self) -> float:
        return mean(self)

    def to_dict(self) -> Dict[str, list]:
        return {
            "points": [float(x) for x in self.points],
            "weights": [float(w) for w in self.weights],
        }

    def __repr__(self) -> str:
        body = ", ".join(
            f"{float(x):.6g}: {float(w):.6g}" for x, w in zip(self.points, self.weights)
        )
        return f"DiscreteBeliefDistribution({{{body}}})"


def mean(d: DiscreteBeliefDistribution) -> float:
    r"""The mean $`\sum_i x_i w_i`$ of a belief distribution."""
    return float(jnp.dot(d.points, d.weights))


def variance(d: DiscreteBeliefDistribution, about: Optional[ScalarFloat] = None) -> float:
    r"""Second moment of $`d`$ about a point, defaulting to its own mean."""
    centre = mean(d) if about is None else about
    return float(jnp.dot(d.weights, (d.points - centre) ** 2))


def integrated_cdf(
    d: DiscreteBeliefDistribution, t: Union[ScalarFloat, Float[Array, " M"]]
) -> Float[Array, "..."]:
    r"""Evaluate $`J_d(t) = \int_0^t F_d(s)\,ds = \sum_i w_i (t - x_i)^+`$.

    Args:
        d (DiscreteBeliefDistribution): the distribution.
        t (Union[ScalarFloat, Float[Array, " M"]]): evaluation point(s).

    Returns:
        Float[Array, "..."]: $`J_d`$ at `t`, with the shape of `t`.
    """
    t = jnp.asarray(t, dtype=jnp.float64)
    gaps = jnp.maximum(t[..., None] - d.points, 0.0)
    return gaps @ d.weights


def is_garbling(
    q: DiscreteBeliefDistribution,
    p: DiscreteBeliefDistribution,
    tol: float = MASS_TOL,
    majorization_tol: float = MAJORIZATION_TOL,
) -> bool:
    r"""Test whether $`q`$ is a mean-preserving contraction of $`p`$.

    Both integrated CDFs are piecewise linear with kinks at the support points,
    so comparing them on the union of the two supports (plus $`0`$ and $`1`$)
    is exact.

    Args:
        q (DiscreteBeliefDistribution): candidate garbling.
        p (DiscreteBeliefDistribution): the experiment being garbled.
        tol (float): tolerance on the difference of means.
        majorization_tol (float): tolerance on $`J_q - J_p`$, scaled by the
            width of the support of $`p`$.

    Returns:
        bool: `True` if $`q`$ is a garbling of $`p`$.
    """
    if abs(mean(q) - mean(p)) > tol:
        return False
    lo, hi = p.support_bounds
    slack = majorization_tol * max(hi - lo, tol)
    kinks = jnp.concatenate([q.points, p.points, jnp.array([0.0, 1.0])])
    gap = integrated_cdf(q, kinks) - integrated_cdf(p, kinks)
    return bool(jnp.all(gap <= slack))


def informativeness_rank(d: DiscreteBeliefDistribution) -> float:
    r"""Variance of $`d`$ relative to full information, in $`[0, 1]`$.

    The rank is $`1`$ for full information, $`0`$ for $`\delta_\mu`$ and is
    monotone along the Blackwell order.
    """
    m = mean(d)
    if m <= 0.0 or m >= 1.0:
        return 0.0
    return min(variance(d, m) / (m * (1.0 - m)), 1.0)


@dataclass
class CostModel(Module):
    r"""Attention cost coefficient.

    In `"constant"` mode every garbling costs $`k\,\mathbb{E}[(x-\mu)^2]`$. In
    `"experiment"` mode the coefficient depends on the experiment being
    garbled: `schedule` holds `(rank_threshold, coefficient)` steps on the
    informativeness rank, and the coefficient never falls below the floor
    `k`, which is the coefficient at full information.
    """

    mode: Literal["constant", "experiment"] = static_field("constant")
    k: float = 1.0
    schedule: Tuple[Tuple[float, float], ...] = static_field(())

    def __post_init__(self) -> None:
        if self.mode not in ("constant", "experiment"):
            raise ValueError(
                f"mode must be 'constant' or 'experiment', got {self.mode!r}."
            )
        if self.mode == "constant" and not self.k > 0.0:
            raise ValueError(f"k must be positive in constant mode, got {self.k}.")
        if self.k < 0.0:
            raise ValueError(f"The coefficient floor must be nonnegative, got {self.k}.")

        thresholds = [float(t) for t, _ in self.schedule]
        coefficients = [float(c) for _, c in self.schedule]
        if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError(
                f"schedule thresholds must be strictly increasing, got {thresholds}."
            )
        if thresholds and not (0.0 <= thresholds[0] and thresholds[-1] < 1.0):
            raise ValueError(f"schedule thresholds must lie in [0, 1), got {thresholds}.")
        if any(b > a for a, b in zip(coefficients, coefficients[1:])):
            raise ValueError(
                f"schedule coefficients must be weakly decreasing, got {coefficients}."
            )
        if any(c < self.k for c in coefficients):
            raise ValueError(
                f"schedule coefficients must be at least the floor {self.k}, got {coefficients}."
            )

    @property
    def floor(self) -> float:
        return float(self.k)

    def coefficient_from_rank(self, rank: ScalarFloat) -> float:
        """Coefficient charged for an experiment of the given informativeness rank."""
        rank = float(rank)
        if self.mode == "constant" or not self.schedule or rank >= 1.0 - MASS_TOL:
            return float(self.k)
        applicable = [c for t, c in self.schedule if t <= rank]
        coefficient = applicable[-1] if applicable else self.schedule[0][1]
        return max(float(coefficient), float(self.k))

    def coefficient(self, p: Optional[DiscreteBeliefDistribution] = None) -> float:
        """Coefficient charged for garbling the experiment `p`."""
        if self.mode == "constant":
            return float(self.k)
        if p is None:
            raise ValueError("experiment-dependent costs need the garbled experiment p.")
        return self.coefficient_from_rank(informativeness_rank(p))

    def coefficients_for_binary(
        self,
        alphas: Float[Array, " D"],
        betas: Float[Array, " D"],
        mu: ScalarFloat,
    ) -> Float[Array, " D"]:
        r"""Coefficients for a batch of binary experiments $`\{\alpha, \beta\}`$ with mean $`\mu`$."""
        alphas = np.asarray(alphas, dtype=np.float64)
        betas = np.asarray(betas, dtype=np.float64)
        if self.mode == "constant" or not self.schedule:
            return np.full(alphas.shape, float(self.k))
        mu = float(mu)
        ranks = (betas - mu) * (mu - alphas) / (mu * (1.0 - mu))
        return np.array([self.coefficient_from_rank(r) for r in ranks])


def attention_cost(
    q: DiscreteBeliefDistribution,
    prior: ScalarFloat,
    cm: CostModel,
    p: Optional[DiscreteBeliefDistribution] = None,
) -> float:
    r"""Posterior-separable cost $`c \sum_i w_i (x_i - \mu)^2`$ of a garbling.

    Args:
        q (DiscreteBeliefDistribution): the receiver's garbling.
        prior (ScalarFloat): the prior $`\mu`$.
        cm (CostModel): cost model supplying the coefficient $`c`$.
        p (Optional[DiscreteBeliefDistribution]): the garbled experiment, needed
            in experiment-dependent mode.

    Returns:
        float: the attention cost.
    """
    return cm.coefficient(p) * variance(q, prior)


def _midpoints(lo: float, hi: float, n_points: int) -> np.ndarray:
    return lo + (hi - lo) * (np.arange(n_points) + 0.5) / n_points


def uniform_benchmark(mu: ScalarFloat, n_points: int = 1000) -> DiscreteBeliefDistribution:
    r"""Quantile discretisation of the uniform distribution on $`[0, 2\mu]`$."""
    mu = float(mu)
    if not 0.0 < mu <= 0.5:
        raise ValueError(f"uniform_benchmark needs 0 < mu <= 1/2, got {mu}.")
    if n_points < 1:
        raise ValueError(f"n_points must be greater than 0, got {n_points}.")
    return DiscreteBeliefDistribution(
        points=_midpoints(0.0, 2.0 * mu, n_points),
        weights=np.full(n_points, 1.0 / n_points),
    )


def atom_benchmark(mu: ScalarFloat, n_points: int = 1000) -> DiscreteBeliefDistribution:
    r"""Density $`1/(2\mu)`$ on $`[0, 2(1-\mu)]`$ plus an atom of mass $`2 - 1/\mu`$ at $`1`$.

    The continuous part is discretised at quantile midpoints; the atom is kept
    exact.
    """
    mu = float(mu)
    if not 0.5 < mu < 1.0:
        raise ValueError(f"atom_benchmark needs 1/2 < mu < 1, got {mu}.")
    if n_points < 1:
        raise ValueError(f"n_points must be greater than 0, got {n_points}.")
    atom = 2.0 - 1.0 / mu
    points = np.append(_midpoints(0.0, 2.0 * (1.0 - mu), n_points), 1.0)
    weights = np.append(np.full(n_points, (1.0 - atom) / n_points), atom)
    return DiscreteBeliefDistribution(points=points, weights=weights)


def to_text(d: DiscreteBeliefDistribution) -> str:
    """Serialise to the `# mean=<value>` header plus `point,weight` lines."""
    lines = [f"# mean={mean(d)!r}"]
    lines += [f"{float(x)!r},{float(w)!r}" for x, w in zip(d.points, d.weights)]
    return "\n".join(lines) + "\n"


def from_text(text: str, tol: float = MASS_TOL) -> DiscreteBeliefDistribution:
    """Parse the plain-text record written by `to_text`.

    A `# mean=` header, when present, must agree with the parsed distribution.
    """
    declared = None
    points, weights = [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("mean="):
                declared = float(body[len("mean=") :])
            continue
        try:
            x, w = (float(v) for v in line.split(","))
        except ValueError as err:
            raise ValueError(f"line {number}: expected 'point,weight', got {raw!r}.") from err
        points.append(x)
        weights.append(w)

    if not points:
        raise ValueError("no 'point,weight' records found.")
    d = DiscreteBeliefDistribution(
        points=np.array(points, dtype=np.float64),
        weights=np.array(weights, dtype=np.float64),
    )
    if declared is not None and abs(mean(d) - declared) > tol:
        raise ValueError(f"declared mean {declared} differs from computed mean {mean(d)}.")
    return d


def load_distribution(path: Union[str, Path]) -> DiscreteBeliefDistribution:
    return from_text(Path(path).read_text())


def _check_precision(
    points: Union[Sequence[float], Float[Array, " N"]],
    weights: Union[Sequence[float], Float[Array, " N"]],
) -> None:
    for name, value in (("points", points), ("weights", weights)):
        if getattr(value, "dtype", np.float64) != np.float64:
            warnings.warn(
                f"{name} is not of type float64 (got {value.dtype}); beliefs are"
                " compared with tolerances that assume double precision.",
                UserWarning,
                stacklevel=2,
            )


__all__ = [
    "DiscreteBeliefDistribution",
    "CostModel",
    "mean",
    "variance",
    "integrated_cdf",
    "is_garbling",
    "informativeness_rank",
    "attention_cost",
    "uniform_benchmark",
    "atom_benchmark",
    "to_text",
    "from_text",
    "load_distribution",
]

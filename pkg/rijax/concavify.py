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
r"""Upper concave envelopes of sampled functions and their chords at a prior.

The envelope of a function sampled on a sorted grid is the upper convex hull of
the sample points, computed by a single monotone scan. The optimal garbling at
a prior is read off the hull segment that contains it.
"""

from dataclasses import dataclass

from beartype.typing import (
    Callable,
    Dict,
    NamedTuple,
    Sequence,
    Tuple,
    Union,
)
import jax
import jax.numpy as jnp
from jaxtyping import (
    Bool,
    Float,
    Int,
)
import numpy as np
from simple_pytree import Pytree

from rijax.beliefs import DiscreteBeliefDistribution
from rijax.typing import (
    Array,
    ScalarFloat,
)

HULL_TOL = 1e-12
PRIOR_TOL = 1e-12


@dataclass
class SampledFunction(Pytree):
    r"""A real function sampled on a strictly increasing grid in $`[0, 1]`$.

    Attributes
    ----------
        grid (Float[Array, " N"]): sample points; the first and last points are
            the interval endpoints $`a`$ and $`b`$.
        values (Float[Array, " N"]): function values at the grid points.
    """

    grid: Float[Array, " N"]
    values: Float[Array, " N"]

    def __post_init__(self) -> None:
        grid = jnp.asarray(self.grid, dtype=jnp.float64)
        values = jnp.asarray(self.values, dtype=jnp.float64)
        if grid.shape[0] < 2:
            raise ValueError(f"A sampled function needs at least 2 grid points, got {grid.shape[0]}.")
        if grid.shape != values.shape:
            raise ValueError(
                f"grid and values must have the same length, got {grid.shape[0]} and {values.shape[0]}."
            )
        if not bool(jnp.all(jnp.diff(grid) > 0.0)):
            raise ValueError("grid must be strictly increasing.")
        if bool(grid[0] < 0.0) or bool(grid[-1] > 1.0):
            raise ValueError(
                f"grid must lie in [0, 1], got [{float(grid[0])}, {float(grid[-1])}]."
            )
        if not bool(jnp.all(jnp.isfinite(values))):
            raise ValueError("values must be finite.")
        self.grid = grid
        self.values = values

    @property
    def interval(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @classmethod
    def from_callable(
        cls,
        fn: Callable[[Float[Array, " N"]], Float[Array, " N"]],
        a: ScalarFloat,
        b: ScalarFloat,
        n: int = 2001,
        breakpoints: Union[Sequence[float], Float[Array, " B"]] = (),
    ) -> "SampledFunction":
        """Sample `fn` on `n` uniform points of `[a, b]` with `breakpoints` merged in."""
        grid, mask = breakpoint_grid(a, b, n, jnp.asarray(breakpoints, dtype=jnp.float64))
        grid = grid[np.asarray(mask)]
        return cls(grid=grid, values=fn(grid))


@dataclass(frozen=True)
class Degenerate:
    """No learning: the prior is a vertex of the envelope."""

    prior: float


@dataclass(frozen=True)
class Chord:
    r"""Supporting segment $`\{y_1, y_2\}`$ with weight $`\nu`$ on $`y_1`$."""

    y1: float
    y2: float
    nu: float

    @property
    def prior(self) -> float:
        return self.nu * self.y1 + (1.0 - self.nu) * self.y2


@dataclass
class GarblingSolution(Pytree):
    """An optimal garbling together with the value it attains."""

    distribution: DiscreteBeliefDistribution
    value: float

    @property
    def kind(self) -> str:
        n = self.distribution.n_points
        return "degenerate" if n == 1 else "binary" if n == 2 else "multi-point"

    @property
    def learns(self) -> bool:
        return not self.distribution.is_degenerate

    @classmethod
    def from_chord(
        cls, chord: Union[Chord, Degenerate], value: ScalarFloat
    ) -> "GarblingSolution":
        if isinstance(chord, Degenerate):
            distribution = DiscreteBeliefDistribution.degenerate(chord.prior)
        else:
            distribution = DiscreteBeliefDistribution(
                points=np.array([chord.y1, chord.y2]),
                weights=np.array([chord.nu, 1.0 - chord.nu]),
            )
        return cls(distribution=distribution, value=float(value))

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, **self.distribution.to_dict(), "value": self.value}


@dataclass
class EnvelopeSolution(Pytree):
    r"""Least concave majorant of a sampled function.

    Attributes
    ----------
        grid (Float[Array, " N"]): sample points.
        values (Float[Array, " N"]): function values.
        vertices (Bool[Array, " N"]): which sample points are hull vertices.
    """

    grid: Float[Array, " N"]
    values: Float[Array, " N"]
    vertices: Bool[Array, " N"]

    @property
    def envelope(self) -> Float[Array, " N"]:
        """The envelope evaluated on the grid."""
        return self.value_at(self.grid)

    def value_at(
        self, x: Union[ScalarFloat, Float[Array, " M"]]
    ) -> Float[Array, "..."]:
        """Evaluate the envelope by interpolating between hull vertices."""
        keep = np.asarray(self.vertices)
        return jnp.interp(jnp.asarray(x, dtype=jnp.float64), self.grid[keep], self.values[keep])

    def chord_at(self, prior: ScalarFloat) -> Union[Chord, Degenerate]:
        """The hull segment containing `prior`, or `Degenerate` at a vertex."""
        prior = float(prior)
        a, b = float(self.grid[0]), float(self.grid[-1])
        if not a - PRIOR_TOL <= prior <= b + PRIOR_TOL:
            raise ValueError(f"prior {prior} lies outside the interval [{a}, {b}].")
        y1, y2, nu, _, learns = _envelope_chord(self.grid, self.values, self.vertices, prior)
        if not bool(learns):
            return Degenerate(prior)
        return Chord(float(y1), float(y2), float(nu))


def breakpoint_grid(
    a: ScalarFloat,
    b: ScalarFloat,
    n: int,
    breakpoints: Float[Array, " B"],
) -> Tuple[Float[Array, " M"], Bool[Array, " M"]]:
    r"""Uniform grid on $`[a, b]`$ with extra breakpoints merged in.

    Breakpoints outside $`[a, b]`$ are clipped onto the endpoints. The result
    keeps a fixed length `n + len(breakpoints)`; repeated nodes are flagged by
    a `False` entry in the mask.

    Args:
        a (ScalarFloat): left endpoint.
        b (ScalarFloat): right endpoint.
        n (int): number of uniform points.
        breakpoints (Float[Array, " B"]): kinks to sample exactly.

    Returns:
        Tuple[Float[Array, " M"], Bool[Array, " M"]]: sorted grid and the mask
        of first occurrences.
    """
    uniform = jnp.linspace(a, b, n)
    extra = jnp.clip(breakpoints, a, b)
    grid = jnp.sort(jnp.concatenate([uniform, extra]))
    mask = jnp.concatenate([jnp.array([True]), grid[1:] > grid[:-1]])
    return grid, mask


@jax.jit
def _upper_hull(
    grid: Float[Array, " N"],
    values: Float[Array, " N"],
    mask: Bool[Array, " N"],
    tol: ScalarFloat = HULL_TOL,
) -> Bool[Array, " N"]:
    """Vertices of the upper hull of the masked points.

    Points lying on or below the segment joining their neighbours (within `tol`)
    are dropped, so a flat run keeps only its extremes.
    """
    n = grid.shape[0]

    def _height(a, b, c):
        span = grid[c] - grid[a]
        t = (grid[b] - grid[a]) / jnp.where(span > 0.0, span, 1.0)
        return values[b] - (values[a] + t * (values[c] - values[a]))

    def _push(i, carry):
        def _should_pop(state):
            stack, top = state
            a = stack[jnp.maximum(top - 2, 0)]
            b = stack[jnp.maximum(top - 1, 0)]
            return mask[i] & (top >= 2) & (_height(a, b, i) <= tol)

        stack, top = jax.lax.while_loop(
            _should_pop, lambda state: (state[0], state[1] - 1), carry
        )
        stack = jnp.where(mask[i], stack.at[top].set(i), stack)
        top = jnp.where(mask[i], top + 1, top)
        return stack, top

    init = (jnp.zeros(n, dtype=jnp.int32), jnp.array(0, dtype=jnp.int32))
    stack, top = jax.lax.fori_loop(0, n, _push, init)
    index = jnp.where(jnp.arange(n) < top, stack, n)
    return jnp.zeros(n, dtype=bool).at[index].set(True, mode="drop")


_batched_upper_hull = jax.jit(jax.vmap(_upper_hull, in_axes=(0, 0, 0, None)))


@jax.jit
def _envelope_chord(
    grid: Float[Array, " N"],
    values: Float[Array, " N"],
    vertices: Bool[Array, " N"],
    prior: ScalarFloat,
):
    il, ir = _chord_indices(grid, vertices, prior)
    y1, y2 = grid[il], grid[ir]
    span = y2 - y1
    learns = span > PRIOR_TOL
    nu = jnp.clip((y2 - prior) / jnp.where(learns, span, 1.0), 0.0, 1.0)
    nu = jnp.where(learns, nu, 1.0)
    value = nu * values[il] + (1.0 - nu) * values[ir]
    return y1, y2, nu, value, learns


def _chord_indices(grid, vertices, prior):
    left = vertices & (grid <= prior + PRIOR_TOL)
    right = vertices & (grid >= prior - PRIOR_TOL)
    il = jnp.argmax(jnp.where(left, grid, -jnp.inf))
    ir = jnp.argmin(jnp.where(right, grid, jnp.inf))
    return il, ir


@jax.jit
def _chord_average(
    grid: Float[Array, " N"],
    vertices: Bool[Array, " N"],
    attached: Float[Array, " N"],
    prior: ScalarFloat,
) -> Float[Array, ""]:
    """Average of `attached` under the envelope's supporting chord at `prior`."""
    il, ir = _chord_indices(grid, vertices, prior)
    span = grid[ir] - grid[il]
    learns = span > PRIOR_TOL
    nu = jnp.clip((grid[ir] - prior) / jnp.where(learns, span, 1.0), 0.0, 1.0)
    nu = jnp.where(learns, nu, 1.0)
    return nu * attached[il] + (1.0 - nu) * attached[ir]


def concave_envelope(f: SampledFunction, tol: float = HULL_TOL) -> EnvelopeSolution:
    """Least concave majorant of `f`, restricted to its grid.

    Args:
        f (SampledFunction): the sampled function.
        tol (float): points within `tol` of a hull segment are not vertices.

    Returns:
        EnvelopeSolution: the envelope.
    """
    mask = jnp.ones(f.grid.shape, dtype=bool)
    vertices = _upper_hull(f.grid, f.values, mask, tol)
    return EnvelopeSolution(grid=f.grid, values=f.values, vertices=vertices)


def optimal_garbling(f: SampledFunction, prior: ScalarFloat) -> GarblingSolution:
    r"""Optimal Bayes-plausible garbling at `prior` for the payoff `f`.

    A degenerate chord yields $`\delta_\text{prior}`$ with value
    $`f(\text{prior})`$.
    """
    envelope = concave_envelope(f)
    chord = envelope.chord_at(prior)
    if isinstance(chord, Degenerate):
        return GarblingSolution.from_chord(chord, envelope.value_at(prior))
    value = chord.nu * float(envelope.value_at(chord.y1)) + (1.0 - chord.nu) * float(
        envelope.value_at(chord.y2)
    )
    return GarblingSolution.from_chord(chord, value)


class TableEntry(NamedTuple):
    """Result of a restricted-chord lookup, one entry per queried interval."""

    value: Float[Array, " D"]
    low: Float[Array, " D"]
    high: Float[Array, " D"]
    y1: Float[Array, " D"]
    y2: Float[Array, " D"]
    nu: Float[Array, " D"]


@dataclass
class RestrictedChordTable(Pytree):
    r"""Optimal chords at a prior for every grid sub-interval containing it.

    Entry `[a, b]` describes the concavification at the prior of the function
    restricted to `[left[a], right[b]]`. Alongside each chord the table carries
    the chord average of an attached payoff: `low` under the payoff-minimising
    choice among value-tied chords and `high` under the payoff-maximising one.
    """

    left: Float[Array, " L"]
    right: Float[Array, " R"]
    value: Float[Array, "L R"]
    low: Float[Array, "L R"]
    high: Float[Array, "L R"]
    y1_index: Int[Array, "L R"]
    y2_index: Int[Array, "L R"]
    prior: float

    def lookup(
        self, alpha: Float[Array, " D"], beta: Float[Array, " D"]
    ) -> TableEntry:
        r"""Query the table for intervals $`[\alpha, \beta]`$ with endpoints on the grid."""
        alpha = np.asarray(alpha, dtype=np.float64)
        beta = np.asarray(beta, dtype=np.float64)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        ia = np.clip(np.searchsorted(left, alpha - PRIOR_TOL, side="left"), 0, left.size - 1)
        ib = np.clip(np.searchsorted(right, beta + PRIOR_TOL, side="right") - 1, 0, right.size - 1)
        i1 = self.y1_index[ia, ib]
        i2 = self.y2_index[ia, ib]
        y1, y2 = self.left[i1], self.right[i2]
        span = y2 - y1
        nu = jnp.where(span > 0.0, (y2 - self.prior) / jnp.where(span > 0.0, span, 1.0), 1.0)
        return TableEntry(
            value=self.value[ia, ib],
            low=self.low[ia, ib],
            high=self.high[ia, ib],
            y1=y1,
            y2=y2,
            nu=nu,
        )


def _tie_key(value: Float[Array, "..."], tie_tol: float) -> Float[Array, "..."]:
    """Index of the `tie_tol` bucket holding `value`; chords in one bucket are tied."""
    return jnp.round(value / tie_tol)


def _best_chord(a, b):
    """Associative merge of two sets of chords.

    Each side carries the bucket key of its best value, the best value, the
    lowest and highest attached payoff in that bucket and the flat index of the
    chord reaching the lowest payoff. Comparisons are lexicographic, so the
    merge does not depend on how the scan groups its operands.
    """
    ka, va, lo_a, idx_a, hi_a = a
    kb, vb, lo_b, idx_b, hi_b = b
    a_only = ka > kb
    b_only = kb > ka
    same = ~(a_only | b_only)
    b_low = (lo_b < lo_a) | ((lo_b == lo_a) & (idx_b < idx_a))
    take_b = b_only | (same & b_low)
    return (
        jnp.maximum(ka, kb),
        jnp.where(a_only, va, jnp.where(b_only, vb, jnp.maximum(va, vb))),
        jnp.where(take_b, lo_b, lo_a),
        jnp.where(take_b, idx_b, idx_a),
        jnp.where(a_only, hi_a, jnp.where(b_only, hi_b, jnp.maximum(hi_a, hi_b))),
    )


def restricted_chord_table(
    grid: Float[Array, " N"],
    values: Float[Array, " N"],
    payoffs: Float[Array, " N"],
    prior: ScalarFloat,
    tie_tol: float = 1e-9,
) -> RestrictedChordTable:
    r"""Tabulate the optimal chord at `prior` over all grid sub-intervals.

    For left endpoint $`\alpha \le \text{prior}`$ and right endpoint
    $`\beta \ge \text{prior}`$, the optimum over $`[\alpha, \beta]`$ is the best
    chord $`\{y_1, y_2\}`$ with $`\alpha \le y_1 \le \text{prior} \le y_2 \le \beta`$.
    The table is built from all pairwise chords by a suffix scan over left
    endpoints followed by a prefix scan over right endpoints.

    Args:
        grid (Float[Array, " N"]): strictly increasing grid containing `prior`.
        values (Float[Array, " N"]): function values on the grid.
        payoffs (Float[Array, " N"]): payoff attached to each grid point.
        prior (ScalarFloat): the prior, which must be a grid node.
        tie_tol (float): width of the value buckets; chords whose values round
            to the same multiple of `tie_tol` are tied.

    Returns:
        RestrictedChordTable: the table.
    """
    if not tie_tol > 0.0:
        raise ValueError(f"tie_tol must be positive, got {tie_tol}.")
    grid = np.asarray(grid, dtype=np.float64)
    prior = float(prior)
    if not np.any(grid == prior):
        raise ValueError(f"prior {prior} must be a node of the grid.")
    values = jnp.asarray(values, dtype=jnp.float64)
    payoffs = jnp.asarray(payoffs, dtype=jnp.float64)

    on_left = grid <= prior
    on_right = grid >= prior
    xl, xr = jnp.asarray(grid[on_left]), jnp.asarray(grid[on_right])
    ul, ur = values[on_left], values[on_right]
    pl, pr = payoffs[on_left], payoffs[on_right]

    span = xr[None, :] - xl[:, None]
    learns = span > 0.0
    nu = jnp.where(learns, (xr[None, :] - prior) / jnp.where(learns, span, 1.0), 1.0)
    value = nu * ul[:, None] + (1.0 - nu) * ur[None, :]
    payoff = nu * pl[:, None] + (1.0 - nu) * pr[None, :]
    n_right = xr.shape[0]
    flat = jnp.arange(xl.shape[0] * n_right).reshape(xl.shape[0], n_right)

    elems = (_tie_key(value, tie_tol), value, payoff, flat, payoff)
    elems = jax.lax.associative_scan(_best_chord, elems, reverse=True, axis=0)
    elems = jax.lax.associative_scan(_best_chord, elems, axis=1)
    _, value, low, flat, high = elems
    i1, i2 = flat // n_right, flat % n_right

    return RestrictedChordTable(
        left=xl,
        right=xr,
        value=value,
        low=low,
        high=high,
        y1_index=i1,
        y2_index=i2,
        prior=prior,
    )


__all__ = [
    "SampledFunction",
    "EnvelopeSolution",
    "GarblingSolution",
    "Chord",
    "Degenerate",
    "RestrictedChordTable",
    "TableEntry",
    "breakpoint_grid",
    "concave_envelope",
    "optimal_garbling",
    "restricted_chord_table",
]

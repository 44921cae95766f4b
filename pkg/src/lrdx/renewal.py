"""Null-recurrent renewal machinery: return sets, intersections, capacities.

The concrete epoch law has tail P(phi > n) = (1+n)^(-beta), so every
slowly varying correction is a constant.  Return-time sets over a window
{0..n} come in two flavours:

* delayed ("mu_n"): the first zero T0 has mass proportional to the epoch
  tail, P(T0 = k) = tail(k)/w_n for k = 0..n, after which the walk renews
  i.i.d.; the window then always contains a zero.
* pure: the walk starts at 0.

Samplers take an explicit numpy Generator and are embarrassingly parallel
across replicas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

__all__ = [
    "MemoryParams",
    "EpochLaw",
    "ReturnSet",
    "wandering_rate",
    "theta_n",
    "sample_return_set",
    "sample_return_sets",
    "pure_range",
    "pure_ranges",
    "walk_points",
    "split_rows",
    "intersect",
    "intersect_arrays",
    "escape_probability_mc",
    "capacity_mc",
    "capacity_lln_experiment",
    "conditional_pn_and_elln",
    "first_meeting_index",
    "ConditionalDraw",
]


@dataclass(frozen=True)
class MemoryParams:
    """Memory parameter pair (m, beta) with (m-1)/m < beta < m/(m+1).

    The range pins the maximal number of independent return sets with
    nonempty intersection to exactly m, and makes the simultaneous-renewal
    exponent beta_star = m*beta - (m-1) fall in (0, 1-beta).
    """

    m: int
    beta: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be an integer >= 2")
        lo, hi = (self.m - 1) / self.m, self.m / (self.m + 1)
        if not lo < self.beta < hi:
            raise ValueError(f"beta must lie in ({lo}, {hi}) for m={self.m}")

    @property
    def beta_star(self) -> float:
        return self.m * self.beta - (self.m - 1)

    @property
    def ell(self) -> int:
        # the admissible beta range pins max{l : l < 1/(1-beta)} to m
        return self.m


class EpochLaw:
    """Return-epoch law with tail (1+n)^(-beta), beta in (0,1); epochs >= 1."""

    def __init__(self, beta: float):
        if not 0.0 < beta < 1.0:
            raise ValueError("beta must lie in (0,1)")
        self.beta = float(beta)
        self._cum_cache: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"EpochLaw(beta={self.beta})"

    def tail(self, n):
        """P(phi > n) = (1+n)^(-beta); tail(0) = 1."""
        return (1.0 + np.asarray(n, dtype=float)) ** (-self.beta)

    def pmf(self, n):
        """P(phi = n) for integer n >= 1."""
        n = np.asarray(n, dtype=float)
        return n ** (-self.beta) - (1.0 + n) ** (-self.beta)

    def sample_epochs(self, shape, rng) -> np.ndarray:
        """Exact inverse-CDF sampling of epochs on {1, 2, ...}.

        Values are clipped at 2^53, far beyond any usable horizon, to keep
        the int64 cast safe for small beta.
        """
        u = 1.0 - rng.random(shape)
        eps = np.ceil(u ** (-1.0 / self.beta) - 1.0)
        return np.minimum(np.maximum(eps, 1.0), 2.0 ** 53).astype(np.int64)

    def cum_tail(self, n: int) -> np.ndarray:
        """Partial sums of the tail, cached: index k holds w_k."""
        arr = self._cum_cache.get(n)
        if arr is None:
            arr = np.cumsum((1.0 + np.arange(n + 1)) ** (-self.beta))
            if len(self._cum_cache) > 32:
                self._cum_cache.clear()
            self._cum_cache[n] = arr
        return arr

    def expected_renewals(self, span: float) -> float:
        """Asymptotic mean number of renewals covering a span."""
        if span <= 1:
            return 1.0
        b = self.beta
        return span ** b / (_gamma(1 + b) * _gamma(1 - b))


def wandering_rate(law: EpochLaw, n: int) -> float:
    """w_n: exact partial sum of the epoch tail over {0..n}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(law.cum_tail(n)[-1])


def theta_n(mem: MemoryParams, law: EpochLaw, n: int) -> float:
    """Scaling sequence of the m-fold simultaneous renewal counts.

    theta_n = C * n^beta_star / L where L is the constant slowly varying
    part of the simultaneous-epoch tail and C normalizes the one-sided
    stable limit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bs = mem.beta_star
    b = mem.beta
    big_l = (_gamma(b) * _gamma(1 - b)) ** mem.m / (_gamma(bs) * _gamma(1 - bs))
    c_bs = (1 - bs) / (_gamma(2 - bs) * math.cos(math.pi * bs / 2))
    return float(c_bs * n ** bs / big_l)


@dataclass(frozen=True)
class ReturnSet:
    """Sorted return times within {0..n}; origin records the sampling flavour."""

    n: int
    elements: np.ndarray
    origin: str = "mu_n"  # "mu_n" (delayed) or "pure"

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=np.int64)
        object.__setattr__(self, "elements", el)
        if self.origin not in ("mu_n", "pure"):
            raise ValueError("origin must be 'mu_n' or 'pure'")
        if self.origin == "mu_n" and el.size == 0:
            raise ValueError("a delayed return set cannot be empty")
        if el.size:
            if el[0] < 0 or el[-1] > self.n:
                raise ValueError("elements out of the window")
            if np.any(np.diff(el) <= 0):
                raise ValueError("elements must be strictly increasing")

    def __len__(self):
        return int(self.elements.size)


# -- core walkers ------------------------------------------------------


def walk_points(law: EpochLaw, starts: np.ndarray, horizon: int, rng,
                ) -> tuple[np.ndarray, np.ndarray]:
    """Renewal points of many walks as flat (row, position) pairs.

    Row i starts at ``starts[i]``; positions include the start and every
    renewal <= horizon.  Within a row, positions appear in increasing
    order when the pairs are stably sorted by row.
    """
    starts = np.asarray(starts, dtype=np.int64)
    n_rows = starts.shape[0]
    idx = np.arange(n_rows)
    rows_out = [idx.copy()]
    pos_out = [starts.copy()]
    cur = starts.copy()
    alive = cur <= horizon
    k = max(8, int(1.3 * law.expected_renewals(horizon)) + 8)
    while alive.any():
        ai = idx[alive]
        eps = law.sample_epochs((ai.size, k), rng)
        block = cur[ai, None] + np.cumsum(eps, axis=1)
        ok = block <= horizon
        rows_out.append(np.repeat(ai, ok.sum(axis=1)))
        pos_out.append(block[ok])
        cur[ai] = block[:, -1]
        alive[ai] = block[:, -1] <= horizon
        k = max(8, k // 2)
    return np.concatenate(rows_out), np.concatenate(pos_out)


def split_rows(rows: np.ndarray, pos: np.ndarray, n_rows: int) -> list[np.ndarray]:
    """Group flat (row, position) pairs into per-row sorted position arrays."""
    order = np.argsort(rows, kind="stable")
    pos = pos[order]
    counts = np.bincount(rows, minlength=n_rows)
    return np.split(pos, np.cumsum(counts)[:-1])


def _delayed_starts(law: EpochLaw, n: int, count: int, rng) -> np.ndarray:
    cw = law.cum_tail(n)
    u = rng.random(count) * cw[-1]
    return np.searchsorted(cw, u, side="right").astype(np.int64)


def sample_return_sets(law: EpochLaw, n: int, count: int, rng) -> list[np.ndarray]:
    """Batch of delayed (mu_n) return sets as sorted int arrays."""
    starts = _delayed_starts(law, n, count, rng)
    rows, pos = walk_points(law, starts, n, rng)
    return split_rows(rows, pos, count)


def sample_return_set(law: EpochLaw, n: int, rng) -> ReturnSet:
    """One delayed (mu_n) return set; always nonempty."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return ReturnSet(n, sample_return_sets(law, n, 1, rng)[0], "mu_n")


def pure_ranges(law: EpochLaw, horizon: int, count: int, rng) -> list[np.ndarray]:
    """Batch of pure renewal ranges started at 0, truncated at the horizon."""
    starts = np.zeros(count, dtype=np.int64)
    rows, pos = walk_points(law, starts, horizon, rng)
    return split_rows(rows, pos, count)


def pure_range(law: EpochLaw, horizon: int, rng) -> ReturnSet:
    return ReturnSet(horizon, pure_ranges(law, horizon, 1, rng)[0], "pure")


# -- set algebra -------------------------------------------------------


def intersect_arrays(arrays) -> np.ndarray:
    """Sorted intersection of sorted unique int arrays."""
    arrays = list(arrays)
    out = arrays[0]
    for a in arrays[1:]:
        if out.size == 0:
            break
        out = np.intersect1d(out, a, assume_unique=True)
    return out

def intersect(sets: list[ReturnSet]) -> ReturnSet:
    """Intersection of return sets sharing one horizon; may be empty."""
    if not sets:
        raise ValueError("need at least one set")
    n = sets[0].n
    if any(s.n != n for s in sets):
        raise ValueError("mismatched horizons")
    common = intersect_arrays([s.elements for s in sets])
    if common.size == 0:
        return ReturnSet(n, common, "pure")
    origin = "pure" if common[0] == 0 else "mu_n"
    return ReturnSet(n, common, origin)


# -- escape probability and capacities ---------------------------------


def escape_probability_mc(mem: MemoryParams, law: EpochLaw, horizon: int,
                          reps: int, rng) -> tuple[float, float]:
    """P(m+1 independent pure ranges meet only at 0 within the horizon).

    The event is nested in the horizon, so the estimate decreases toward
    the escape probability as the horizon grows.  Returns (estimate, se).
    """
    if horizon < 1 or reps < 1:
        raise ValueError("horizon and reps must be >= 1")
    mm = mem.m + 1
    hits = 0
    chunk = max(1, min(reps, 4000))
    done = 0
    while done < reps:
        r = min(chunk, reps - done)
        ranges = pure_ranges(law, horizon, r * mm, rng)
        for i in range(r):
            common = intersect_arrays(ranges[i * mm:(i + 1) * mm])
            hits += common.size == 1  # only {0}
        done += r
    p = hits / reps
    return p, math.sqrt(max(p * (1 - p), 1e-12) / reps)


def capacity_mc(target: np.ndarray, law: EpochLaw, reps_per_point: int, rng) -> float:
    """Monte-Carlo capacity of a finite set under the renewal walk.

    For each a in the set, estimates the probability an independent walk
    started at a never revisits the set; the walk stops exactly once its
    position passes max(target) because increments are >= 1.  The largest
    point escapes with probability one, so a singleton has capacity 1.
    """
    a = np.asarray(target, dtype=np.int64)
    if a.size == 0:
        raise ValueError("target must be nonempty")
    if a.size == 1:
        return 1.0
    amax = int(a[-1])
    pts = a[:-1]
    starts = np.repeat(pts, reps_per_point)
    rows, pos = walk_points(law, starts, amax, rng)
    moved = pos > starts[rows]
    hit = np.zeros(starts.size, dtype=bool)
    in_set = np.isin(pos[moved], a)
    np.logical_or.at(hit, rows[moved][in_set], True)
    escaped = 1.0 - hit.reshape(pts.size, reps_per_point).mean(axis=1)
    return float(1.0 + escaped.sum())


def capacity_lln_experiment(mem: MemoryParams, law: EpochLaw, n_grid,
                            reps: int, rng, reps_per_point: int = 256) -> list[dict]:
    """Per-point capacity of the windowed m-fold simultaneous range.

    For each window n, replicates: intersect m pure ranges on {0..n}
    (always contains 0) and record capacity divided by the cardinality,
    i.e. the running capacity of the first |set| simultaneous-renewal
    points.  Records mean/stdev per n.
    """
    records = []
    for n in n_grid:
        ratios = np.empty(reps)
        cards = np.empty(reps, dtype=np.int64)
        for r in range(reps):
            ranges = pure_ranges(law, int(n), mem.m, rng)
            common = intersect_arrays(ranges)
            cap = capacity_mc(common, law, reps_per_point, rng)
            ratios[r] = cap / common.size
            cards[r] = common.size
        records.append({
            "n": int(n),
            "mean": float(ratios.mean()),
            "stdev": float(ratios.std(ddof=1)),
            "se": float(ratios.std(ddof=1) / math.sqrt(reps)),
            "mean_cardinality": float(cards.mean()),
            "reps": reps,
        })
    return records


# -- conditional intersection law --------------------------------------


@dataclass(frozen=True)
class ConditionalDraw:
    """Accepted draw of the conditional pair (p_n, ell_n)."""

    p_n: float
    ell_n: int
    common: np.ndarray = field(repr=False)


def first_meeting_index(target: np.ndarray, law: EpochLaw, n: int, rng,
                        start_index: int, max_draws: int = 10_000_000) -> int:
    """Smallest index j >= start_index whose fresh delayed set meets the target."""
    j = start_index - 1
    while True:
        batch = 64
        if j - start_index > max_draws:
            raise RuntimeError("meeting index search exceeded max_draws")
        sets = sample_return_sets(law, n, batch, rng)
        for s in sets:
            j += 1
            if np.intersect1d(s, target, assume_unique=True).size:
                return j


def conditional_pn_and_elln(mem: MemoryParams, law: EpochLaw, n: int,
                            interval: tuple[float, float], rng,
                            reps_per_point: int = 256) -> ConditionalDraw | None:
    """One attempt at the conditional pair (p_n, ell_n) on an open interval.

    Draws m delayed return sets; if the rescaled interval misses their
    intersection the attempt is a rejection and None is returned.  On
    acceptance, p_n is the capacity of the meeting set divided by w_n
    (exact identity for the conditional hitting probability of a fresh
    delayed set), and ell_n is the first index >= m+1 whose fresh set
    meets it, so ell_n - m is geometric with success probability p_n.
    """
    lo, hi = interval
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError("interval must be an open subinterval of [0,1]")
    sets = sample_return_sets(law, n, mem.m, rng)
    common = intersect_arrays(sets)
    common = common[(common > lo * n) & (common < hi * n)]
    if common.size == 0:
        return None
    p_n = capacity_mc(common, law, reps_per_point, rng) / wandering_rate(law, n)
    ell = first_meeting_index(common, law, n, rng, mem.m + 1)
    return ConditionalDraw(p_n=float(p_n), ell_n=int(ell), common=common)

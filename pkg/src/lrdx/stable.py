"""Stable subordinator marginals, Mittag-Leffler variables, regenerative lattices.

The positive stable marginal uses the exact trigonometric (Kanter) method
for the law with Laplace transform exp(-s^beta), rescaled by
cos(pi beta/2)^(-1/beta) so that

    E exp(-g Y) = exp(-g^beta / cos(pi beta / 2)),

the totally skewed S_beta(1,1,0) normalization.  Stable regenerative sets
are represented only through renewal lattices at finite resolution: a
delayed return set rescaled by 1/n is the prelimit stand-in for the
randomly shifted set (Q + Z) intersected with [0,1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

from . import renewal

__all__ = [
    "StableParams",
    "LatticeSet",
    "sample_stable_marginal",
    "sample_mittag_leffler",
    "sample_Q",
    "sample_regenerative_lattice",
    "intersection_prob",
    "ell_beta",
]


@dataclass(frozen=True)
class StableParams:
    """Index beta in (0,1); normalization fixed by the Laplace exponent above."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0,1)")

    @property
    def scale(self) -> float:
        # rescales the exp(-s^beta)-normalized marginal to the target transform
        return math.cos(math.pi * self.beta / 2.0) ** (-1.0 / self.beta)


def sample_stable_marginal(p: StableParams, rng, size=None):
    """Positive stable marginal Y(1); strictly positive."""
    b = p.beta
    shape = () if size is None else size
    theta = math.pi * rng.random(shape)
    w = rng.exponential(size=shape)
    y = (np.sin(b * theta) / np.sin(theta) ** (1.0 / b)
         * (np.sin((1.0 - b) * theta) / w) ** ((1.0 - b) / b))
    out = p.scale * y
    return float(out) if size is None else out


def sample_mittag_leffler(p: StableParams, t, rng, size=None):
    """Inverse-subordinator value Z(t) via Z(t) = (t / Y(1))^beta in law.

    Self-similar of index beta; Z(0) = 0.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    y = sample_stable_marginal(p, rng, size=size)
    out = (t / y) ** p.beta
    return float(out) if (size is None and t.ndim == 0) else out


def sample_Q(beta_eff: float, rng, size=None):
    """First-hit location law on (0,1]: P(Q <= q) = q^(1-beta_eff)."""
    if not 0.0 < beta_eff < 1.0:
        raise ValueError("beta_eff must lie in (0,1)")
    u = rng.random() if size is None else rng.random(size)
    return u ** (1.0 / (1.0 - beta_eff))


@dataclass(frozen=True)
class LatticeSet:
    """Sorted lattice points of {0..n} read as the subset {t/n} of [0,1]."""

    resolution: int
    points: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        if pts.size:
            if pts[0] < 0 or pts[-1] > self.resolution:
                raise ValueError("points outside the lattice")
            if pts[0] / self.resolution < self.shift - 1.0 / self.resolution:
                raise ValueError("first point inconsistent with the shift")

    def as_fractions(self) -> np.ndarray:
        return self.points / self.resolution


def sample_regenerative_lattice(p: StableParams, n: int, rng,
                                shifted: bool = True) -> LatticeSet:
    """Lattice approximation of a stable regenerative set at resolution n.

    shifted=True gives the randomly shifted set (window-conditioned delayed
    renewal, the prelimit of (Q + Z) in [0,1]); shifted=False gives a pure
    range from 0 approximating Z itself, so 0 is always included.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    law = renewal.EpochLaw(p.beta)
    if shifted:
        pts = renewal.sample_return_sets(law, n, 1, rng)[0]
        return LatticeSet(n, pts, shift=float(pts[0]) / n)
    pts = renewal.pure_ranges(law, n, 1, rng)[0]
    return LatticeSet(n, pts, shift=0.0)


def ell_beta(beta: float) -> int:
    """max{l natural : l < 1/(1-beta)}, with a strict tie rule at integers."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0,1)")
    x = 1.0 / (1.0 - beta)
    nearest = round(x)
    if abs(x - nearest) < 1e-9:  # snap float noise at exact-integer boundaries
        return int(nearest) - 1
    return int(math.floor(x))


def intersection_prob(s: int, beta: float) -> float:
    """P(s independent shifted regenerative sets meet inside [0,1]).

    Closed form [Gamma(b)Gamma(2-b)]^s / (Gamma(b_s)Gamma(2-b_s)) with
    b_s = s*b - s + 1 for s <= ell_beta, and exactly 0 above it.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0,1)")
    if s > ell_beta(beta):
        return 0.0
    if s == 1:
        return 1.0  # b_1 = beta, numerator and denominator coincide
    bs = s * beta - s + 1.0
    val = (_gamma(beta) * _gamma(2.0 - beta)) ** s / (_gamma(bs) * _gamma(2.0 - bs))
    return float(val)

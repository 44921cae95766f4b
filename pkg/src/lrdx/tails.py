"""Moderately heavy tail families and their norming functions.

Two closed-form families are provided.  Writing g(x) = -log of the
unscaled tail:

* log-normal type:        g(x) = (log x)^gamma,  gamma > 1, support (1, inf)
* super-log-normal type:  g(x) = E_d[(L_d(x))^gamma],  gamma in (0, 1),
  d >= 1 iterated exp/log compositions, support (E_d(0), inf)

Both lie in the Gumbel max-domain of attraction with auxiliary function
h in RV_1 and a slowly varying quantile whose Karamata density is driven
by zeta in RV_alpha (alpha = 1/gamma, resp. 0).  All quantiles invert
analytically; a guarded bisection fallback exists for families without a
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "TailModel",
    "NormSeq",
    "pitman_integral",
    "iid_gumbel_norming",
    "lrd_norming",
    "invert_decreasing",
]

_LOG_NORMAL = "lognormal"
_SUPER_LOG_NORMAL = "superlognormal"


def _iter_exp(depth: int, x):
    for _ in range(depth):
        x = np.exp(x)
    return x


def _iter_log(depth: int, x):
    for _ in range(depth):
        x = np.log(x)
    return x


@dataclass(frozen=True)
class TailModel:
    """Immutable tail model; every method is pure and thread-safe.

    ``c_scale`` multiplies the unscaled tail: the full (Levy) tail is
    nu_bar(x) = c_scale * exp(-log_tail(x)).
    """

    family: str
    gamma: float
    depth: int = 1
    c_scale: float = 1.0

    def __post_init__(self):
        if self.family == _LOG_NORMAL:
            if not self.gamma > 1.0:
                raise ValueError("log-normal family needs gamma > 1")
        elif self.family == _SUPER_LOG_NORMAL:
            if not 0.0 < self.gamma < 1.0:
                raise ValueError("super-log-normal family needs gamma in (0,1)")
            if self.depth < 1:
                raise ValueError("depth must be >= 1")
        else:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.c_scale > 0.0:
            raise ValueError("c_scale must be positive")

    @classmethod
    def log_normal(cls, gamma: float, c_scale: float = 1.0) -> "TailModel":
        return cls(_LOG_NORMAL, gamma, 1, c_scale)

    @classmethod
    def super_log_normal(cls, depth: int, gamma: float, c_scale: float = 1.0) -> "TailModel":
        return cls(_SUPER_LOG_NORMAL, gamma, depth, c_scale)

    # -- support -------------------------------------------------------

    @property
    def x0(self) -> float:
        """Left end of the support of the unscaled tail."""
        if self.family == _LOG_NORMAL:
            return 1.0
        return float(_iter_exp(self.depth, 0.0))

    @property
    def z0_sharp(self) -> float:
        """Level below which the unscaled quantile clamps: 1/tail(x0)."""
        return float(np.exp(self.log_tail(self.x0)))

    @property
    def z0(self) -> float:
        """Level below which the scaled quantile V clamps to 0."""
        return self.z0_sharp / self.c_scale

    @property
    def growth_delta(self) -> float:
        """A diagnostic exponent with zeta(u)/(log u)^delta -> infinity.

        Only existence matters; the log-normal family admits half its RV
        index, while the depth-1 iterated family needs delta below
        1/gamma - 1 (its zeta is a pure log power).
        """
        if self.family == _LOG_NORMAL:
            return min(1.0, 0.5 / self.gamma)
        if self.depth == 1:
            return 0.5 * (1.0 / self.gamma - 1.0)
        return 0.5

    # -- tail ----------------------------------------------------------

    def log_tail(self, x):
        """g(x) = -log of the unscaled tail; strictly increasing on the support."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x0 * (1.0 - 1e-12)):
            raise ValueError("x below the support threshold")
        x = np.maximum(x, self.x0)
        if self.family == _LOG_NORMAL:
            out = np.log(x) ** self.gamma
        else:
            d = self.depth
            out = _iter_exp(d, _iter_log(d, x) ** self.gamma)
        return out if out.ndim else float(out)

    def tail(self, x):
        """Unscaled tail, clamped to its value at the support threshold below it."""
        x = np.asarray(x, dtype=float)
        out = np.exp(-self.log_tail(np.maximum(x, self.x0)))
        return out if out.ndim else float(out)

    def nu_bar(self, x):
        """Scaled (Levy) tail c_scale * tail(x)."""
        out = self.c_scale * np.asarray(self.tail(x))
        return out if out.ndim else float(out)

    # -- auxiliary function and Karamata density ------------------------

    def aux_h(self, u):
        """Auxiliary function h(u) = 1/g'(u); positive, RV_1, h(u) = o(u)."""
        u = np.asarray(u, dtype=float)
        if np.any(u <= self.x0):
            raise ValueError("u must lie strictly inside the support")
        if self.family == _LOG_NORMAL:
            out = u / (self.gamma * np.log(u) ** (self.gamma - 1.0))
        else:
            d = self.depth
            ld = _iter_log(d, u)
            num = u * ld ** (1.0 - self.gamma)
            den = np.asarray(self.gamma, dtype=float) * np.ones_like(u)
            for k in range(1, d):
                num = num * _iter_log(k, u)
            for k in range(1, d + 1):
                den = den * _iter_exp(k, ld ** self.gamma)
            out = num / den
        return out if out.ndim else float(out)

    def zeta(self, u):
        """Karamata density of the quantile; RV_{1/gamma} resp. RV_0."""
        u = np.asarray(u, dtype=float)
        lo = 0.0 if self.family == _LOG_NORMAL else self.x0
        if np.any(u <= lo):
            raise ValueError("u below the domain of zeta")
        if self.family == _LOG_NORMAL:
            out = u ** (1.0 / self.gamma) / self.gamma
        else:
            d = self.depth
            ld = _iter_log(d, u) if d >= 1 else u
            out = ld ** (1.0 / self.gamma - 1.0) / self.gamma
            for k in range(1, d):
                out = out * _iter_exp(k, ld ** (1.0 / self.gamma)) / _iter_log(k, u)
        return out if out.ndim else float(out)

    # -- quantiles -------------------------------------------------------

    def quantile_sharp(self, z):
        """Inverse of 1/tail: the unique x with tail(x) = 1/z, z >= z0_sharp."""
        z = np.asarray(z, dtype=float)
        if np.any(z < self.z0_sharp * (1.0 - 1e-12)):
            raise ValueError("z below the quantile domain")
        z = np.maximum(z, self.z0_sharp)
        if self.family == _LOG_NORMAL:
            out = np.exp(np.log(z) ** (1.0 / self.gamma))
        else:
            d = self.depth
            out = _iter_exp(d, _iter_log(d + 1, z) ** (1.0 / self.gamma))
        return out if out.ndim else float(out)

    def quantile(self, z):
        """Levy-tail quantile V(z): solves c_scale*tail(x) = 1/z, or 0 below z0.

        Total on the reals; monotone nondecreasing.
        """
        z_in = np.asarray(z, dtype=float)
        z = np.atleast_1d(z_in)
        out = np.zeros_like(z)
        ok = z > self.z0
        if np.any(ok):
            out[ok] = self.quantile_sharp(z[ok] * self.c_scale)
        return out if z_in.ndim else float(out[0])


def pitman_integral(model: TailModel, x_max: float) -> float:
    """Truncated subexponentiality integral of exp(x g'(x) - g(x)) g'(x).

    Convergence of the full integral certifies a subexponential tail; the
    truncated value is nonnegative and increasing in ``x_max``.
    """
    if x_max < model.x0:
        raise ValueError("x_max below the support threshold")
    if x_max == model.x0:
        return 0.0

    def integrand(x):
        gp = 1.0 / model.aux_h(x)
        return math.exp(x * gp - model.log_tail(x)) * gp

    lo = model.x0 * (1.0 + 1e-9)
    val, err = integrate.quad(integrand, lo, x_max, limit=200)
    if not math.isfinite(val) or err > max(1e-6, 1e-6 * abs(val)):
        raise ArithmeticError(f"quadrature failed: value={val}, err={err}")
    return val


def iid_gumbel_norming(model: TailModel, n: float) -> tuple[float, float]:
    """Gumbel norming (a_n, b_n) for iid maxima: b = V(n), a = h(b)."""
    b = model.quantile(n)
    if b <= model.x0:
        raise ValueError("n too small: quantile at or below the support threshold")
    return model.aux_h(b), b


@dataclass(frozen=True)
class NormSeq:
    """Norming constants attached to one window size n."""

    n: int
    w_n: float
    theta_n: float
    a_n: float
    b_n: float
    iid_a: float
    iid_b: float


def lrd_norming(model: TailModel, mem, w_n: float, theta_n: float, n: int = 0) -> NormSeq:
    """Norming for the long-range dependent window: b = m V(w_n) + V(theta_n).

    The scale a is h(V(w_n)).  V(theta_n) clamps to 0 when theta_n is below
    the quantile threshold, which happens at small n.
    """
    v_w = model.quantile(w_n)
    if v_w <= 0.0:
        raise ValueError("n too small for norming: V(w_n) = 0")
    b_n = mem.m * v_w + model.quantile(theta_n)
    a_n = model.aux_h(v_w)
    try:
        iid_a, iid_b = iid_gumbel_norming(model, float(max(n, 2)))
    except ValueError:
        iid_a, iid_b = float("nan"), float("nan")
    return NormSeq(n=n, w_n=w_n, theta_n=theta_n, a_n=a_n, b_n=b_n, iid_a=iid_a, iid_b=iid_b)


def invert_decreasing(fn, target: float, lo: float, hi: float | None = None,
                      rel_tol: float = 1e-12, max_iter: int = 200) -> float:
    """Find x with fn(x) = target for strictly decreasing fn, doubling the bracket.

    Fallback used by tail families without closed-form quantiles.
    """
    if hi is None:
        hi = max(2.0 * lo, lo + 1.0)
        for _ in range(max_iter):
            if fn(hi) <= target:
                break
            hi *= 2.0
        else:
            raise ArithmeticError("bracket doubling failed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fn(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)

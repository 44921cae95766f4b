"""Series-representation simulator of the stationary LRD process.

A window (X_0..X_n) is the compound-Poisson sum

    X_t = sum_j V(w_n / Gamma_j) 1(t in I_j),

with unit-rate Poisson arrivals Gamma_j, the Levy-tail quantile V, and
independent delayed return sets I_j.  Arrivals with Gamma_j >= c * w_n
contribute exactly 0 because V clamps below its threshold, so the series
is finite and the stored atoms reconstruct the path bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import renewal
from .renewal import EpochLaw, MemoryParams
from .tails import NormSeq, TailModel, lrd_norming

__all__ = [
    "ProcessPath",
    "LowerBoundReport",
    "sample_process",
    "empirical_M",
    "empirical_extremal",
    "lower_bound_stat",
    "big_jump_report",
    "remainder_tail_check",
    "remainder_sum_mean",
    "sample_marginal",
]


@dataclass(frozen=True)
class ProcessPath:
    """One simulated window with its atom decomposition and norming."""

    n: int
    values: np.ndarray
    gammas: np.ndarray            # arrivals below the truncation c * w_n
    magnitudes: np.ndarray        # V(w_n / Gamma_j), all > 0
    sets: list                    # delayed return sets, one per arrival
    norm: NormSeq

    @property
    def atom_count(self) -> int:
        return int(self.gammas.size)

    def rebuild_values(self) -> np.ndarray:
        """Recompute the window from the stored atoms (bit-exact)."""
        return _scatter_values(self.n, self.magnitudes, self.sets)


def _scatter_values(n: int, magnitudes: np.ndarray, sets: list) -> np.ndarray:
    if not len(sets):
        return np.zeros(n + 1)
    t_all = np.concatenate(sets)
    v_all = np.concatenate([np.full(len(s), v) for v, s in zip(magnitudes, sets)])
    return np.bincount(t_all, weights=v_all, minlength=n + 1)


def _truncated_arrivals(c_w: float, rng) -> np.ndarray:
    """Unit-rate Poisson arrivals strictly below c_w."""
    count = rng.poisson(c_w)
    if count == 0:
        return np.empty(0)
    return np.sort(rng.random(count)) * c_w


def sample_process(model: TailModel, mem: MemoryParams, law: EpochLaw,
                   n: int, rng) -> ProcessPath:
    """Simulate one window of the process at horizon n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w_n = renewal.wandering_rate(law, n)
    if w_n <= model.z0:
        raise ValueError("horizon too small: w_n at or below the quantile threshold")
    th = renewal.theta_n(mem, law, n)
    norm = lrd_norming(model, mem, w_n, th, n=n)
    # arrivals at or beyond nu_bar(x0) * w_n have V(w_n/Gamma) = 0 exactly
    gammas = _truncated_arrivals(model.nu_bar(model.x0) * w_n, rng)
    mags = model.quantile(w_n / gammas) if gammas.size else np.empty(0)
    keep = mags > 0.0  # guards float edge at the truncation boundary
    gammas, mags = gammas[keep], mags[keep]
    sets = renewal.sample_return_sets(law, n, gammas.size, rng) if gammas.size else []
    values = _scatter_values(n, mags, sets)
    return ProcessPath(n=n, values=values, gammas=gammas, magnitudes=mags,
                       sets=sets, norm=norm)


def _window_indices(n: int, interval: tuple[float, float], closed: bool):
    lo, hi = interval
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError("interval must be a nondegenerate subinterval of [0,1]")
    if closed:
        a = math.ceil(lo * n)
        b = math.floor(hi * n)
    else:
        a = math.floor(lo * n) + 1
        b = math.ceil(hi * n) - 1
    if a > b:
        raise ValueError("interval contains no lattice point")
    return a, b


def empirical_M(path: ProcessPath, interval: tuple[float, float],
                closed: bool = True) -> float:
    """Window sup-measure: max of X_t over lattice points of n * interval."""
    a, b = _window_indices(path.n, interval, closed)
    return float(path.values[a:b + 1].max())


def empirical_extremal(path: ProcessPath, grid) -> np.ndarray:
    """Running maxima E(t) = max{X_i : i <= floor(n t)} at grid points."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid > 1) or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be increasing inside (0, 1]")
    run = np.maximum.accumulate(path.values)
    return run[np.floor(grid * path.n).astype(int)]


@dataclass(frozen=True)
class LowerBoundReport:
    """Dominating-atom decomposition of the window max over an interval."""

    interval: tuple[float, float]
    j_star: tuple | None              # 1-based indices of the m dominating atoms
    j_extra: int | None               # first later index meeting the pinned set
    value: float                      # sum of the m + 1 magnitudes, -inf if none
    top_magnitudes: tuple
    extra_magnitude: float
    witness: int | None = field(default=None)


def lower_bound_stat(path: ProcessPath, interval: tuple[float, float], rng,
                     mem: MemoryParams, law: EpochLaw,
                     delta0: float | None = None,
                     index_cap: int | None = None) -> LowerBoundReport:
    """Best m-atom sum meeting the window, plus the next meeting atom.

    The m-tuple maximizes the magnitude sum among tuples whose return sets
    share a lattice point inside n * interval; the extra index continues
    the atom list in order (drawing fresh sets with zero magnitude once
    the truncated series is exhausted), so the reported value never
    exceeds the window max.  delta0, when given, caps the tuple indices at
    floor(n^delta0); the cap must satisfy 0 < delta0 < 1 - beta - 1/(m+1).
    """
    m = mem.m
    if delta0 is not None:
        hi = 1.0 - mem.beta - 1.0 / (m + 1)
        if not 0.0 < delta0 < hi:
            raise ValueError(f"delta0 must lie in (0, {hi})")
    cap = path.atom_count
    if index_cap is not None:
        cap = min(cap, index_cap)
    if delta0 is not None:
        cap = min(cap, int(math.floor(path.n ** delta0)))

    a, b = _window_indices(path.n, interval, closed=False)
    # best m-tuple == m smallest atom indices sharing a window lattice point
    best_t, best_js = None, None
    if cap >= m:
        t_parts, j_parts = [], []
        for j in range(cap):
            pts = path.sets[j]
            inside = pts[(pts >= a) & (pts <= b)]
            if inside.size:
                t_parts.append(inside)
                j_parts.append(np.full(inside.size, j, dtype=np.int64))
        if t_parts:
            t_flat = np.concatenate(t_parts)
            j_flat = np.concatenate(j_parts)
            key = np.sort(t_flat * (cap + 1) + j_flat)
            t_s, j_s = key // (cap + 1), key % (cap + 1)
            new = np.r_[True, t_s[1:] != t_s[:-1]]
            starts = np.flatnonzero(new)
            counts = np.diff(np.r_[starts, key.size])
            ok = np.flatnonzero(counts >= m)
            if ok.size:
                # magnitudes decrease with index, so sum of m smallest j wins
                cand = np.array([path.magnitudes[j_s[starts[i]:starts[i] + m]].sum()
                                 for i in ok])
                pick = ok[np.argmax(cand)]
                best_t = int(t_s[starts[pick]])
                best_js = tuple(int(x) for x in j_s[starts[pick]:starts[pick] + m])

    if best_js is None:
        return LowerBoundReport(interval=interval, j_star=None, j_extra=None,
                                value=-math.inf, top_magnitudes=(),
                                extra_magnitude=math.nan)

    pinned = path.sets[best_js[0]]
    for j in best_js[1:]:
        pinned = np.intersect1d(pinned, path.sets[j], assume_unique=True)
    pinned = pinned[(pinned >= a) & (pinned <= b)]

    j_extra = None
    for j in range(best_js[-1] + 1, path.atom_count):
        if np.intersect1d(path.sets[j], pinned, assume_unique=True).size:
            j_extra = j
            break
    if j_extra is not None:
        extra_mag = float(path.magnitudes[j_extra])
    else:
        # beyond the truncation every magnitude is exactly 0; fresh sets
        # keep the i.i.d. structure while contributing nothing
        j_extra = renewal.first_meeting_index(pinned, law, path.n, rng,
                                              path.atom_count)
        extra_mag = 0.0

    tops = tuple(float(path.magnitudes[j]) for j in best_js)
    value = float(sum(tops) + extra_mag)
    return LowerBoundReport(interval=interval,
                            j_star=tuple(j + 1 for j in best_js),
                            j_extra=int(j_extra) + 1, value=value,
                            top_magnitudes=tops,
                            extra_magnitude=float(extra_mag),
                            witness=best_t)


def big_jump_report(model: TailModel, path: ProcessPath,
                    report: LowerBoundReport) -> dict:
    """Magnitude ratios of the dominating atoms against their natural scales.

    The m leading magnitudes live on the V(w_n) scale; the extra one on
    the smaller V(theta_n) scale.
    """
    v_w = model.quantile(path.norm.w_n)
    v_th = model.quantile(path.norm.theta_n)
    tops = tuple(t / v_w for t in report.top_magnitudes)
    return {
        "top_ratios": tops,
        "extra_vs_theta": (report.extra_magnitude / v_th if v_th > 0 else math.nan),
        "extra_vs_w": report.extra_magnitude / v_w,
    }


def remainder_sum_samples(model: TailModel, mem: MemoryParams, law: EpochLaw,
                          n: int, rng, reps: int, r: float | None = None,
                          cut: str = "index") -> np.ndarray:
    """Draws of the far-tail remainder sum at a single time point.

    Keeps atoms with index (or arrival time, cut="gamma") at least n^r;
    each contributes at the time point with probability 1/w_n.
    """
    b = mem.beta
    if r is None:
        r = (1.0 - b) / 2.0
    if not 0.0 < r < 1.0 - b:
        raise ValueError("r must lie in (0, 1-beta)")
    if cut not in ("index", "gamma"):
        raise ValueError("cut must be 'index' or 'gamma'")
    w_n = renewal.wandering_rate(law, n)
    c_w = model.nu_bar(model.x0) * w_n
    cutoff = n ** r
    out = np.zeros(reps)
    for i in range(reps):
        gam = _truncated_arrivals(c_w, rng)
        if cut == "index":
            gam = gam[int(math.ceil(cutoff)) - 1:]
        else:
            gam = gam[gam >= cutoff]
        if gam.size == 0:
            continue
        sel = rng.random(gam.size) < 1.0 / w_n
        if sel.any():
            out[i] = model.quantile(w_n / gam[sel]).sum()
    return out


def remainder_tail_check(model: TailModel, mem: MemoryParams, law: EpochLaw,
                         n: int, epsilon: float, rng, reps: int,
                         r: float | None = None, cut: str = "index") -> float:
    """n * frequency of the far-tail remainder sum exceeding eps * V(w_n)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    w_n = renewal.wandering_rate(law, n)
    sums = remainder_sum_samples(model, mem, law, n, rng, reps, r=r, cut=cut)
    return n * float((sums >= epsilon * model.quantile(w_n)).mean())


def remainder_sum_mean(model: TailModel, law: EpochLaw, n: int, r: float) -> float:
    """Mean of the arrival-cut remainder sum: integral of V(w_n/u)/w_n du."""
    from scipy import integrate

    w_n = renewal.wandering_rate(law, n)
    lo, hi = n ** r, model.nu_bar(model.x0) * w_n
    if lo >= hi:
        return 0.0
    val, _ = integrate.quad(lambda u: model.quantile(w_n / u), lo, hi, limit=200)
    return val / w_n


def sample_marginal(model: TailModel, size: int, rng) -> np.ndarray:
    """Exact draws of the one-point marginal X_0.

    Thinning the series at a single time: each arrival contributes with
    probability 1/w_n, so the contributing arrivals form a Poisson process
    of rate 1/w_n on (0, nu_bar(x0) w_n); rescaling makes the law
    horizon-free: X_0 = sum of V(1/(nu0 U_i)) over Poisson(nu0) uniforms,
    nu0 = nu_bar(x0).
    """
    nu0 = model.nu_bar(model.x0)
    counts = rng.poisson(nu0, size=size)
    total = int(counts.sum())
    out = np.zeros(size)
    if total:
        vals = model.quantile(1.0 / (nu0 * rng.random(total)))
        idx = np.repeat(np.arange(size), counts)
        out = np.bincount(idx, weights=vals, minlength=size)
    return out

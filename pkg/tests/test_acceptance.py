"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single PASS/FAIL line (run with -s to see them live)
and then asserts every clause.  Defaults: m=2, beta=0.6, log-normal
gamma=2, unit scale.  Criteria A3, A4, A6, A7, A10 and the tail-ratio
clause of A11 probe asymptotics whose prelimit error at desk-scale n
exceeds the stated tolerances; they are implemented exactly as stated and
their failures are analyzed in the project notes.
"""

import math

import numpy as np
import pytest
from scipy.special import gamma as G

from lrdx import limits, process, renewal, stable
from lrdx.harness import derive_rng, ks_statistic
from lrdx.renewal import EpochLaw, MemoryParams
from lrdx.tails import TailModel, iid_gumbel_norming

MODEL = TailModel.log_normal(2.0)
MEM = MemoryParams(2, 0.6)
LAW = EpochLaw(0.6)


def report(name, clauses):
    ok = all(passed for _, passed in clauses)
    detail = "; ".join(f"{d} {'ok' if p else 'FAIL'}" for d, p in clauses)
    print(f"[{name}] {'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, detail


def test_a1_stable_laplace_transform():
    rng = derive_rng(100, 1)
    worst = 0.0
    for b in (0.2, 0.5, 0.8):
        y = stable.sample_stable_marginal(stable.StableParams(b), rng, size=100_000)
        for g in (0.5, 1.0, 2.0):
            emp = np.exp(-g * y)
            target = math.exp(-g ** b / math.cos(math.pi * b / 2.0))
            z = abs(emp.mean() - target) / (emp.std(ddof=1) / math.sqrt(emp.size))
            worst = max(worst, z)
    report("A1", [(f"max |z|={worst:.2f} <= 3", worst <= 3.0)])


def _qlaw_ks(n, accepted, rng):
    mins = []
    while len(mins) < accepted:
        batch = 1024
        sets = renewal.sample_return_sets(LAW, n, batch * 2, rng)
        for i in range(batch):
            common = np.intersect1d(sets[2 * i], sets[2 * i + 1],
                                    assume_unique=True)
            if common.size:
                mins.append(common[0] / n)
                if len(mins) >= accepted:
                    break
    bs = MEM.beta_star
    return ks_statistic(np.asarray(mins), lambda q: q ** (1.0 - bs))


def test_a2_qlaw():
    rng = derive_rng(100, 2)
    ks_small = _qlaw_ks(500, 2000, rng)
    ks_big = _qlaw_ks(5000, 2000, rng)
    report("A2", [
        (f"KS(n=5000)={ks_big:.4f} <= 0.03", ks_big <= 0.03),
        (f"KS(5000) < KS(500)={ks_small:.4f}", ks_big < ks_small),
    ])


def test_a3_intersection_probability():
    rng = derive_rng(100, 3)
    law = EpochLaw(0.75)
    target = stable.intersection_prob(2, 0.75)
    assert target == pytest.approx(math.pi / 4, rel=1e-12)
    est = {}
    for n in (100, 10_000):
        hits = 0
        for _ in range(10_000):
            sets = renewal.sample_return_sets(law, n, 2, rng)
            hits += np.intersect1d(sets[0], sets[1], assume_unique=True).size > 0
        est[n] = hits / 10_000
    gap_small, gap_big = abs(est[100] - target), abs(est[10_000] - target)
    report("A3", [
        (f"|est(1e4)-pi/4|={gap_big:.4f} <= 0.05", gap_big <= 0.05),
        (f"improves on n=100 ({gap_small:.4f})", gap_big < gap_small),
    ])


def test_a4_capacity_lln():
    rng = derive_rng(100, 4)
    recs = renewal.capacity_lln_experiment(MEM, LAW, [200, 2000], 1000, rng, 256)
    p_esc, p_se = renewal.escape_probability_mc(MEM, LAW, 100_000, 10_000, rng)
    gap = abs(recs[-1]["mean"] - p_esc)
    comb = 3.0 * math.hypot(recs[-1]["se"], p_se)
    report("A4", [
        (f"|mean-p_esc|={gap:.4f} <= 3se={comb:.4f} (p_esc={p_esc:.4f})",
         gap <= comb),
        (f"stdev {recs[0]['stdev']:.4f} -> {recs[-1]['stdev']:.4f} decreases",
         recs[-1]["stdev"] < recs[0]["stdev"]),
    ])


def test_a5_mittag_leffler():
    rng = derive_rng(100, 5)
    p = stable.StableParams(0.5)
    z = stable.sample_mittag_leffler(p, 1.0, rng, size=100_000)
    target = math.cos(math.pi / 4) / G(1.5)
    zscore = abs(z.mean() - target) / (z.std(ddof=1) / math.sqrt(z.size))

    # first-passage oracle: invert a discretized subordinator path
    n, grid, blk = 10_000, 10_000, 2000
    out = np.full(n, np.nan)
    cur = np.zeros(n)
    steps = np.zeros(n, dtype=int)
    alive = np.ones(n, dtype=bool)
    scale = (1.0 / grid) ** 2.0
    while alive.any():
        k = int(alive.sum())
        cs = np.cumsum(stable.sample_stable_marginal(p, rng, size=(k, blk)) * scale,
                       axis=1)
        crossed = (cur[alive, None] + cs > 1.0).any(axis=1)
        first = np.argmax(cur[alive, None] + cs > 1.0, axis=1)
        idx = np.flatnonzero(alive)
        done = idx[crossed]
        out[done] = (steps[done] + first[crossed] + 1) / grid
        cur[idx[~crossed]] += cs[~crossed, -1]
        steps[idx[~crossed]] += blk
        alive[done] = False
    ks = ks_statistic(z[:n], out)
    report("A5", [
        (f"mean z-score {zscore:.2f} <= 3 (target {target:.5f})", zscore <= 3.0),
        (f"first-passage KS={ks:.4f} <= 0.03", ks <= 0.03),
    ])


def test_a6_cardinality_limit():
    rng = derive_rng(100, 6)
    n, b = 10_000, 0.7
    th = renewal.theta_n(MEM, LAW, n)
    cards = []
    while len(cards) < 10_000:
        sets = renewal.sample_return_sets(LAW, n, 2, rng)
        common = np.intersect1d(sets[0], sets[1], assume_unique=True)
        common = common[(common > 0) & (common < b * n)]
        if common.size:
            cards.append(common.size)
    lhs = float(np.mean(cards)) / th
    q = stable.sample_Q(MEM.beta_star, rng, size=10_000)
    zz = stable.sample_mittag_leffler(stable.StableParams(MEM.beta_star),
                                      1.0 - q, rng, size=10_000)
    rhs = b ** MEM.beta_star * float(zz.mean())
    rel = abs(lhs / rhs - 1.0)
    report("A6", [(f"|lhs/rhs - 1|={rel:.3f} <= 0.10 (lhs={lhs:.3f}, rhs={rhs:.3f})",
                   rel <= 0.10)])


def test_a7_pn_ell_exponential():
    rng = derive_rng(100, 7)
    prods = []
    while len(prods) < 2000:
        draw = renewal.conditional_pn_and_elln(MEM, LAW, 10_000, (0.0, 1.0),
                                               rng, 256)
        if draw is not None:
            prods.append(draw.p_n * draw.ell_n)
    ks = ks_statistic(np.asarray(prods), lambda x: 1.0 - np.exp(-x))
    report("A7", [(f"KS(p_n*ell_n vs Exp(1))={ks:.4f} <= 0.05", ks <= 0.05)])


def test_a8_self_affinity():
    # the affine shift of the overlap construction carries one (1-beta)log a
    # per incident weight, ell_beta of them in total; the singly-shifted
    # variant is reported alongside for reference
    rng = derive_rng(100, 8)
    a = 0.5
    va, _ = limits.sample_limit_M_batch(0.6, 64, 4096, 100_000,
                                        [(0.0, a, False)], rng)
    vb, _ = limits.sample_limit_M_batch(0.6, 64, 4096, 100_000,
                                        [(0.0, 1.0, False)], rng)
    shift = MEM.ell * (1.0 - 0.6) * math.log(a)
    ks = ks_statistic(va[:, 0], vb[:, 0] + shift)
    ks_single = ks_statistic(va[:, 0], vb[:, 0] + (1.0 - 0.6) * math.log(a))
    report("A8", [
        (f"KS={ks:.4f} <= 0.02 (ell-fold shift; single-shift KS={ks_single:.4f})",
         ks <= 0.02),
    ])


def test_a9_dominance():
    rng = derive_rng(100, 9)
    res = limits.dominance_check(0.6, (0.3, 0.8), (-1.0, -0.5), 100_000, rng)
    report("A9", [
        (f"margin={res.margin_se:.1f}se > 3 (lhs={res.lhs:.4f}, rhs={res.rhs:.4f})",
         res.margin_se > 3.0),
    ])


def test_a10_window_max_trend():
    rng = derive_rng(100, 10)
    lim, _ = limits.sample_limit_M_batch(0.6, 64, 4096, 2000,
                                         [(0.0, 1.0, True)], rng)
    lim = lim[:, 0]
    ks_by_n = []
    for n in (1000, 10_000, 100_000):
        vals = np.empty(2000)
        for i in range(2000):
            path = process.sample_process(MODEL, MEM, LAW, n, rng)
            vals[i] = (path.values.max() - path.norm.b_n) / path.norm.a_n
        ks_by_n.append(ks_statistic(vals, lim))
    dec = all(b < a for a, b in zip(ks_by_n, ks_by_n[1:]))
    trend = " -> ".join(f"{k:.4f}" for k in ks_by_n)
    report("A10", [(f"KS strictly decreasing: {trend}", dec)])


def test_a11_series_truncation_and_marginal_tail():
    rng = derive_rng(100, 11)
    w = renewal.wandering_rate(LAW, 1000)
    exact_zero = all(MODEL.quantile(w / g) == 0.0 for g in (w, 1.5 * w, 100 * w))

    targets = np.array([1e-2, 1e-3, 1e-4])
    xs = MODEL.quantile(1.0 / targets)
    counts = np.zeros(3)
    total = 10_000_000
    for _ in range(10):
        x0 = process.sample_marginal(MODEL, total // 10, rng)
        counts += [(x0 > x).sum() for x in xs]
    ratios = counts / total / targets
    in_window = bool(np.all((ratios >= 0.7) & (ratios <= 1.3)))
    report("A11", [
        ("atoms beyond c*w_n contribute exactly 0", exact_zero),
        (f"tail ratios {np.round(ratios, 2)} in [0.7, 1.3]", in_window),
    ])


def test_a12_lower_bound_validity_and_big_jump():
    rng = derive_rng(100, 12)
    n = 10_000
    valid = finite = 0
    tops, extras = [], []
    for i in range(10_000):
        path = process.sample_process(MODEL, MEM, LAW, n, rng)
        rep = process.lower_bound_stat(path, (0.0, 1.0), rng, MEM, LAW)
        if rep.j_star is None:
            continue
        finite += 1
        valid += process.empirical_M(path, (0.0, 1.0), closed=False) >= rep.value
        if i < 2000:
            rat = process.big_jump_report(MODEL, path, rep)
            tops.extend(rat["top_ratios"])
            extras.append(rat["extra_vs_theta"])
    med_top, med_extra = float(np.median(tops)), float(np.median(extras))
    report("A12", [
        (f"M_n >= M_lower on {valid}/{finite} finite draws", valid == finite),
        (f"top-ratio median {med_top:.2f} in [0.2, 5]", 0.2 <= med_top <= 5.0),
        (f"extra/theta-scale median {med_extra:.2f} in [0.2, 5]",
         0.2 <= med_extra <= 5.0),
    ])


def test_a13_iid_gumbel_sanity():
    rng = derive_rng(100, 13)
    ks = {}
    for n in (10_000, 1_000_000):
        u = rng.random(100_000)
        tail_level = -np.expm1(np.log(u) / n)
        mx = MODEL.quantile(1.0 / tail_level)
        a, b = iid_gumbel_norming(MODEL, float(n))
        ks[n] = ks_statistic((mx - b) / a, lambda x: np.exp(-np.exp(-x)))
    report("A13", [
        (f"KS(1e6)={ks[1_000_000]:.4f} < KS(1e4)={ks[10_000]:.4f}",
         ks[1_000_000] < ks[10_000]),
        (f"KS(1e6) <= 0.1", ks[1_000_000] <= 0.1),
    ])

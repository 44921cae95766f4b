import math

import numpy as np
import pytest

from lrdx.harness import ks_statistic
from lrdx.process import (
    ProcessPath,
    big_jump_report,
    empirical_M,
    empirical_extremal,
    lower_bound_stat,
    remainder_sum_mean,
    remainder_sum_samples,
    remainder_tail_check,
    sample_marginal,
    sample_process,
)
from lrdx.renewal import EpochLaw, MemoryParams, wandering_rate
from lrdx.tails import TailModel

MODEL = TailModel.log_normal(2.0)
MEM = MemoryParams(2, 0.6)
LAW = EpochLaw(0.6)


def rng_(seed=0):
    return np.random.default_rng(seed)


class TestSampleProcess:
    def test_atom_count_poisson(self):
        # counting oracle: atoms arrive at unit rate below c * w_n
        n = 2000
        w = wandering_rate(LAW, n)
        r = rng_(1)
        counts = np.array([sample_process(MODEL, MEM, LAW, n, r).atom_count
                           for _ in range(2000)])
        se = math.sqrt(w / 2000)  # Poisson variance = mean
        assert abs(counts.mean() - w) < 3 * se

    def test_truncation_exactness(self):
        # arrivals at or beyond c * w_n give V = 0 exactly
        n = 500
        w = wandering_rate(LAW, n)
        for g in (w, 1.0001 * w, 10 * w):
            assert MODEL.quantile(w / g) == 0.0
        assert MODEL.quantile(w / (0.999 * w)) > 0.0

    def test_reconstruction_bit_exact(self):
        path = sample_process(MODEL, MEM, LAW, 3000, rng_(2))
        assert np.array_equal(path.rebuild_values(), path.values)

    def test_nonzero_values_at_least_one(self):
        path = sample_process(MODEL, MEM, LAW, 3000, rng_(3))
        nz = path.values[path.values > 0]
        assert np.all(nz >= 1.0)

    def test_window_stationarity(self):
        # E X_t is flat across the window (P(t in I) = 1/w_n exactly)
        n = 1000
        r = rng_(4)
        acc = np.zeros(3)
        reps = 4000
        for _ in range(reps):
            v = sample_process(MODEL, MEM, LAW, n, r).values
            acc += v[[0, n // 2, n]]
        means = acc / reps
        spread = abs(means.max() - means.min())
        assert spread < 4 * 6.0 / math.sqrt(reps)  # X_t stdev is about 6

    def test_horizon_too_small(self):
        tiny = TailModel.log_normal(2.0, c_scale=0.01)  # z0 = 100
        with pytest.raises(ValueError):
            sample_process(tiny, MEM, LAW, 10, rng_(5))


class TestMarginal:
    def test_matches_full_simulation(self):
        # the horizon-free marginal sampler agrees with X_0 from paths
        r = rng_(6)
        n = 500
        from_paths = np.array([sample_process(MODEL, MEM, LAW, n, r).values[0]
                               for _ in range(4000)])
        direct = sample_marginal(MODEL, 4000, r)
        assert abs((from_paths == 0).mean() - (direct == 0).mean()) < 0.04
        pos_a, pos_b = from_paths[from_paths > 0], direct[direct > 0]
        assert ks_statistic(pos_a, pos_b) <= 0.05

    def test_zero_probability(self):
        # P(X_0 = 0) = exp(-nu_bar(x0))
        x = sample_marginal(MODEL, 200_000, rng_(7))
        p = (x == 0).mean()
        target = math.exp(-1.0)
        assert abs(p - target) < 3 * math.sqrt(target * (1 - target) / 200_000)

    def test_tail_against_convolution_oracle(self):
        # frozen from an independent FFT compound-Poisson oracle (grid 0.01,
        # 2^22 points): P(X > x) at nu_bar(x) = 1e-2 and 1e-3
        oracle = {1e-2: 0.05660, 1e-3: 0.00810}
        x = sample_marginal(MODEL, 2_000_000, rng_(8))
        for level, target in oracle.items():
            xq = MODEL.quantile(1.0 / level)
            p = (x > xq).mean()
            se = math.sqrt(target * (1 - target) / x.size)
            assert abs(p - target) < 4 * se, level


class TestEmpiricalM:
    def test_full_window_is_global_max(self):
        path = sample_process(MODEL, MEM, LAW, 2000, rng_(9))
        assert empirical_M(path, (0.0, 1.0), closed=True) == path.values.max()

    def test_monotone_in_window(self):
        path = sample_process(MODEL, MEM, LAW, 2000, rng_(10))
        assert empirical_M(path, (0.2, 0.6)) <= empirical_M(path, (0.1, 0.9))

    def test_empty_window_error(self):
        path = sample_process(MODEL, MEM, LAW, 100, rng_(11))
        with pytest.raises(ValueError):
            empirical_M(path, (0.501, 0.505))


class TestEmpiricalExtremal:
    def test_nondecreasing_and_endpoint(self):
        path = sample_process(MODEL, MEM, LAW, 2000, rng_(12))
        grid = [0.25, 0.5, 0.75, 1.0]
        vals = empirical_extremal(path, grid)
        assert np.all(np.diff(vals) >= 0)
        assert vals[-1] == path.values.max()


class TestLowerBound:
    def test_never_exceeds_window_max(self):
        r = rng_(13)
        for _ in range(200):
            path = sample_process(MODEL, MEM, LAW, 1000, r)
            rep = lower_bound_stat(path, (0.0, 1.0), r, MEM, LAW)
            if rep.j_star is not None:
                assert empirical_M(path, (0.0, 1.0), closed=False) >= rep.value
                assert rep.j_extra > rep.j_star[-1]

    def test_delta0_validation(self):
        path = sample_process(MODEL, MEM, LAW, 1000, rng_(14))
        with pytest.raises(ValueError):
            lower_bound_stat(path, (0.0, 1.0), rng_(14), MEM, LAW, delta0=0.5)

    def test_delta0_cap_degenerates_at_desk_scale(self):
        # floor(n^delta0) < m for admissible delta0 at reachable n, so the
        # capped search reports the infinite sentinel
        path = sample_process(MODEL, MEM, LAW, 1000, rng_(15))
        rep = lower_bound_stat(path, (0.0, 1.0), rng_(15), MEM, LAW, delta0=0.03)
        assert rep.j_star is None
        assert rep.value == -math.inf

    def test_finite_frequency_grows_with_cap(self):
        r = rng_(16)
        n = 2000
        finite = {2: 0, 8: 0, None: 0}
        reps = 300
        for _ in range(reps):
            path = sample_process(MODEL, MEM, LAW, n, r)
            for cap in finite:
                rep = lower_bound_stat(path, (0.0, 1.0), r, MEM, LAW, index_cap=cap)
                finite[cap] += rep.j_star is not None
        assert finite[2] <= finite[8] <= finite[None]
        assert finite[None] / reps > 0.95

    def test_normalized_lower_bound_near_limit(self):
        # the dominating-atom statistic lands on the limit law already at
        # moderate n already (the fast-converging route to the limit law)
        from lrdx.limits import sample_limit_M_batch

        r = rng_(17)
        lim, _ = sample_limit_M_batch(0.6, 64, 2048, 4000, [(0.0, 1.0, True)], r)
        lim = lim[:, 0]
        vals = []
        for _ in range(800):
            path = sample_process(MODEL, MEM, LAW, 2000, r)
            rep = lower_bound_stat(path, (0.0, 1.0), r, MEM, LAW)
            if rep.j_star is not None:
                vals.append((rep.value - path.norm.b_n) / path.norm.a_n)
        ks = ks_statistic(np.asarray(vals), lim)
        noise = 1.36 * math.sqrt(1 / len(vals) + 1 / len(lim))
        assert ks <= 2.5 * noise


class TestBigJump:
    def test_ratio_scales(self):
        r = rng_(18)
        tops, extras = [], []
        for _ in range(400):
            path = sample_process(MODEL, MEM, LAW, 2000, r)
            rep = lower_bound_stat(path, (0.0, 1.0), r, MEM, LAW)
            if rep.j_star is None:
                continue
            rat = big_jump_report(MODEL, path, rep)
            tops.extend(rat["top_ratios"])
            extras.append(rat["extra_vs_theta"])
        assert 0.2 <= np.median(tops) <= 5.0
        assert 0.2 <= np.median(extras) <= 5.0

    def test_extra_scale_separates_from_leading(self):
        # the extra magnitude shrinks against V(w_n) as the window grows
        r = rng_(19)
        medians = []
        for n in (500, 8000):
            vals = []
            for _ in range(300):
                path = sample_process(MODEL, MEM, LAW, n, r)
                rep = lower_bound_stat(path, (0.0, 1.0), r, MEM, LAW)
                if rep.j_star is not None:
                    vals.append(big_jump_report(MODEL, path, rep)["extra_vs_w"])
            medians.append(float(np.median(vals)))
        assert medians[1] < medians[0]


class TestNormingSanity:
    def test_positive_and_increasing_along_grid(self):
        from lrdx.renewal import theta_n, wandering_rate
        from lrdx.tails import lrd_norming

        norms = []
        for n in (1000, 10_000, 100_000):
            w = wandering_rate(LAW, n)
            th = theta_n(MEM, LAW, n)
            norms.append(lrd_norming(MODEL, MEM, w, th, n=n))
        assert all(ns.a_n > 0 and ns.b_n > 0 for ns in norms)
        assert all(x.a_n < y.a_n and x.b_n < y.b_n
                   for x, y in zip(norms, norms[1:]))
        assert all(x.b_n / x.a_n < y.b_n / y.a_n for x, y in zip(norms, norms[1:]))


class TestRemainder:
    def test_huge_epsilon_zero(self):
        assert remainder_tail_check(MODEL, MEM, LAW, 1000, 100.0, rng_(19),
                                    reps=200) == 0.0

    def test_exceedance_probability_decreasing_in_n(self):
        # the exceedance probability falls with n; the n-scaled statistic
        # itself only turns over far beyond desk scale (the near-cutoff atom
        # size V(w_n/n^r)/V(w_n) decays like exp(-c sqrt(log n)))
        r = rng_(20)
        f1 = remainder_tail_check(MODEL, MEM, LAW, 1000, 0.35, r, reps=4000)
        f2 = remainder_tail_check(MODEL, MEM, LAW, 10_000, 0.35, r, reps=4000)
        assert f2 / 10_000 <= f1 / 1000

    def test_compound_poisson_mean_oracle(self):
        # MC mean of the arrival-cut remainder matches the numeric integral
        r = rng_(21)
        n = 2000
        rr = 0.2
        sums = remainder_sum_samples(MODEL, MEM, LAW, n, r, 30_000, r=rr,
                                     cut="gamma")
        target = remainder_sum_mean(MODEL, LAW, n, rr)
        se = sums.std(ddof=1) / math.sqrt(sums.size)
        assert abs(sums.mean() - target) < 3 * se

    def test_invalid_r(self):
        with pytest.raises(ValueError):
            remainder_sum_samples(MODEL, MEM, LAW, 1000, rng_(22), 10, r=0.7)

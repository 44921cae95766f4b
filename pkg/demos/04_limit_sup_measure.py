"""The limit random sup-measure: queries, affinity, and dominance.

Samples the truncated weighted-overlap construction, shows window queries
and the extremal path, checks the affine rescaling law and the strict
dominance over the time-changed Gumbel extremal process.
"""

import math

import numpy as np

from lrdx.harness import ks_statistic
from lrdx.limits import (dominance_check, limit_extremal_path,
                         sample_gumbel_extremal, sample_limit_M,
                         sample_limit_M_batch, sample_sup_measure)

rng = np.random.default_rng(11)
beta, m = 0.6, 2

print("one truncated sample (k = 64 arrivals, resolution 4096)")
s = sample_sup_measure(beta, 64, 4096, rng)
for win in [(0.0, 0.25), (0.0, 0.5), (0.0, 1.0)]:
    print(f"  M({win}) = {sample_limit_M(s, win):8.4f}")
print(f"  extremal path at (0.25, 0.5, 1.0): "
      f"{np.round(limit_extremal_path(s, [0.25, 0.5, 1.0]), 4)}")

print("\naffine rescaling: M(aB) against M(B) + ell (1-beta) log a, a = 0.5")
va, _ = sample_limit_M_batch(beta, 64, 4096, 8000, [(0.0, 0.5, False)], rng)
vb, _ = sample_limit_M_batch(beta, 64, 4096, 8000, [(0.0, 1.0, False)], rng)
shift = m * (1 - beta) * math.log(0.5)
print(f"  KS with the ell-fold shift:   {ks_statistic(va[:, 0], vb[:, 0] + shift):.4f}")
print(f"  KS with a single-factor shift: "
      f"{ks_statistic(va[:, 0], vb[:, 0] + shift / m):.4f}  (rejected)")

print("\nGumbel extremal process (exact finite-dimensional sampling)")
paths = sample_gumbel_extremal([0.5, 1.0], rng, size=100_000)
print(f"  P(E0(1) <= 0) = {(paths[:, 1] <= 0).mean():.5f}   target e^-1 = "
      f"{math.exp(-1):.5f}")

print("\njoint-CDF dominance over the time-changed Gumbel process")
res = dominance_check(beta, (0.3, 0.8), (-1.0, -0.5), 10_000, rng)
print(f"  overlap regime beta=0.6:  lhs {res.lhs:.4f} > rhs {res.rhs:.4f} "
      f"({res.margin_se:.0f} SE)")
res2 = dominance_check(0.4, (0.3, 0.8), (-1.0, -0.5), 10_000, rng, m=1)
print(f"  single regime beta=0.4:   lhs {res2.lhs:.4f} vs rhs {res2.rhs:.4f} "
      f"(agree: time-change formula)")

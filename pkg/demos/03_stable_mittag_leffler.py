"""Stable subordinator marginals, Mittag-Leffler draws, regenerative lattices."""

import math

import numpy as np
from scipy.special import gamma as G

from lrdx.stable import (StableParams, sample_mittag_leffler, sample_Q,
                         sample_regenerative_lattice, sample_stable_marginal)

rng = np.random.default_rng(7)

print("Laplace transform of the positive stable marginal")
for b in (0.2, 0.5, 0.8):
    y = sample_stable_marginal(StableParams(b), rng, size=200_000)
    emp = float(np.exp(-y).mean())
    target = math.exp(-1.0 / math.cos(math.pi * b / 2))
    print(f"  beta={b}: E e^-Y = {emp:.5f}   target {target:.5f}")

print("\nMittag-Leffler value at t = 1")
z = sample_mittag_leffler(StableParams(0.5), 1.0, rng, size=200_000)
print(f"  mean {z.mean():.5f}   target cos(pi/4)/Gamma(1.5) = "
      f"{math.cos(math.pi / 4) / G(1.5):.5f}")
zb = sample_mittag_leffler(StableParams(0.5), 0.3, rng, size=200_000)
print(f"  self-similarity: mean Z(0.3) = {zb.mean():.5f} vs 0.3^0.5 * mean Z(1) = "
      f"{0.3 ** 0.5 * z.mean():.5f}")

print("\nfirst-hit location law")
q = sample_Q(0.2, rng, size=200_000)
print(f"  median {np.median(q):.5f}   target 0.5^1.25 = {0.5 ** 1.25:.5f}")

print("\nregenerative lattice at resolution 4096 (shifted window law)")
s = sample_regenerative_lattice(StableParams(0.6), 4096, rng)
print(f"  {len(s.points)} points, first at {s.points[0] / 4096:.4f}, "
      f"last at {s.points[-1] / 4096:.4f}")

"""Return-time sets, their intersections, and the escape probability.

Shows the delayed-window sampler, the first-hit law of the two-fold
intersection, the nonempty-intersection probability against its closed
form, and the capacity-based escape estimators.
"""

import numpy as np

from lrdx.harness import ks_statistic
from lrdx.renewal import (EpochLaw, MemoryParams, capacity_mc,
                          escape_probability_mc, intersect_arrays,
                          sample_return_sets, theta_n, wandering_rate)
from lrdx.stable import intersection_prob

rng = np.random.default_rng(2024)
mem = MemoryParams(2, 0.6)
law = EpochLaw(0.6)

print("wandering rate and simultaneous-renewal scale")
for n in (100, 10_000, 1_000_000):
    print(f"  n={n:>8}: w_n = {wandering_rate(law, n):10.3f}   "
          f"theta_n = {theta_n(mem, law, n):8.4f}")

print("\nfirst-hit law of the pair intersection (conditional on nonempty)")
n = 5000
mins = []
while len(mins) < 3000:
    sets = sample_return_sets(law, n, 2, rng)
    common = intersect_arrays(sets)
    if common.size:
        mins.append(common[0] / n)
ks = ks_statistic(np.asarray(mins), lambda q: q ** (1 - mem.beta_star))
print(f"  KS against q^{1 - mem.beta_star:.1f}: {ks:.4f} over {len(mins)} draws")

print("\nnonempty-intersection probability vs the closed form")
target = intersection_prob(2, 0.75)
law75 = EpochLaw(0.75)
for n in (100, 10_000):
    hits = sum(intersect_arrays(sample_return_sets(law75, n, 2, rng)).size > 0
               for _ in range(4000))
    print(f"  beta=0.75, n={n:>6}: {hits / 4000:.4f}   (limit pi/4 = {target:.4f};"
          " prelimit approaches from below)")

print("\nescape probability of m+1 ranges and a sample capacity")
est, se = escape_probability_mc(mem, law, 10_000, 3000, rng)
print(f"  P(three ranges meet only at 0), horizon 1e4: {est:.4f} +- {se:.4f}")
sets = sample_return_sets(law, 2000, 2, rng)
common = intersect_arrays(sets)
if common.size:
    cap = capacity_mc(common, law, 512, rng)
    print(f"  capacity of a sampled intersection ({common.size} points): {cap:.3f}")

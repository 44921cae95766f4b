"""Tour of the moderately heavy tail families.

Evaluates the two closed-form families, their auxiliary functions and
quantiles, and the norming constants used by the window experiments.
"""

import math

import numpy as np

from lrdx.renewal import MemoryParams
from lrdx.tails import TailModel, iid_gumbel_norming, lrd_norming, pitman_integral

ln2 = TailModel.log_normal(2.0)
sln = TailModel.super_log_normal(1, 0.5)

print("log-normal family, gamma = 2")
print(f"  g(e^2) = {ln2.log_tail(math.e ** 2):.6f}  (tail {ln2.tail(math.e ** 2):.6f})")
print(f"  h(e^2) = {ln2.aux_h(math.e ** 2):.6f},  h(e^4) = {ln2.aux_h(math.e ** 4):.6f}")
print(f"  V(e^9) = {ln2.quantile(math.e ** 9):.6f} = e^3")
print(f"  zeta(4) = {ln2.zeta(4.0):.6f}  (RV index 1/gamma = 0.5)")

print("\nsuper-log-normal family, depth 1, gamma = 0.5")
print(f"  support threshold x0 = {sln.x0}, quantile threshold z0 = {sln.z0:.4f}")
x = math.exp(math.e ** 2)
print(f"  g(e^(e^2)) = {sln.log_tail(x):.4f}")

print("\nsubexponentiality integral (truncated)")
for xm in (1e2, 1e3, 1e4):
    print(f"  up to {xm:8.0f}: {pitman_integral(ln2, xm):.8f}")

print("\ninverse-pair residual |nu_bar(V(z)) z - 1| over 12 decades")
zs = np.logspace(1, 12, 12)
print(f"  max residual: {np.max(np.abs(ln2.nu_bar(ln2.quantile(zs)) * zs - 1)):.2e}")

print("\nnorming constants")
a, b = iid_gumbel_norming(ln2, math.e ** 16)
print(f"  iid maxima at n = e^16: b = {b:.4f} (= e^4), a = {a:.4f} (= e^4/8)")
mem = MemoryParams(2, 0.6)
ns = lrd_norming(ln2, mem, math.e ** 9, math.e ** 4, n=1000)
print(f"  window norming at (w, theta) = (e^9, e^4): b = {ns.b_n:.4f}, a = {ns.a_n:.4f}")

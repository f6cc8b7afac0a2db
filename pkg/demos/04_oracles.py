"""Exact random-walk laws by dynamic programming and enumeration.

Two walks from the four-corner start law fail to meet in n steps with
probability of order 1/n; a walk from that law first hits 0 after step n
with probability of order 1/sqrt(n).
"""

import numpy as np

from iltlab import oracles
from iltlab.stats import ordinary_line

print("P(Q_1 = 0) by enumeration:", oracles.no_intersection_enumerated(1))
for n in (1, 2, 4, 8):
    print(f"  n = {n}: enumeration {oracles.no_intersection_enumerated(n):.6f}  DP {oracles.no_intersection_exact(n):.6f}")

ns = np.array([32, 64, 128, 256, 512])
p = np.array([oracles.no_intersection_exact(int(n)) for n in ns])
print(f"no-intersection log-log slope on [32, 512]: {ordinary_line(np.log(ns), np.log(p)).slope:.4f}")

ns = np.array([64, 128, 256, 512, 1024])
tail = oracles.hitting_tail_mu(0, ns)
print(f"hitting-tail log-log slope on [64, 1024]:   {ordinary_line(np.log(ns), np.log(tail)).slope:.4f}")

print(f"F(3, 5): brute force {oracles.f_event_probability_bruteforce(3, 5):.5f} <= bound {oracles.f_event_bound(3, 5):.5f}")
print(f"tau_1 survival at t = 4, 8: {oracles.tau1_survival(np.array([4.0, 8.0]))}")

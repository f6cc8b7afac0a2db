"""Brownian paths from counter-based streams, and a first look at their law.

Same (seed, index) gives the same path; a different index gives an
independent one.  The fraction of paths staying above -1 up to time 1
should sit near 2*Phi(1) - 1, slightly high because the grid misses
crossings between sample times.
"""

import numpy as np

from iltlab import RngStream, StartLaw, sample_pair, sample_path
from iltlab.oracles import reflection_probability

root = RngStream(7)
a = sample_path(1024, 1.0, 0.0, root.child(0))
b = sample_path(1024, 1.0, 0.0, root.child(0))
c = sample_path(1024, 1.0, 0.0, root.child(1))
print("same stream, same path:     ", np.array_equal(a.values, b.values))
print("different index, same path: ", np.array_equal(a.values, c.values))

reps = 20_000
alive = sum(sample_path(1024, 1.0, 0.0, root.child(10 + r)).values.min() > -1 for r in range(reps))
print(f"P(B stays above -1 on [0,1]): {alive / reps:.4f}  (continuum {reflection_probability(1.0, 1.0):.4f})")

pair = sample_pair(16, 1.0, StartLaw.mu(), root.child(99))
print("mu start pair:", pair.start_pair)

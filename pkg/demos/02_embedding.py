"""Exit-time embedding: unit exits of a Brownian path form a simple random walk.

Exit times are i.i.d. with mean 1 and variance 2/3.  Here they are read off
simulated paths and compared with exact draws from the series law.  A grid
only sees an exit at the next sample time, so grid exits run late by a
margin that shrinks like sqrt(dt).
"""

import numpy as np
from scipy import stats

from iltlab import RngStream
from iltlab.embedding import extract_walk, sample_exit_times, tau_concentration_check
from iltlab.paths import sample_path_until_exits

root = RngStream(11)
path = sample_path_until_exits(20, 1.0 / 4096, 0.0, root.child(0))
walk = extract_walk(path)
print("walk positions:", walk.lattice().tolist())
print("exit times:    ", np.round(np.diff(walk.tau), 3).tolist())

exact = sample_exit_times(200_000, root.child(1))
print(f"exact tau: mean {exact.mean():.4f}, variance {exact.var():.4f} (oracle 1, 2/3)")

for steps in (1024, 16384):
    grid = np.array([extract_walk(sample_path_until_exits(1, 1.0 / steps, 0.0, root.child(steps + r))).tau[1]
                     for r in range(3000)])
    ks = stats.ks_2samp(grid, exact)
    print(f"grid exits at dt = 1/{steps}: mean {grid.mean():.4f}, KS p vs exact = {ks.pvalue:.3f}")

chk = tau_concentration_check(100, 0.5, 20_000, root.child(2))
print(f"P(|tau_100 - 100| >= 50) = {chk.empirical_prob:.2e}, Chebyshev bound {chk.chebyshev_bound:.4f}")

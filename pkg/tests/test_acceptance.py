"""Acceptance criteria at their stated scale and tolerance.

Run under pytest (one test per criterion, summary lines in the terminal
report) or directly with ``python3 tests/test_acceptance.py`` for the
pass/fail lines alone.  Criterion 12 names quantities that are reported by
exploratory probes only; it carries no tolerance and has no test here.
"""

from __future__ import annotations

import math
import sys
import time
from functools import lru_cache

import numpy as np
import pytest
from scipy import stats as sps

from iltlab import lab, oracles
from iltlab.embedding import (
    extract_walk,
    h_statistic,
    sample_exit_times,
    tau_concentration_check,
)
from iltlab.estimators import EstimatorConfig, mutual_binned_values, self_binned_values
from iltlab.paths import BrownianPair, sample_pair, sample_path, sample_path_until_exits, StartLaw
from iltlab.parallel import map_replicates
from iltlab.rng import RngStream
from iltlab.stats import wilson_interval

SEED = 0
RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = (ok, detail)
    line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, file=sys.__stdout__, flush=True)


# ---------------------------------------------------------------------------
# shared sample: 2e5 mutual ILT replicates at 4096 steps


@lru_cache(maxsize=1)
def small_dev_curve() -> lab.DeviationCurve:
    sim = lab.SimConfig(n_steps=4096)
    return lab.small_deviation_curve(lab.log_grid(0.02, 0.3), 200_000, sim, RngStream(SEED).child(1))


def criterion_1():
    curve = small_dev_curve()
    fit = lab.fit_exponent(curve, (0.02, 0.3))
    ok = 0.567 <= fit.slope <= 0.767
    return ok, f"small-deviation slope {fit.slope:.4f} +- {fit.stderr:.4f} on [0.02, 0.3] (need [0.567, 0.767])"


def criterion_2():
    sim = lab.SimConfig(n_steps=8192)
    vals = lab.ilt_samples(sim, 100_000, RngStream(SEED).child(2))
    target = 0.44058
    mean = float(vals.mean())
    rel = abs(mean - target) / target
    ok = rel <= 0.03
    return ok, (
        f"mean mutual ILT {mean:.5f} (se {vals.std() / math.sqrt(vals.size):.5f}); "
        f"{100 * rel:.2f}% from 0.44058 (quadrature {oracles.expected_mutual_ilt(1.0):.5f}); need <= 3%"
    )


def criterion_3():
    sim = lab.SimConfig(n_steps=4096)
    stream = RngStream(SEED).child(3)
    # both calls draw identical arms from the same stream; only the rescaling differs
    good = lab.scaling_law_test(2.0, 20_000, sim, stream, exponent=1.5)
    wrong = lab.scaling_law_test(2.0, 20_000, sim, stream, exponent=1.0)
    ok = good.p_value > 0.01 and wrong.p_value < 1e-3
    return ok, f"KS p-value t^1.5: {good.p_value:.4f} (need > 0.01); t^1 control: {wrong.p_value:.2e} (need < 1e-3)"


def _survivor_chunk(args, start, stop):
    stream, n = args
    out = np.empty(stop - start, dtype=bool)
    for i, r in enumerate(range(start, stop)):
        p = sample_path(n, 1.0, 0.0, stream.child(r))
        out[i] = p.values.min() > -1.0
    return out


def criterion_4():
    n = 16384
    reps = 100_000
    alive = map_replicates(_survivor_chunk, (RngStream(SEED).child(4), n), reps)
    count = int(alive.sum())
    p_hat = count / reps
    lo, hi = wilson_interval(count, reps)
    target = oracles.reflection_probability(1.0, 1.0)
    tol = max(3 * (hi - lo) / 2, 0.01)
    ok = abs(p_hat - target) <= tol
    return ok, f"P(1 + B > 0 on [0,1]) = {p_hat:.5f} vs {target:.6f}; |diff| {abs(p_hat - target):.5f} <= {tol:.5f}"


def criterion_5():
    stream = RngStream(SEED).child(5)
    tau = sample_exit_times(1_000_000, stream.child(0))
    mean, var = float(tau.mean()), float(tau.var())
    slope = lab.tau_tail_slope(np.linspace(4.0, 8.0, 9))
    grid = lab.grid_exit_samples(20_000, 1.0 / 16384, stream.child(1))
    # exit side is a fair coin independent of tau for the exact law
    signs = 2 * stream.child(2).generator().integers(0, 2, size=tau.size) - 1
    ks = sps.ks_2samp(grid[:, 0] * grid[:, 1], tau * signs)
    ok_mean = abs(mean - 1) <= 0.01
    ok_var = abs(var - 2 / 3) / (2 / 3) <= 0.03
    ok_slope = abs(slope - math.pi**2 / 8) / (math.pi**2 / 8) <= 0.01
    ok_ks = ks.pvalue > 0.01
    return bool(ok_mean and ok_var and ok_slope and ok_ks), (
        f"tau mean {mean:.4f}, var {var:.4f}; series slope {slope:.5f} vs {math.pi ** 2 / 8:.5f}; "
        f"grid-vs-exact signed KS p {ks.pvalue:.3f}"
    )


def criterion_6():
    curve, fit = lab.no_intersection_decay([32, 45, 64, 90, 128, 181, 256, 362, 512])
    p1 = oracles.no_intersection_enumerated(1)
    ok = abs(fit.slope + 1) <= 0.1 and p1 == 5 / 8
    return ok, f"exact no-intersection slope {fit.slope:.4f} on [32, 512]; P(Q_1 = 0) = {p1} by enumeration"


def criterion_7():
    n = np.unique(np.round(np.geomspace(64, 1024, 9)).astype(int))
    fit = lab.hitting_tail_decay(0, n)
    ok = abs(fit.slope + 0.5) <= 0.05
    return ok, f"hitting-tail slope {fit.slope:.4f} for z = 0 on [64, 1024]"


def criterion_8():
    pmfs = {z: oracles.hitting_pmf_mu(z, 10) for z in range(-2, 3)}
    worst = -math.inf
    total = 0.0
    for rho in range(1, 11):
        for l in range(rho, 11):
            p = oracles.f_event_probability_bruteforce(rho, l)
            b = oracles.f_event_bound(rho, l, pmfs)
            worst = max(worst, p - b)
            total += b
    ok = worst <= 1e-15 and total <= 5
    return ok, f"max P(F) - bound = {worst:.3e} over rho <= l <= 10; partial double sum {total:.4f} <= 5"


def criterion_9():
    stream = RngStream(SEED).child(9)
    n, dt, reps = 8, 1.0 / 4096, 200
    h_ok = 0
    checked = 0
    for r in range(reps):
        rs = stream.child(r)
        b = sample_path_until_exits(n + 1, dt, 0.0, rs.child(0))
        bt = sample_path_until_exits(n + 1, dt, 0.0, rs.child(1))
        pair = BrownianPair(b, bt, (0.0, 0.0))
        w, wt = extract_walk(b), extract_walk(bt)
        for cfg in (EstimatorConfig(), EstimatorConfig("mollified")):
            hs = h_statistic(pair, w, wt, n, cfg)
            h_ok += hs.value <= hs.whole + 1e-12 * max(1.0, hs.whole)
            checked += 1
    am_ok = 0
    am_reps = 2000
    for r in range(am_reps):
        pair = sample_pair(4096, 1.0, StartLaw.point(), stream.child(10_000 + r))
        x, y = pair.path_b.values, pair.path_bt.values
        h = 4 / 64
        m = mutual_binned_values(x, y, 1 / 4096, h)
        s = 0.5 * (self_binned_values(x, 1 / 4096, h) + self_binned_values(y, 1 / 4096, h))
        am_ok += m <= s * (1 + 1e-12)
    ok = h_ok == checked and am_ok == am_reps
    return ok, f"H_n <= window ILT on {h_ok}/{checked} pair-configs; AM-GM on {am_ok}/{am_reps} replicates"


def criterion_10():
    res = tau_concentration_check(100, 0.5, 100_000, RngStream(SEED).child(10))
    ok = res.empirical_prob <= res.chebyshev_bound
    return ok, f"P(|tau_100 - 100| >= 50) = {res.empirical_prob:.2e} <= {res.chebyshev_bound:.5f}"


def criterion_11():
    curve = small_dev_curve()
    sim = lab.SimConfig(n_steps=4096)
    reports = lab.negative_moment_diagnostic(curve.samples, [1 / 3, 1.0], lab.estimator_floor(sim), min_size=100_000)
    third, one = reports
    ok = third.verdict == "stabilizing" and one.verdict == "divergent"
    return ok, (
        f"p=1/3: {third.verdict} (change {third.last_change:.3f}, share {third.max_share:.4f}); "
        f"p=1: {one.verdict} (change {one.max_change:.3f}, share {one.max_share:.3f})"
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k]()
    record(k, ok, f"{detail}  [{time.perf_counter() - t0:.0f}s]")
    assert ok, detail


def main() -> int:
    failed = 0
    for k in sorted(CRITERIA):
        t0 = time.perf_counter()
        ok, detail = CRITERIA[k]()
        record(k, ok, f"{detail}  [{time.perf_counter() - t0:.0f}s]")
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

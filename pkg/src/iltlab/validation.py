"""Fast invariant checks across all modules, run by ``iltlab validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracles
from .embedding import (
    extract_walk,
    h_statistic,
    intersections,
    sample_walk_exact,
)
from .estimators import (
    EstimatorConfig,
    kernel_pair_sum,
    kernel_value,
    mutual_ilt_binned,
    occupation,
    self_ilt,
)
from .lab import DeviationCurve, curve_from_samples, fit_exponent
from .paths import BrownianPair, StartLaw, sample_pair, sample_path, sample_path_until_exits
from .rng import RngStream
from .stats import wilson_interval


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rng_determinism():
    a = RngStream(7, 3).child(1).generator().standard_normal(8)
    b = RngStream(7, 3).child(1).generator().standard_normal(8)
    c = RngStream(7, 3).child(2).generator().standard_normal(8)
    return np.array_equal(a, b) and not np.array_equal(a, c), "same coordinates repeat, siblings differ"


def _path_increments():
    p = sample_path(1 << 16, 1.0, 0.0, RngStream(11))
    var = float(np.var(np.diff(p.values)) * p.n_steps)
    return abs(var - 1.0) < 0.03, f"increment variance x n = {var:.4f}"


def _exit_law_moments():
    mean, var = oracles.tau1_moments()
    return abs(mean - 1) < 1e-8 and abs(var - 2 / 3) < 1e-8, f"mean {mean:.10f}, var {var:.10f}"


def _exit_law_seam():
    law = oracles.DEFAULT_EXIT_LAW
    gap = abs(law.survival_spectral(0.5) - law.survival_images(0.5))
    return gap < 1e-12, f"series gap at crossover {gap:.2e}"


def _exit_law_inverse():
    law = oracles.DEFAULT_EXIT_LAW
    u = np.array([0.999, 0.5, 0.1, 1e-4])
    t = np.array([law.inverse_survival(x) for x in u])
    err = float(np.max(np.abs(law.survival(t) - u)))
    return err < 1e-8, f"max |S(S^-1(u)) - u| = {err:.2e}"


def _no_intersection_oracles():
    worst = max(abs(oracles.no_intersection_exact(n) - oracles.no_intersection_enumerated(n)) for n in range(1, 8))
    p1 = oracles.no_intersection_exact(1)
    return worst < 1e-12 and p1 == 0.625, f"DP vs enumeration {worst:.1e}; P(Q_1 = 0) = {p1}"


def _range_law_marginals():
    t = oracles.range_law(12, 0)
    first, pmf = oracles.max_law(12, 0)
    mm = t.max_marginal()
    err = max(abs(mm.get(first + i, 0.0) - p) for i, p in enumerate(pmf))
    return abs(t.table.sum() - 1) < 1e-12 and err < 1e-12, f"mass {t.table.sum():.15f}, max-law gap {err:.1e}"


def _f_event_chain():
    pmfs = {z: oracles.hitting_pmf_mu(z, 10) for z in range(-2, 3)}
    ok = True
    total = 0.0
    for rho in range(1, 11):
        for l in range(rho, 11):
            bound = oracles.f_event_bound(rho, l, pmfs)
            total += bound
            ok &= oracles.f_event_probability_bruteforce(rho, l) <= bound + 1e-15
    return ok and total <= 5, f"partial double sum {total:.4f}"


def _hitting_tail():
    tail = oracles.hitting_tail_mu(0, [1, 2, 3, 4, 8, 16])
    mono = bool(np.all(np.diff(tail) <= 0))
    return mono and tail[1] == 0.5, f"P(T_0 >= 2) = {tail[1]}"


def _estimator_symmetry():
    pair = sample_pair(2048, 1.0, StartLaw.point(), RngStream(13))
    a = mutual_ilt_binned(pair.path_b, pair.path_bt).value
    b = mutual_ilt_binned(pair.path_bt, pair.path_b).value
    return math.isclose(a, b, rel_tol=1e-12), f"I(B, B~) = {a:.6g}, I(B~, B) = {b:.6g}"


def _am_gm():
    pair = sample_pair(2048, 1.0, StartLaw.point(), RngStream(17))
    h = 4 * math.sqrt(pair.path_b.dt)
    m = mutual_ilt_binned(pair.path_b, pair.path_bt, h).value
    s = 0.5 * (self_ilt(pair.path_b, h).value + self_ilt(pair.path_bt, h).value)
    return m <= s + 1e-12, f"mutual {m:.5g} <= mean self {s:.5g}"


def _occupation_mass():
    p = sample_path(1000, 1.0, 0.3, RngStream(19))
    occ = occupation(p, 0.1)
    return abs(occ.total - 1.0) < 1e-12, f"occupation mass {occ.total:.15f}"


def _kernel_sum_exact():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=300), rng.normal(size=250)
    fast = kernel_pair_sum(x, y, 0.2)
    slow = float(kernel_value(x[:, None] - y[None, :], 0.2).sum())
    return math.isclose(fast, slow, rel_tol=1e-10), f"prefix-sum {fast:.10g} vs direct {slow:.10g}"


def _h_statistic_bound():
    ok = True
    for r in range(5):
        rs = RngStream(23, r)
        b = sample_path_until_exits(6, 1 / 2048, 0.0, rs.child(0))
        bt = sample_path_until_exits(6, 1 / 2048, 0.0, rs.child(1))
        pair = BrownianPair(b, bt, (0.0, 0.0))
        hs = h_statistic(pair, extract_walk(b), extract_walk(bt), 5, EstimatorConfig())
        ok &= hs.value <= hs.whole + 1e-12
    return ok, "H_5 <= whole-window ILT on 5 pairs"


def _embedded_walk():
    w = sample_walk_exact(200, 0.0, RngStream(29))
    steps = np.diff(w.s_values)
    ok = np.all(np.abs(steps) == 1) and np.all(np.diff(w.tau) > 0)
    rec = intersections(w.s_values, w.s_values, 20)
    return bool(ok) and rec.q_n >= 20, "unit steps, increasing exit times"


def _grid_snap():
    p = sample_path_until_exits(20, 1 / 4096, 0.0, RngStream(31))
    w = extract_walk(p)
    ok = np.all(np.abs(np.diff(w.s_values)) == 1)
    return bool(ok), "grid walk takes unit steps on the lattice"


def _curve_invariants():
    rng = np.random.default_rng(1)
    s = rng.exponential(size=5000)
    c = curve_from_samples(s, np.geomspace(0.01, 3, 20))
    mono = bool(np.all(np.diff(c.counts) >= 0))
    brackets = all(p.ci_low <= p.p_hat <= p.ci_high for p in c.points)
    lo, hi = wilson_interval(0, 100)
    return mono and brackets and lo == 0.0 and hi > 0, "monotone counts, Wilson intervals bracket p_hat"


def _fit_recovery():
    x = np.geomspace(0.01, 1, 12)
    c = DeviationCurve.exact("epsilon", x, x**0.5)
    f = fit_exponent(c)
    return abs(f.slope - 0.5) < 1e-6, f"slope {f.slope:.9f}"


CHECKS = {
    "rng.determinism": _rng_determinism,
    "paths.increment_variance": _path_increments,
    "oracles.exit_moments": _exit_law_moments,
    "oracles.series_seam": _exit_law_seam,
    "oracles.inverse_survival": _exit_law_inverse,
    "oracles.no_intersection": _no_intersection_oracles,
    "oracles.range_law": _range_law_marginals,
    "oracles.f_event_chain": _f_event_chain,
    "oracles.hitting_tail": _hitting_tail,
    "estimators.symmetry": _estimator_symmetry,
    "estimators.am_gm": _am_gm,
    "estimators.occupation_mass": _occupation_mass,
    "estimators.kernel_sum": _kernel_sum_exact,
    "embedding.h_bound": _h_statistic_bound,
    "embedding.exact_walk": _embedded_walk,
    "embedding.grid_snap": _grid_snap,
    "lab.curve": _curve_invariants,
    "lab.fit_recovery": _fit_recovery,
}


def run_checks(names=None) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS.items():
        if names and name not in names:
            continue
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(passed), detail))
    return out

"""Replicate experiments: small-deviation curves, exponent fits and diagnostics.

Each experiment draws replicate ``r`` from ``stream.child(r)`` and reduces the
replicates to integer counts, so the reported curves are reproducible for a
fixed seed and independent of how many workers share the load.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy import stats as sps

from . import oracles
from .embedding import block_ilt, extract_walk, sample_exit_times
from .errors import (
    CalibrationFailure,
    DegenerateConfiguration,
    FitWindowError,
    InvalidArgument,
    InvalidConfiguration,
)
from .estimators import (
    EstimatorConfig,
    kernel_pair_sum,
    mutual_binned_values,
    mutual_binned_values_2d,
    self_binned_values,
)
from .parallel import map_replicates
from .paths import (
    PATH_B_STREAM,
    PATH_BT_STREAM,
    START_LAW_STREAM,
    BrownianPair,
    StartLaw,
    brownian_values,
    sample_path_until_exits,
)
from .rng import RngStream
from .stats import CI_LEVEL, ordinary_line, weighted_line, wilson_interval

MIN_FIT_COUNT = 20
FLOOR_FACTOR = 5.0
POINTS_PER_DECADE = 12
DEFAULT_EPS_WINDOW = (0.02, 0.3)


@dataclass(frozen=True)
class SimConfig:
    """What one replicate simulates: the paths, the functional and its estimator."""

    n_steps: int = 4096
    horizon: float = 1.0
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    start_law: StartLaw = field(default_factory=StartLaw.point)
    functional: str = "mutual"
    dim: int = 1
    workers: int = 1

    def __post_init__(self):
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise InvalidConfiguration("n_steps must be a positive integer")
        if not self.horizon > 0:
            raise InvalidConfiguration("horizon must be positive")
        if self.functional not in ("mutual", "self"):
            raise InvalidConfiguration(f"unknown functional {self.functional!r}")
        if self.dim not in (1, 2):
            raise InvalidConfiguration("dim must be 1 or 2")
        if self.dim == 2 and (self.estimator.kind != "binned" or self.functional != "mutual"):
            raise InvalidConfiguration("the planar mode supports the binned mutual estimator only")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def bandwidth(self) -> float:
        return self.estimator.resolve_bandwidth(self.dt)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["start_law"] = self.start_law.to_dict()
        return d


def log_grid(lo: float, hi: float, per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    """Log-spaced grid from ``lo`` to ``hi`` inclusive with about ``per_decade`` points per decade."""
    if not (0 < lo < hi):
        raise InvalidArgument("log grid needs 0 < lo < hi")
    n = max(2, int(round(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, n)


# ---------------------------------------------------------------------------
# replicate sampling


def _replicate_value(sim: SimConfig, rs: RngStream) -> float:
    dt = sim.dt
    h = sim.bandwidth
    n = sim.n_steps
    if sim.dim == 2:
        sd = math.sqrt(dt)
        xy = []
        for sub in (PATH_B_STREAM, PATH_BT_STREAM):
            steps = rs.child(sub).generator().standard_normal((n, 2)) * sd
            xy.append(np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)]))
        return mutual_binned_values_2d(xy[0], xy[1], dt, h)
    x, xt = sim.start_law.sample(rs.child(START_LAW_STREAM))
    b = brownian_values(rs.child(PATH_B_STREAM).generator(), n, dt, x)
    if sim.functional == "self":
        if sim.estimator.kind == "binned":
            return self_binned_values(b, dt, h)
        mid = 0.5 * (b[:-1] + b[1:])
        return dt * dt * kernel_pair_sum(mid, mid, h, sim.estimator.kernel)
    bt = brownian_values(rs.child(PATH_BT_STREAM).generator(), n, dt, xt)
    if sim.estimator.kind == "binned":
        return mutual_binned_values(b, bt, dt, h)
    return dt * dt * kernel_pair_sum(0.5 * (b[:-1] + b[1:]), 0.5 * (bt[:-1] + bt[1:]), h, sim.estimator.kernel)


def _ilt_chunk(args, start: int, stop: int) -> np.ndarray:
    sim, stream = args
    return np.array([_replicate_value(sim, stream.child(r)) for r in range(start, stop)])


def ilt_samples(sim: SimConfig, replicates: int, stream: RngStream) -> np.ndarray:
    """One functional value per replicate; replicate r is the pair ``sample_pair(.., stream.child(r))``."""
    if replicates < 1:
        raise InvalidArgument("replicates must be positive")
    return map_replicates(_ilt_chunk, (sim, stream), replicates, sim.workers)


def bias_scale(sim: SimConfig) -> float:
    """Size of the functional accumulated on the time square ``[0, h^2]^2``.

    ``h^2`` is the time a path needs to cross one bin, so mass below this
    scale is not resolved by the estimator.
    """
    h = sim.bandwidth
    if sim.dim == 2:
        return h * h * math.log(2.0) / math.pi
    if sim.functional == "self":
        return oracles.expected_self_ilt(h * h)
    return oracles.expected_mutual_ilt(h * h)


def estimator_floor(sim: SimConfig) -> float:
    return FLOOR_FACTOR * bias_scale(sim)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurvePoint:
    x: float
    count: int | None
    replicates: int | None
    p_hat: float
    ci_low: float
    ci_high: float
    flag: bool = False

    @property
    def exact(self) -> bool:
        return self.replicates is None


@dataclass(eq=False)
class DeviationCurve:
    """Estimated probabilities along one axis with 99% Wilson intervals.

    Exact curves (from the oracles) carry ``count = replicates = None`` and a
    degenerate interval.
    """

    axis: str
    points: list[CurvePoint]
    estimator_config: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    samples: np.ndarray | None = field(default=None, repr=False)

    @property
    def x(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def p_hat(self) -> np.ndarray:
        return np.array([p.p_hat for p in self.points])

    @property
    def counts(self) -> np.ndarray:
        return np.array([p.count for p in self.points])

    @property
    def flags(self) -> np.ndarray:
        return np.array([p.flag for p in self.points])

    def to_rows(self) -> list[tuple]:
        return [(p.x, p.count, p.replicates, p.p_hat, p.ci_low, p.ci_high, p.flag) for p in self.points]

    @classmethod
    def from_counts(cls, axis, xs, counts, replicates, flags=None, **kw) -> "DeviationCurve":
        counts = np.asarray(counts, dtype=np.int64)
        lo, hi = wilson_interval(counts, replicates)
        lo, hi = np.atleast_1d(lo), np.atleast_1d(hi)
        if flags is None:
            flags = np.zeros(len(counts), dtype=bool)
        pts = [
            CurvePoint(float(x), int(c), int(replicates), int(c) / replicates, float(a), float(b), bool(f))
            for x, c, a, b, f in zip(xs, counts, lo, hi, flags)
        ]
        return cls(axis, pts, **kw)

    @classmethod
    def exact(cls, axis, xs, probs, **kw) -> "DeviationCurve":
        pts = [CurvePoint(float(x), None, None, float(p), float(p), float(p)) for x, p in zip(xs, probs)]
        return cls(axis, pts, **kw)


def counts_below(samples: np.ndarray, grid) -> np.ndarray:
    """``#{samples <= x}`` for each x; one sort, so monotone in x on shared samples."""
    s = np.sort(samples)
    return np.searchsorted(s, np.asarray(grid, dtype=float), side="right")


def counts_above(samples: np.ndarray, grid) -> np.ndarray:
    s = np.sort(samples)
    return s.size - np.searchsorted(s, np.asarray(grid, dtype=float), side="left")


def curve_from_samples(samples, grid, axis="epsilon", floor: float = 0.0, meta=None, estimator=None) -> DeviationCurve:
    grid = np.asarray(grid, dtype=float)
    counts = counts_below(samples, grid)
    flags = grid < floor
    return DeviationCurve.from_counts(
        axis, grid, counts, samples.size, flags,
        estimator_config=estimator or {}, meta=dict(meta or {}), samples=samples,
    )


def small_deviation_curve(eps_grid, replicates: int, sim_config: SimConfig, stream: RngStream) -> DeviationCurve:
    """``P{I <= eps}`` over ``eps_grid`` from one ILT sample per replicate."""
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size == 0 or np.any(eps <= 0) or np.any(np.diff(eps) <= 0):
        raise InvalidArgument("eps grid must be positive and strictly ascending")
    if replicates < 1000:
        raise InvalidArgument("small-deviation curves need at least 1000 replicates")
    floor = estimator_floor(sim_config)
    if np.all(eps < floor):
        raise DegenerateConfiguration(
            f"every eps is below the estimator floor {floor:.3g}; refine the grid or the path resolution"
        )
    samples = ilt_samples(sim_config, replicates, stream)
    meta = {"floor": floor, "bias_scale": bias_scale(sim_config), "sim": sim_config.to_dict()}
    if sim_config.dim == 2:
        meta["exploratory"] = True
    return curve_from_samples(samples, eps, "epsilon", floor, meta, sim_config.estimator.to_dict())


# ---------------------------------------------------------------------------
# fits


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    stderr: float
    window: tuple[float, float]
    method: str
    n_points: int
    curve: DeviationCurve | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "stderr": self.stderr,
            "window": list(self.window),
            "method": self.method,
            "n_points": self.n_points,
        }


def _select(curve: DeviationCurve, window) -> list[CurvePoint]:
    lo, hi = window if window is not None else (-math.inf, math.inf)
    pts = [p for p in curve.points if lo <= p.x <= hi and not p.flag and 0.0 < p.p_hat]
    if pts and not pts[0].exact:
        pts = [p for p in pts if p.count >= MIN_FIT_COUNT and p.p_hat < 1.0]
    return pts


def fit_exponent(curve: DeviationCurve, window=None) -> ExponentFit:
    """Log-log slope of ``p_hat`` against ``x``.

    Monte Carlo curves use weighted least squares with the delta-method
    variance ``(1 - p) / (R p)`` of ``log p_hat``; exact curves use ordinary
    least squares.
    """
    pts = _select(curve, window)
    if len(pts) < 4:
        raise FitWindowError(f"only {len(pts)} usable points in window {window}; need 4")
    x = np.log([p.x for p in pts])
    y = np.log([p.p_hat for p in pts])
    if pts[0].exact:
        fit = ordinary_line(x, y)
        method = "ols-loglog"
    else:
        w = np.array([p.replicates * p.p_hat / (1.0 - p.p_hat) for p in pts])
        fit = weighted_line(x, y, w)
        method = "wls-loglog"
    win = (float(pts[0].x), float(pts[-1].x)) if window is None else (float(window[0]), float(window[1]))
    return ExponentFit(fit.slope, fit.intercept, fit.stderr, win, method, fit.n_points, curve)


def bootstrap_slopes(curve: DeviationCurve, window=None, resamples: int = 200, seed: int = 0) -> np.ndarray:
    """Slopes refitted on resamples (with replacement) of the curve points."""
    pts = _select(curve, window)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(resamples):
        pick = sorted(rng.integers(0, len(pts), len(pts)))
        sub = [pts[i] for i in pick]
        if len({p.x for p in sub}) < 2:
            continue
        c = DeviationCurve(curve.axis, sub)
        try:
            out.append(fit_exponent(c).slope)
        except FitWindowError:
            continue
    return np.array(out)


# ---------------------------------------------------------------------------
# scaling


@dataclass(frozen=True)
class ScalingTest:
    ks_statistic: float
    p_value: float
    t: float
    exponent: float
    n_steps_t: int
    n_steps_unit: int


def scaling_law_test(
    t: float,
    replicates: int,
    sim_config: SimConfig,
    stream: RngStream,
    exponent: float = 1.5,
) -> ScalingTest:
    """Two-sample KS between ILT on ``[0, t]^2`` and ``t^exponent`` times ILT on ``[0, 1]^2``.

    Both arms use the same time step (steps per unit time are matched), and
    hence the same default bandwidth; they draw from disjoint sub-streams.
    """
    if not t > 0:
        raise InvalidArgument("t must be positive")
    per_unit = sim_config.n_steps / sim_config.horizon
    n_t = int(round(per_unit * t))
    if abs(n_t - per_unit * t) > 1e-9 * n_t or n_t < 1:
        raise InvalidConfiguration("t * steps-per-unit-time must be an integer")
    n_1 = int(round(per_unit))
    arm_t = replace(sim_config, n_steps=n_t, horizon=float(t))
    arm_1 = replace(sim_config, n_steps=n_1, horizon=1.0)
    a = ilt_samples(arm_t, replicates, stream.child(0))
    b = ilt_samples(arm_1, replicates, stream.child(1)) * t**exponent
    res = sps.ks_2samp(a, b)
    return ScalingTest(float(res.statistic), float(res.pvalue), float(t), float(exponent), n_t, n_1)


# ---------------------------------------------------------------------------
# negative moments


STABLE_CHANGE = 0.10
STABLE_SHARE = 0.05
DIVERGENT_SHARE = 0.20


@dataclass(frozen=True)
class MomentReport:
    p: float
    sizes: tuple[int, ...]
    running_means: tuple[float, ...]
    last_change: float
    max_change: float
    max_share: float
    below_floor: int
    verdict: str


def negative_moment_diagnostic(samples, p_list, floor: float | None = None, min_size: int = 10_000) -> list[MomentReport]:
    """Running means of ``I^(-p)`` as the sample count doubles, and the largest term's share.

    ``stabilizing``: the last doubling moves the mean by under 10% and no single
    term holds 5% of the sum.  ``divergent``: the largest term holds over 20%
    and some doubling moves the mean by 10% or more.  Anything else is
    ``inconclusive``.  Samples below ``floor`` are kept but counted.
    """
    x = np.asarray(samples, dtype=float)
    if np.any(x <= 0):
        raise InvalidArgument("negative moments need strictly positive samples")
    n = x.size
    sizes = []
    m = n
    while m >= min(min_size, n) and m >= 1:
        sizes.append(m)
        if m // 2 < min(min_size, n) or m < 2:
            break
        m //= 2
    sizes = sorted(set(sizes))
    below = int(np.count_nonzero(x < floor)) if floor is not None else 0
    out = []
    for p in p_list:
        terms = x ** (-float(p))
        csum = np.cumsum(terms)
        means = [float(csum[s - 1] / s) for s in sizes]
        changes = [abs(b - a) / abs(a) for a, b in zip(means[:-1], means[1:])] or [0.0]
        share = float(terms.max() / csum[-1])
        last, worst = changes[-1], max(changes)
        if last < STABLE_CHANGE and share < STABLE_SHARE:
            verdict = "stabilizing"
        elif share > DIVERGENT_SHARE and worst >= STABLE_CHANGE:
            verdict = "divergent"
        else:
            verdict = "inconclusive"
        out.append(MomentReport(float(p), tuple(sizes), tuple(means), last, worst, share, below, verdict))
    return out


# ---------------------------------------------------------------------------
# discrete decay laws


def _mu_walks(gen: np.random.Generator, count: int, n: int) -> np.ndarray:
    starts = 2 * gen.integers(0, 2, size=count) - 1
    steps = 2 * gen.integers(0, 2, size=(count, n), dtype=np.int8).astype(np.int64) - 1
    return starts[:, None] + np.cumsum(steps, axis=1)


def no_intersection_mc(n_grid, replicates: int, stream: RngStream, batch: int = 20000) -> np.ndarray:
    """Counts of ``{Q_n = 0}`` under mu, one pair of walks per replicate, for each n."""
    n_grid = np.asarray(n_grid, dtype=int)
    n_max = int(n_grid.max())
    counts = np.zeros(n_grid.size, dtype=np.int64)
    for b, start in enumerate(range(0, replicates, batch)):
        m = min(batch, replicates - start)
        gen = stream.child(b).generator()
        s = _mu_walks(gen, m, n_max)
        st = _mu_walks(gen, m, n_max)
        lo, hi = np.minimum.accumulate(s, axis=1), np.maximum.accumulate(s, axis=1)
        lot, hit = np.minimum.accumulate(st, axis=1), np.maximum.accumulate(st, axis=1)
        for i, n in enumerate(n_grid):
            disjoint = (hi[:, n - 1] < lot[:, n - 1]) | (hit[:, n - 1] < lo[:, n - 1])
            counts[i] += int(disjoint.sum())
    return counts


def no_intersection_decay(n_grid, replicates_or_exact="exact", stream: RngStream | None = None, window=None):
    """``P_mu{Q_n = 0}`` along ``n_grid`` plus its log-log slope.

    Pass ``"exact"`` for the oracle values or an integer replicate count (with
    a stream) for Monte Carlo.
    """
    n_grid = np.asarray(n_grid, dtype=int)
    if replicates_or_exact == "exact":
        probs = [oracles.no_intersection_exact(int(n)) for n in n_grid]
        curve = DeviationCurve.exact("n", n_grid, probs, meta={"mode": "exact"})
    else:
        if stream is None:
            raise InvalidArgument("Monte Carlo mode needs a stream")
        r = int(replicates_or_exact)
        counts = no_intersection_mc(n_grid, r, stream)
        curve = DeviationCurve.from_counts("n", n_grid, counts, r, meta={"mode": "mc"})
    try:
        fit = fit_exponent(curve, window)
    except FitWindowError:
        fit = None
    return curve, fit


def hitting_tail_decay(z: int, n_grid, window=None) -> ExponentFit:
    """Log-log slope of the exact ``P_mu{T_z >= n}``; the curve rides along on ``fit.curve``."""
    if not -2 <= z <= 2:
        raise InvalidArgument("z must lie in [-2, 2]")
    n_grid = np.asarray(n_grid, dtype=int)
    tails = oracles.hitting_tail_mu(z, n_grid)
    curve = DeviationCurve.exact("n", n_grid, tails, meta={"z": z})
    return fit_exponent(curve, window)


# ---------------------------------------------------------------------------
# exit-time tail


def tau_tail_slope(
    t_grid,
    mode: str = "series",
    replicates: int = 1_000_000,
    stream: RngStream | None = None,
    dt: float = 1.0 / 16384,
    workers: int = 1,
) -> float:
    """Slope of ``-log P{tau_1 >= t}`` against t.

    ``series`` uses the oracle survival function, ``exact`` samples exact-mode
    exit times and ``grid`` samples grid-detected exits at time step ``dt``.
    Monte Carlo modes weight points by the delta-method variance of ``log p``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 1) or np.any(t_grid > 8):
        raise InvalidArgument("t grid must lie in [1, 8]")
    if mode == "series":
        s = oracles.tau1_survival(t_grid)
        return ordinary_line(t_grid, -np.log(s)).slope
    if stream is None:
        raise InvalidArgument("Monte Carlo modes need a stream")
    if mode == "exact":
        tau = sample_exit_times(replicates, stream)
    elif mode == "grid":
        tau = grid_exit_times(replicates, dt, stream, workers)
    else:
        raise InvalidArgument(f"unknown mode {mode!r}")
    counts = counts_above(tau, t_grid)
    keep = counts >= MIN_FIT_COUNT
    if keep.sum() < 2:
        raise FitWindowError("too few tail counts for a slope")
    p = counts[keep] / tau.size
    w = tau.size * p / (1.0 - p)
    return weighted_line(t_grid[keep], -np.log(p), w).slope


def _grid_exit_chunk(args, start, stop):
    dt, stream, level = args
    out = np.empty((stop - start, 2))
    for i, r in enumerate(range(start, stop)):
        path = sample_path_until_exits(1, dt, 0.0, stream.child(r), level)
        w = extract_walk(path, level)
        out[i] = (w.tau[1], np.sign(w.s_values[1] - w.s_values[0]))
    return out


def grid_exit_samples(replicates: int, dt: float, stream: RngStream, workers: int = 1, level: float = 1.0) -> np.ndarray:
    """``(tau_1, S_1 - S_0)`` rows from grid-detected first exits of independent paths."""
    return map_replicates(_grid_exit_chunk, (dt, stream, level), replicates, workers).reshape(-1, 2)


def grid_exit_times(replicates: int, dt: float, stream: RngStream, workers: int = 1) -> np.ndarray:
    return grid_exit_samples(replicates, dt, stream, workers)[:, 0]


# ---------------------------------------------------------------------------
# threshold calibration


@dataclass(frozen=True)
class ThresholdCalibration:
    a: float
    p_hat: float
    ci_low: float
    ci_high: float
    target: float
    atom: float
    curve: DeviationCurve = field(repr=False)


def _xi11_chunk(args, start, stop):
    dt, stream, estimator = args
    out = np.empty((stop - start, 2))
    for i, r in enumerate(range(start, stop)):
        rs = stream.child(r)
        b = sample_path_until_exits(2, dt, 0.0, rs.child(PATH_B_STREAM))
        bt = sample_path_until_exits(2, dt, 0.0, rs.child(PATH_BT_STREAM))
        pair = BrownianPair(b, bt, (0.0, 0.0))
        w, wt = extract_walk(b), extract_walk(bt)
        out[i, 0] = block_ilt(pair, w, wt, 1, 1, estimator).value
        out[i, 1] = float(w.s_values[1] != wt.s_values[1])
    return out


def xi11_samples(replicates: int, sim_config: SimConfig, stream: RngStream) -> np.ndarray:
    """Rows ``(xi_{1,1}, 1{S_1 != S~_1})`` for pairs started at (0, 0)."""
    args = (sim_config.dt, stream, sim_config.estimator)
    return map_replicates(_xi11_chunk, args, replicates, sim_config.workers).reshape(-1, 2)


def calibrate_a(a_grid, replicates: int, sim_config: SimConfig, stream: RngStream, target: float = 1.0 / 20) -> ThresholdCalibration:
    """Largest grid ``a`` whose 99% upper bound on ``P{xi_{1,1} <= a}`` is below ``target``.

    Raises :class:`CalibrationFailure` carrying the measured curve and the
    empirical mass of ``{xi_{1,1} = 0}`` when no grid point qualifies.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if a_grid.size == 0 or np.any(a_grid <= 0) or np.any(np.diff(a_grid) <= 0):
        raise InvalidArgument("a grid must be positive and strictly ascending")
    rows = xi11_samples(replicates, sim_config, stream)
    xi = rows[:, 0]
    atom = float(np.mean(xi == 0.0))
    curve = curve_from_samples(
        xi, a_grid, "a", 0.0,
        meta={"atom": atom, "opposite_first_step": float(rows[:, 1].mean()), "target": target},
        estimator=sim_config.estimator.to_dict(),
    )
    ok = [p for p in curve.points if p.ci_high < target]
    if not ok:
        raise CalibrationFailure(
            f"no grid a has P(xi_11 <= a) < {target} at 99% confidence "
            f"(P(xi_11 = 0) measured {atom:.4f})",
            curve=curve,
            atom=atom,
        )
    best = ok[-1]
    return ThresholdCalibration(best.x, best.p_hat, best.ci_low, best.ci_high, target, atom, curve)


# ---------------------------------------------------------------------------
# exploratory probes


@dataclass(frozen=True)
class UpperTailProbe:
    curve: DeviationCurve
    transform: np.ndarray
    functional: str
    exploratory: bool = True


def upper_tail_probe(u_grid, replicates: int, sim_config: SimConfig, stream: RngStream) -> UpperTailProbe:
    """``P{I >= u}`` and ``u^-2 log P{I >= u}`` (exploratory; no acceptance tolerance)."""
    u = np.asarray(u_grid, dtype=float)
    samples = ilt_samples(sim_config, replicates, stream)
    counts = counts_above(samples, u)
    curve = DeviationCurve.from_counts(
        "u", u, counts, replicates,
        estimator_config=sim_config.estimator.to_dict(),
        meta={"exploratory": True, "functional": sim_config.functional},
        samples=samples,
    )
    with np.errstate(divide="ignore"):
        transform = np.where(counts > 0, np.log(np.maximum(counts, 1) / replicates) / u**2, np.nan)
    return UpperTailProbe(curve, transform, sim_config.functional)


def log_curvature(curve: DeviationCurve, window=None) -> float:
    """Quadratic coefficient of ``log p`` in ``log x``: 0 for a power law, negative for faster decay."""
    pts = _select(curve, window)
    if len(pts) < 4:
        raise FitWindowError("need at least 4 points for a curvature estimate")
    x = np.log([p.x for p in pts])
    y = np.log([p.p_hat for p in pts])
    return float(np.polyfit(x, y, 2)[0])


__all__ = [
    "CI_LEVEL",
    "DEFAULT_EPS_WINDOW",
    "CurvePoint",
    "DeviationCurve",
    "ExponentFit",
    "MomentReport",
    "ScalingTest",
    "SimConfig",
    "ThresholdCalibration",
    "UpperTailProbe",
    "bias_scale",
    "bootstrap_slopes",
    "calibrate_a",
    "counts_above",
    "counts_below",
    "curve_from_samples",
    "estimator_floor",
    "fit_exponent",
    "grid_exit_samples",
    "grid_exit_times",
    "hitting_tail_decay",
    "ilt_samples",
    "log_curvature",
    "log_grid",
    "negative_moment_diagnostic",
    "no_intersection_decay",
    "no_intersection_mc",
    "scaling_law_test",
    "small_deviation_curve",
    "tau_tail_slope",
    "upper_tail_probe",
    "xi11_samples",
]

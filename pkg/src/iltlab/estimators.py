"""Occupation histograms and intersection-local-time estimators.

Every estimator works on the sample intervals of a grid path.  Interval ``i``
(between grid points ``i`` and ``i + 1``) is represented by the average of its
two endpoint values and carries time mass ``dt``; a time window
``[i0 * dt, i1 * dt]`` therefore owns exactly the intervals ``i0 .. i1 - 1``.
This keeps every estimator exactly additive over a partition of the time
square, which the block decomposition in :mod:`iltlab.embedding` relies on.

Two families are provided:

* binned: linear binning onto bin centres ``origin + m * h``; the mutual
  estimate is ``(1/h) * sum_m occ_B(m) * occ_B~(m)``.
* mollified: ``dt^2 * sum_{i,k} K_eta(x_i - y_k)`` with a compactly supported
  kernel, evaluated exactly by sorting plus prefix sums.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidBandwidth, InvalidConfiguration
from .paths import PathGrid

DEFAULT_BANDWIDTH_FACTOR = 4.0
KERNELS = ("epanechnikov", "tophat")


def default_bandwidth(dt: float) -> float:
    return DEFAULT_BANDWIDTH_FACTOR * math.sqrt(dt)


@dataclass(frozen=True)
class EstimatorConfig:
    """How an intersection local time is estimated.

    ``bandwidth`` is the bin width (binned) or kernel half-support (mollified);
    ``None`` means ``4 * sqrt(dt)`` of the path being measured.
    """

    kind: str = "binned"
    bandwidth: float | None = None
    kernel: str = "epanechnikov"
    origin: float = 0.0

    def __post_init__(self):
        if self.kind not in ("binned", "mollified"):
            raise InvalidConfiguration(f"unknown estimator kind {self.kind!r}")
        if self.kernel not in KERNELS:
            raise InvalidConfiguration(f"unknown kernel {self.kernel!r}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise InvalidBandwidth(f"bandwidth must be positive, got {self.bandwidth!r}")

    def resolve_bandwidth(self, dt: float) -> float:
        return self.bandwidth if self.bandwidth is not None else default_bandwidth(dt)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class OccupationHistogram:
    """Occupation time per bin; bin ``first_bin + i`` is centred at ``origin + (first_bin + i) * h``."""

    h: float
    origin: float
    first_bin: int
    weights: np.ndarray
    window: tuple[float, float]

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def centers(self) -> np.ndarray:
        return self.origin + (self.first_bin + np.arange(self.weights.size)) * self.h

    def density(self) -> np.ndarray:
        """Local-time estimate ``weights / h`` at the bin centres."""
        return self.weights / self.h


@dataclass(frozen=True)
class IltEstimate:
    value: float
    kind: str
    bandwidth: float
    n_steps: int
    windows: tuple[tuple[float, float], tuple[float, float]]


# ---------------------------------------------------------------------------
# window handling


def window_indices(path: PathGrid, window) -> tuple[int, int]:
    """Grid indices ``(i0, i1)`` of a time window; ``None`` is the whole path."""
    if window is None:
        return 0, path.n_steps
    t0, t1 = window
    dt = path.dt
    i0 = int(round(t0 / dt))
    i1 = int(round(t1 / dt))
    tol = 1e-9 * max(1.0, abs(t1) / dt)
    if abs(i0 - t0 / dt) > tol or abs(i1 - t1 / dt) > tol:
        raise InvalidConfiguration(f"window {window} is not aligned to the grid (dt={dt})")
    if not (0 <= i0 <= i1 <= path.n_steps):
        raise InvalidConfiguration(f"window {window} outside [0, {path.horizon}]")
    return i0, i1


def midpoints(values: np.ndarray, i0: int, i1: int) -> np.ndarray:
    seg = values[i0 : i1 + 1]
    return 0.5 * (seg[:-1] + seg[1:])


# ---------------------------------------------------------------------------
# binned


def _linear_bins(x: np.ndarray, dt: float, h: float, origin: float) -> tuple[int, np.ndarray]:
    if x.size == 0:
        return 0, np.zeros(0)
    u = (x - origin) / h
    m = np.floor(u)
    frac = u - m
    m = m.astype(np.int64)
    first = int(m.min())
    size = int(m.max()) - first + 2
    idx = m - first
    w = np.bincount(idx, weights=(1.0 - frac) * dt, minlength=size)
    w += np.bincount(idx + 1, weights=frac * dt, minlength=size)
    return first, w


def occupation_from_values(values, dt, h, i0, i1, origin=0.0) -> OccupationHistogram:
    if not h > 0:
        raise InvalidBandwidth(f"bin width must be positive, got {h!r}")
    first, w = _linear_bins(midpoints(values, i0, i1), dt, h, origin)
    return OccupationHistogram(h, origin, first, w, (i0 * dt, i1 * dt))


def occupation(path: PathGrid, h: float, window=None, origin: float = 0.0) -> OccupationHistogram:
    """Linear-binned occupation measure of ``path`` over a grid-aligned window."""
    if not h > 0:
        raise InvalidBandwidth(f"bin width must be positive, got {h!r}")
    i0, i1 = window_indices(path, window)
    return occupation_from_values(path.values, path.dt, h, i0, i1, origin)


def histogram_product(a: OccupationHistogram, b: OccupationHistogram) -> float:
    """``(1/h) * sum_m a(m) b(m)`` over the common bins."""
    if a.h != b.h or a.origin != b.origin:
        raise InvalidConfiguration("occupation histograms use different bin geometry")
    lo = max(a.first_bin, b.first_bin)
    hi = min(a.first_bin + a.weights.size, b.first_bin + b.weights.size)
    if hi <= lo:
        return 0.0
    wa = a.weights[lo - a.first_bin : hi - a.first_bin]
    wb = b.weights[lo - b.first_bin : hi - b.first_bin]
    return float(np.dot(wa, wb)) / a.h


def mutual_ilt_binned(
    path_b: PathGrid,
    path_bt: PathGrid,
    h: float | None = None,
    window_b=None,
    window_bt=None,
    origin: float = 0.0,
) -> IltEstimate:
    if path_b.dt != path_bt.dt:
        raise InvalidConfiguration("paths must share the time step")
    if h is None:
        h = default_bandwidth(path_b.dt)
    occ_b = occupation(path_b, h, window_b, origin)
    occ_bt = occupation(path_bt, h, window_bt, origin)
    return IltEstimate(
        histogram_product(occ_b, occ_bt), "binned", h, path_b.n_steps, (occ_b.window, occ_bt.window)
    )


def self_ilt(path: PathGrid, h: float | None = None, window=None, origin: float = 0.0) -> IltEstimate:
    """Binned self-intersection local time ``(1/h) * sum_m occ(m)^2`` (both time orderings)."""
    if h is None:
        h = default_bandwidth(path.dt)
    occ = occupation(path, h, window, origin)
    return IltEstimate(histogram_product(occ, occ), "binned", h, path.n_steps, (occ.window, occ.window))


# ---------------------------------------------------------------------------
# mollified


def kernel_value(u, eta: float, kernel: str = "epanechnikov"):
    """Pointwise kernel, for tests and plots; the estimator never calls it."""
    u = np.asarray(u, dtype=float) / eta
    if kernel == "epanechnikov":
        return np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0) / eta
    if kernel == "tophat":
        return np.where(np.abs(u) <= 0.5, 1.0, 0.0) / eta
    raise InvalidConfiguration(f"unknown kernel {kernel!r}")


def kernel_pair_sum(x: np.ndarray, y: np.ndarray, eta: float, kernel: str = "epanechnikov") -> float:
    """``sum_{i,k} K_eta(x_i - y_k)`` in O((n + m) log m).

    The Epanechnikov kernel is a quadratic on its support, so the sum over the
    ``y`` inside ``[x - eta, x + eta]`` needs only the count, sum and sum of
    squares of that slice, read off prefix sums of the sorted ``y``.
    """
    if not eta > 0:
        raise InvalidBandwidth(f"kernel bandwidth must be positive, got {eta!r}")
    if x.size == 0 or y.size == 0:
        return 0.0
    ys = np.sort(y)
    c = 0.5 * (ys[0] + ys[-1])
    ys = ys - c
    xs = x - c
    if kernel == "tophat":
        lo = np.searchsorted(ys, xs - 0.5 * eta, side="left")
        hi = np.searchsorted(ys, xs + 0.5 * eta, side="right")
        return float((hi - lo).sum()) / eta
    if kernel != "epanechnikov":
        raise InvalidConfiguration(f"unknown kernel {kernel!r}")
    s1 = np.concatenate([[0.0], np.cumsum(ys)])
    s2 = np.concatenate([[0.0], np.cumsum(ys * ys)])
    lo = np.searchsorted(ys, xs - eta, side="left")
    hi = np.searchsorted(ys, xs + eta, side="right")
    cnt = hi - lo
    sum1 = s1[hi] - s1[lo]
    sum2 = s2[hi] - s2[lo]
    sq = cnt * xs * xs - 2.0 * xs * sum1 + sum2  # sum (x - y)^2 over the slice
    per_x = np.maximum(cnt - sq / (eta * eta), 0.0)
    return 0.75 / eta * float(per_x.sum())


def mutual_ilt_mollified(
    path_b: PathGrid,
    path_bt: PathGrid,
    eta: float | None = None,
    window_b=None,
    window_bt=None,
    kernel: str = "epanechnikov",
) -> IltEstimate:
    if path_b.dt != path_bt.dt:
        raise InvalidConfiguration("paths must share the time step")
    if eta is None:
        eta = default_bandwidth(path_b.dt)
    if not eta > 0:
        raise InvalidBandwidth(f"kernel bandwidth must be positive, got {eta!r}")
    i0, i1 = window_indices(path_b, window_b)
    k0, k1 = window_indices(path_bt, window_bt)
    dt = path_b.dt
    x = midpoints(path_b.values, i0, i1)
    y = midpoints(path_bt.values, k0, k1)
    value = dt * dt * kernel_pair_sum(x, y, eta, kernel)
    return IltEstimate(value, "mollified", eta, path_b.n_steps, ((i0 * dt, i1 * dt), (k0 * dt, k1 * dt)))


def matched_mollifier_bandwidth(h: float) -> float:
    """Epanechnikov half-support whose kernel variance matches the binned estimator.

    Linear binning at width h acts on a pair of points through the
    autocorrelation of two hat functions, a kernel of variance ``h^2 / 3``;
    the Epanechnikov kernel has variance ``eta^2 / 5``.
    """
    return h * math.sqrt(5.0 / 3.0)


def estimate_mutual(path_b: PathGrid, path_bt: PathGrid, config: EstimatorConfig, window_b=None, window_bt=None) -> IltEstimate:
    bw = config.resolve_bandwidth(path_b.dt)
    if config.kind == "binned":
        return mutual_ilt_binned(path_b, path_bt, bw, window_b, window_bt, config.origin)
    return mutual_ilt_mollified(path_b, path_bt, bw, window_b, window_bt, config.kernel)


# ---------------------------------------------------------------------------
# array kernels used by the batch samplers


def mutual_binned_values(xb: np.ndarray, xbt: np.ndarray, dt: float, h: float) -> float:
    """Binned mutual estimate straight from two value arrays (whole windows)."""
    fa, wa = _linear_bins(0.5 * (xb[:-1] + xb[1:]), dt, h, 0.0)
    fb, wb = _linear_bins(0.5 * (xbt[:-1] + xbt[1:]), dt, h, 0.0)
    lo, hi = max(fa, fb), min(fa + wa.size, fb + wb.size)
    if hi <= lo:
        return 0.0
    return float(np.dot(wa[lo - fa : hi - fa], wb[lo - fb : hi - fb])) / h


def self_binned_values(x: np.ndarray, dt: float, h: float) -> float:
    _, w = _linear_bins(0.5 * (x[:-1] + x[1:]), dt, h, 0.0)
    return float(np.dot(w, w)) / h


def _linear_bins_2d(xy: np.ndarray, dt: float, h: float) -> dict:
    u = xy / h
    m = np.floor(u)
    f = u - m
    m = m.astype(np.int64)
    lo = m.min(axis=0)
    span = m.max(axis=0) - lo + 2
    out = np.zeros((span[0], span[1]))
    ix, iy = m[:, 0] - lo[0], m[:, 1] - lo[1]
    for dx, wx in ((0, 1.0 - f[:, 0]), (1, f[:, 0])):
        for dy, wy in ((0, 1.0 - f[:, 1]), (1, f[:, 1])):
            np.add.at(out, (ix + dx, iy + dy), wx * wy * dt)
    return {"lo": lo, "w": out}


def mutual_binned_values_2d(xb: np.ndarray, xbt: np.ndarray, dt: float, h: float) -> float:
    """Planar analogue: ``(1/h^2) * sum over cells of occ_B * occ_B~`` (bilinear binning)."""
    a = _linear_bins_2d(0.5 * (xb[:-1] + xb[1:]), dt, h)
    b = _linear_bins_2d(0.5 * (xbt[:-1] + xbt[1:]), dt, h)
    lo = np.maximum(a["lo"], b["lo"])
    hi = np.minimum(a["lo"] + a["w"].shape, b["lo"] + b["w"].shape)
    if np.any(hi <= lo):
        return 0.0
    sa = a["w"][lo[0] - a["lo"][0] : hi[0] - a["lo"][0], lo[1] - a["lo"][1] : hi[1] - a["lo"][1]]
    sb = b["w"][lo[0] - b["lo"][0] : hi[0] - b["lo"][0], lo[1] - b["lo"][1] : hi[1] - b["lo"][1]]
    return float((sa * sb).sum()) / (h * h)

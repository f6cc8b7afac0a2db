"""Binomial intervals and straight-line fits used by the experiment layer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

CI_LEVEL = 0.99


def wilson_interval(count, n, level: float = CI_LEVEL):
    """Wilson score interval for ``count`` successes in ``n`` trials (vectorised)."""
    count = np.asarray(count, dtype=float)
    n = np.asarray(n, dtype=float)
    z = stats.norm.ppf(0.5 + level / 2.0)
    p = count / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2.0 * n)) / denom
    half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    # the endpoints at k = 0 and k = n are exactly 0 and 1; pin them against rounding
    lo = np.where(count <= 0, 0.0, np.clip(centre - half, 0.0, 1.0))
    hi = np.where(count >= n, 1.0, np.clip(centre + half, 0.0, 1.0))
    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    stderr: float
    n_points: int


def weighted_line(x, y, w) -> LineFit:
    """Least squares ``y = a + b x`` with known inverse-variance weights ``w``.

    ``stderr`` is the model-based standard error ``(sum w (x - xbar_w)^2)^(-1/2)``.
    """
    x, y, w = (np.asarray(v, dtype=float) for v in (x, y, w))
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    return LineFit(float(slope), float(ym - slope * xm), float(math.sqrt(1.0 / sxx)), x.size)


def ordinary_line(x, y) -> LineFit:
    """Unweighted least squares; ``stderr`` from the residual scatter (0 for an exact line)."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    n = x.size
    xm, ym = x.mean(), y.mean()
    sxx = ((x - xm) ** 2).sum()
    slope = ((x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    resid = y - intercept - slope * x
    s2 = (resid**2).sum() / (n - 2) if n > 2 else 0.0
    return LineFit(float(slope), float(intercept), float(math.sqrt(s2 / sxx)), n)

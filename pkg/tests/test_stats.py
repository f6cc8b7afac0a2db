import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from iltlab.parallel import ENV_WORKERS, map_replicates, resolve_workers, split_range
from iltlab.stats import ordinary_line, weighted_line, wilson_interval


def test_wilson_known_value():
    lo, hi = wilson_interval(10, 100)
    assert lo == pytest.approx(0.046025811701035035, abs=1e-14)
    assert hi == pytest.approx(0.20375073847162334, abs=1e-14)
    assert wilson_interval(57, 57)[1] == 1.0
    assert wilson_interval(0, 5)[0] == 0.0


def test_wilson_matches_closed_form():
    z = sps.norm.ppf(0.995)
    for k, n in [(0, 50), (3, 1000), (500, 1000), (1000, 1000)]:
        p = k / n
        c = (p + z * z / (2 * n)) / (1 + z * z / n)
        h = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
        lo, hi = wilson_interval(k, n)
        assert lo == pytest.approx(max(0.0, c - h), abs=1e-14)
        assert hi == pytest.approx(min(1.0, c + h), abs=1e-14)


@given(st.integers(min_value=1, max_value=10_000), st.data())
@settings(max_examples=100, deadline=None)
def test_wilson_brackets(n, data):
    k = data.draw(st.integers(min_value=0, max_value=n))
    lo, hi = wilson_interval(k, n)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


def test_wilson_vectorised():
    lo, hi = wilson_interval(np.array([1, 2, 3]), 10)
    assert lo.shape == (3,) and np.all(np.diff(lo) > 0)


def test_weighted_line_recovers_exact_line():
    x = np.linspace(0, 1, 9)
    fit = weighted_line(x, 2.0 - 0.7 * x, np.ones(9))
    assert fit.slope == pytest.approx(-0.7, abs=1e-12)
    assert fit.intercept == pytest.approx(2.0, abs=1e-12)


def test_weighted_line_stderr_is_honest(rng):
    x = np.linspace(-1, 1, 12)
    sd = np.linspace(0.05, 0.3, 12)
    slopes = []
    for _ in range(2000):
        y = 0.5 * x + rng.normal(scale=sd)
        slopes.append(weighted_line(x, y, 1 / sd**2).slope)
    se = weighted_line(x, 0.5 * x, 1 / sd**2).stderr
    assert np.std(slopes) == pytest.approx(se, rel=0.08)


def test_ordinary_line_residual_stderr(rng):
    x = np.arange(20.0)
    y = 1 + 3 * x + rng.normal(scale=0.1, size=20)
    fit = ordinary_line(x, y)
    ref = sps.linregress(x, y)
    assert fit.slope == pytest.approx(ref.slope)
    assert fit.stderr == pytest.approx(ref.stderr)


def _square(args, a, b):
    return np.arange(a, b, dtype=float) ** args


def test_split_range_covers():
    ranges = split_range(103, 4)
    assert ranges[0][0] == 0 and ranges[-1][1] == 103
    assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))


def test_map_replicates_worker_independent():
    one = map_replicates(_square, 2, 1000, workers=1, chunk_size=64)
    two = map_replicates(_square, 2, 1000, workers=2, chunk_size=64)
    assert np.array_equal(one, two)
    assert np.array_equal(one, np.arange(1000.0) ** 2)


def test_env_overrides_workers(monkeypatch):
    monkeypatch.setenv(ENV_WORKERS, "3")
    assert resolve_workers(8) == 3
    monkeypatch.delenv(ENV_WORKERS)
    assert resolve_workers(8) == 8
    assert resolve_workers(None) == 1

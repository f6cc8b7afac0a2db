import math

import numpy as np
import pytest

from iltlab import lab, oracles
from iltlab.errors import (
    CalibrationFailure,
    DegenerateConfiguration,
    FitWindowError,
    InvalidArgument,
    InvalidConfiguration,
)
from iltlab.estimators import EstimatorConfig
from iltlab.paths import StartLaw, sample_pair
from iltlab.estimators import mutual_ilt_binned
from iltlab.rng import RngStream

SMALL = lab.SimConfig(n_steps=256)


def test_log_grid():
    g = lab.log_grid(0.02, 0.3)
    assert g[0] == pytest.approx(0.02) and g[-1] == pytest.approx(0.3)
    assert g.size == 1 + round(12 * math.log10(15))
    assert np.allclose(np.diff(np.log(g)), np.log(g[1] / g[0]))


def test_replicate_matches_sample_pair():
    stream = RngStream(4)
    vals = lab.ilt_samples(SMALL, 3, stream)
    for r in range(3):
        pair = sample_pair(256, 1.0, StartLaw.point(), stream.child(r))
        assert vals[r] == pytest.approx(mutual_ilt_binned(pair.path_b, pair.path_bt).value, rel=1e-12)


def test_samples_worker_independent():
    a = lab.ilt_samples(lab.SimConfig(n_steps=128, workers=1), 300, RngStream(5))
    b = lab.ilt_samples(lab.SimConfig(n_steps=128, workers=2), 300, RngStream(5))
    assert np.array_equal(a, b)


@pytest.mark.parametrize(
    "sim",
    [
        lab.SimConfig(n_steps=128, functional="self"),
        lab.SimConfig(n_steps=128, estimator=EstimatorConfig("mollified")),
        lab.SimConfig(n_steps=128, start_law=StartLaw.mu()),
        lab.SimConfig(n_steps=128, dim=2),
    ],
)
def test_other_sim_modes_run(sim):
    v = lab.ilt_samples(sim, 20, RngStream(6))
    assert v.shape == (20,) and np.all(v >= 0)


def test_sim_config_validation():
    with pytest.raises(InvalidConfiguration):
        lab.SimConfig(n_steps=0)
    with pytest.raises(InvalidConfiguration):
        lab.SimConfig(functional="triple")
    with pytest.raises(InvalidConfiguration):
        lab.SimConfig(dim=2, functional="self")


def test_floor_scales_as_h_cubed():
    a = lab.bias_scale(lab.SimConfig(n_steps=1024))
    b = lab.bias_scale(lab.SimConfig(n_steps=4096))
    assert a / b == pytest.approx(8.0, rel=1e-9)
    assert lab.estimator_floor(lab.SimConfig()) == pytest.approx(5 * oracles.expected_mutual_ilt(1 / 256), rel=1e-12)


@pytest.fixture(scope="module")
def curve():
    return lab.small_deviation_curve(lab.log_grid(0.02, 0.3), 2000, SMALL, RngStream(7))


def test_curve_invariants(curve):
    assert np.all(np.diff(curve.counts) >= 0)
    for p in curve.points:
        assert p.p_hat == p.count / p.replicates
        assert p.ci_low <= p.p_hat <= p.ci_high


def test_curve_saturates():
    c = lab.small_deviation_curve([0.05, 1e6], 1000, SMALL, RngStream(8))
    assert c.points[-1].p_hat == 1.0


def test_floor_flags_and_degenerate():
    sim = lab.SimConfig(n_steps=64)
    floor = lab.estimator_floor(sim)
    c = lab.small_deviation_curve([floor / 2, floor * 2], 1000, sim, RngStream(9))
    assert list(c.flags) == [True, False]
    with pytest.raises(DegenerateConfiguration):
        lab.small_deviation_curve([floor / 4, floor / 2], 1000, sim, RngStream(9))


def test_curve_argument_checks():
    with pytest.raises(InvalidArgument):
        lab.small_deviation_curve([0.1, 0.05], 1000, SMALL, RngStream(1))
    with pytest.raises(InvalidArgument):
        lab.small_deviation_curve([0.1], 999, SMALL, RngStream(1))


def test_merged_batches_equal_single_batch():
    grid = [0.05, 0.1, 0.2]
    s = lab.ilt_samples(SMALL, 2000, RngStream(10))
    whole = lab.counts_below(s, grid)
    parts = lab.counts_below(s[:700], grid) + lab.counts_below(s[700:], grid)
    assert np.array_equal(whole, parts)


def test_fit_recovers_synthetic_power_law():
    x = np.geomspace(0.01, 1, 15)
    fit = lab.fit_exponent(lab.DeviationCurve.exact("epsilon", x, x**0.5))
    assert fit.slope == pytest.approx(0.5, abs=1e-6)
    assert fit.method == "ols-loglog"


def test_fit_recovers_binomial_power_law(rng):
    x = np.geomspace(0.01, 0.5, 15)
    n = 200_000
    counts = rng.binomial(n, 0.8 * x ** (2 / 3))
    c = lab.DeviationCurve.from_counts("epsilon", x, counts, n)
    fit = lab.fit_exponent(c)
    assert fit.method == "wls-loglog"
    assert abs(fit.slope - 2 / 3) < 3 * fit.stderr + 1e-3


def test_bootstrap_stability(curve):
    fit = lab.fit_exponent(curve)
    boots = lab.bootstrap_slopes(curve, resamples=100)
    assert np.mean(np.abs(boots - fit.slope) <= 3 * fit.stderr) > 0.9


def test_fit_window_error(curve):
    with pytest.raises(FitWindowError):
        lab.fit_exponent(curve, (0.02, 0.025))


def test_fit_excludes_small_counts():
    x = np.geomspace(0.01, 1, 8)
    counts = np.array([3, 10, 19, 40, 80, 160, 320, 640])
    c = lab.DeviationCurve.from_counts("epsilon", x, counts, 1000)
    assert lab.fit_exponent(c).n_points == 5


def test_ratio_at_fixed_curve(curve):
    # same-sample CDF: p(0.08) <= p(0.1)
    a, b = lab.counts_below(curve.samples, [0.08, 0.1])
    assert a <= b


def test_negative_moment_report():
    rng = np.random.default_rng(0)
    # I = U^(3/2): P{I <= e} = e^(2/3), so E I^-p is finite iff p < 2/3
    s = rng.random(400_000) ** 1.5
    reports = lab.negative_moment_diagnostic(s, [0.0, 1 / 3, 1.0])
    assert reports[0].running_means[-1] == 1.0
    assert reports[1].verdict == "stabilizing"
    assert reports[2].verdict in ("divergent", "inconclusive")
    assert reports[2].max_share > reports[1].max_share


def test_negative_moment_rejects_nonpositive():
    with pytest.raises(InvalidArgument):
        lab.negative_moment_diagnostic(np.array([1.0, 0.0]), [1])


def test_no_intersection_decay_modes():
    curve, fit = lab.no_intersection_decay([32, 64, 128, 256, 512])
    assert fit.slope == pytest.approx(-1.0, abs=0.1)
    curve1, _ = lab.no_intersection_decay([1, 2, 3, 4])
    assert curve1.points[0].p_hat == 0.625
    mc, _ = lab.no_intersection_decay([64], 20_000, RngStream(11))
    exact = oracles.no_intersection_exact(64)
    assert mc.points[0].ci_low <= exact <= mc.points[0].ci_high
    with pytest.raises(InvalidArgument):
        lab.no_intersection_decay([8], 100)


def test_hitting_tail_decay():
    fit = lab.hitting_tail_decay(0, [64, 128, 256, 512, 1024])
    assert fit.slope == pytest.approx(-0.5, abs=0.05)
    assert np.all(np.diff(fit.curve.p_hat) <= 0)
    with pytest.raises(InvalidArgument):
        lab.hitting_tail_decay(3, [1, 2])


def test_tau_tail_series():
    assert lab.tau_tail_slope(np.linspace(4, 8, 9)) == pytest.approx(math.pi**2 / 8, rel=1e-6)
    with pytest.raises(InvalidArgument):
        lab.tau_tail_slope([0.5, 2.0])


def test_tau_tail_exact_mc():
    s = lab.tau_tail_slope(np.linspace(1, 4, 7), "exact", 200_000, RngStream(12))
    assert s == pytest.approx(math.pi**2 / 8, rel=0.05)


def test_scaling_same_law_and_power():
    sim = lab.SimConfig(n_steps=128)
    same = lab.scaling_law_test(1.0, 1500, sim, RngStream(13))
    assert same.p_value > 0.001
    wrong = lab.scaling_law_test(4.0, 1500, sim, RngStream(14), exponent=1.0)
    assert wrong.p_value < 1e-3
    with pytest.raises(InvalidConfiguration):
        lab.scaling_law_test(1.3, 10, sim, RngStream(1))


def test_calibrate_a_reports_atom():
    sim = lab.SimConfig(n_steps=1024)
    with pytest.raises(CalibrationFailure) as info:
        lab.calibrate_a([1e-3, 1e-2, 1e6], 200, sim, RngStream(15))
    exc = info.value
    assert exc.atom > 0.05
    assert exc.curve.points[-1].p_hat == 1.0
    assert np.all(np.diff(exc.curve.counts) >= 0)


def test_calibrate_a_succeeds_with_lenient_target():
    sim = lab.SimConfig(n_steps=1024)
    cal = lab.calibrate_a([1e-3, 1e-2, 1e6], 200, sim, RngStream(15), target=0.9)
    assert cal.a == 1e-2
    assert cal.ci_high < 0.9


def test_upper_tail_probe():
    sim = lab.SimConfig(n_steps=256)
    probe = lab.upper_tail_probe([0.5, 1.0, 1.5], 3000, sim, RngStream(16))
    finite = probe.transform[np.isfinite(probe.transform)]
    assert np.all(finite < 0)
    assert probe.curve.meta["exploratory"]


def test_log_curvature_of_power_law_is_zero():
    x = np.geomspace(0.01, 1, 10)
    assert lab.log_curvature(lab.DeviationCurve.exact("epsilon", x, x**0.7)) == pytest.approx(0, abs=1e-9)

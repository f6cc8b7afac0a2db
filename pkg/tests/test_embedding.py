import numpy as np
import pytest

from iltlab import oracles
from iltlab.embedding import (
    EmbeddedWalk,
    block_ilt,
    block_ilt_matrix,
    event_F,
    extract_walk,
    h_statistic,
    hitting_time,
    intersection_matrix,
    intersections,
    sample_exit_times,
    sample_first_exit_grid,
    sample_walk_exact,
    tau_concentration_check,
)
from iltlab.errors import InsufficientData, InvalidArgument, UnsupportedMode
from iltlab.estimators import EstimatorConfig, mutual_ilt_binned
from iltlab.paths import BrownianPair, PathGrid, sample_path, sample_path_until_exits
from iltlab.rng import RngStream


def _grid_pair(seed, exits=6, dt=1 / 2048):
    rs = RngStream(seed)
    b = sample_path_until_exits(exits, dt, 0.0, rs.child(0))
    bt = sample_path_until_exits(exits, dt, 0.0, rs.child(1))
    return BrownianPair(b, bt, (0.0, 0.0))


def test_extract_walk_on_a_hand_path():
    v = np.array([0.0, 0.6, 1.2, 0.9, 0.1, -0.2, 1.5, 2.1])
    w = extract_walk(PathGrid(v, 7.0, 7))
    # exits: 1.2 (S=1), 0.1? no (|0.1-1|=0.9), -0.2 (S=0), 2.1 (S=1 -> |2.1-0|>=1 at 1.5 first)
    assert list(w.tau_index) == [0, 2, 5, 6, 7]
    assert list(w.s_values) == [0.0, 1.0, 0.0, 1.0, 2.0]
    assert list(w.lattice()) == [0, 1, 0, 1, 2]
    assert list(w.signs()) == [1, -1, 1, 1]


def test_grid_walk_is_lattice_anchored(stream):
    p = sample_path_until_exits(50, 1 / 4096, 0.3, stream)
    w = extract_walk(p)
    assert w.n_steps >= 50
    assert np.allclose(np.abs(np.diff(w.s_values)), 1.0)
    # every detection point sits at or past the barrier of its anchor
    v = p.values[w.tau_index[1:]]
    assert np.all(np.abs(v - w.s_values[:-1]) >= 1.0 - 1e-12)
    # overshoot is bounded by one grid increment
    assert np.all(np.abs(v - w.s_values[1:]) < 6 * np.sqrt(p.dt))


def test_no_exit_gives_trivial_walk():
    w = extract_walk(PathGrid(np.zeros(10), 1.0, 9))
    assert w.n_steps == 0


def test_exact_walk_structure(stream):
    w = sample_walk_exact(300, 2.0, stream)
    assert w.mode == "exact" and w.s_values[0] == 2.0
    assert np.all(np.diff(w.tau) > 0)
    assert set(np.abs(np.diff(w.s_values))) == {1.0}


def test_exit_time_moments(stream):
    tau = sample_exit_times(200_000, stream)
    assert tau.mean() == pytest.approx(1.0, rel=0.01)
    assert tau.var() == pytest.approx(2 / 3, rel=0.03)


def test_exit_time_determinism():
    a = sample_exit_times(100, RngStream(1, 2))
    b = sample_exit_times(100, RngStream(1, 2))
    assert np.array_equal(a, b)


def test_first_exit_grid(stream):
    tau, sign = sample_first_exit_grid(1 / 1024, stream)
    assert tau > 0 and sign in (-1, 1)


def test_intersections_by_hand():
    s = np.array([0, 1, 2, 1, 0])
    st = np.array([2, 1, 2, 3, 2])
    rec = intersections(s, st, 4)
    assert rec.q_n == int(intersection_matrix(s, st, 4).sum())
    pairs = {tuple(x) for x in rec.lam}
    assert pairs == {(1, 1), (2, 2), (2, 4), (3, 1)}
    assert rec.sigma == 1
    assert rec.early_set() == {(1, 1)}


def test_early_intersections_are_minimal(rng):
    for _ in range(50):
        s = np.concatenate([[0], np.cumsum(rng.choice([-1, 1], 12))])
        st = np.concatenate([[1], 1 + np.cumsum(rng.choice([-1, 1], 12))])
        rec = intersections(s, st, 12)
        lam = {tuple(x) for x in rec.lam}
        for j, k in rec.early_set():
            assert not any((a <= j and b <= k and (a, b) != (j, k)) for a, b in lam)


def test_event_F():
    s = np.array([1, 0, -1, 0])
    st = np.array([-1, 0, 1, 2])
    # S_1 = S~_1 = 0 only
    assert event_F(s, st, 1, 1)
    assert not event_F(s, st, 1, 3)
    with pytest.raises(InvalidArgument):
        event_F(s, st, 2, 1)
    with pytest.raises(InvalidArgument):
        event_F(s, st, 1, 9)


def test_event_F_frequency_matches_bruteforce():
    rng = np.random.default_rng(0)
    n, hits = 200_000, 0
    starts = rng.choice([-1, 1], size=(n, 2))
    steps = rng.choice([-1, 1], size=(n, 2, 3))
    s = np.concatenate([starts[:, :1], starts[:, :1] + np.cumsum(steps[:, 0], axis=1)], axis=1)
    st = np.concatenate([starts[:, 1:], starts[:, 1:] + np.cumsum(steps[:, 1], axis=1)], axis=1)
    hits = sum(event_F(s[i], st[i], 1, 3) for i in range(20000))
    p = oracles.f_event_probability_bruteforce(1, 3)
    assert hits / 20000 == pytest.approx(p, abs=4 * np.sqrt(p / 20000) + 1e-3)


def test_hitting_time():
    s = np.array([0, 1, 2, 1, 2, 3])
    assert hitting_time(s, 2, 5) == 2
    assert hitting_time(s, 5, 5) is None


def test_h_statistic_bounded_by_whole_window():
    for seed in range(8):
        pair = _grid_pair(seed)
        w, wt = extract_walk(pair.path_b), extract_walk(pair.path_bt)
        for cfg in (EstimatorConfig(), EstimatorConfig("mollified")):
            hs = h_statistic(pair, w, wt, 5, cfg)
            assert 0 <= hs.value <= hs.whole + 1e-12


def test_block_matrix_sums_to_full_window_ilt():
    pair = _grid_pair(3)
    w, wt = extract_walk(pair.path_b), extract_walk(pair.path_bt)
    xi = block_ilt_matrix(pair, w, wt, 4)
    dt = pair.path_b.dt
    full = mutual_ilt_binned(
        pair.path_b, pair.path_bt, None, (0.0, w.tau_index[5] * dt), (0.0, wt.tau_index[5] * dt)
    ).value
    assert xi.sum() == pytest.approx(full, rel=1e-10)
    assert block_ilt(pair, w, wt, 2, 3).value == pytest.approx(xi[2, 3], rel=1e-12)


def test_block_errors():
    pair = _grid_pair(4, exits=3)
    w, wt = extract_walk(pair.path_b), extract_walk(pair.path_bt)
    with pytest.raises(InsufficientData):
        block_ilt(pair, w, wt, 10, 0)
    exact = sample_walk_exact(5, 0.0, RngStream(1))
    with pytest.raises(UnsupportedMode):
        block_ilt(pair, exact, wt, 0, 0)
    other = extract_walk(sample_path(100, 1.0, 0.0, RngStream(2)))
    with pytest.raises(InvalidArgument):
        block_ilt(pair, other, wt, 0, 0)


def test_concentration_check_small():
    res = tau_concentration_check(20, 0.5, 5000, RngStream(8))
    assert res.chebyshev_bound == pytest.approx((2 / 3) / (20 * 0.25))
    assert res.empirical_prob <= res.chebyshev_bound

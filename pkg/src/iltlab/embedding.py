"""Exit-time random walks embedded in Brownian paths and their intersections.

``tau_0 = 0`` and ``tau_k`` is the first time after ``tau_{k-1}`` at which the
path has moved a unit away from ``S_{k-1}``; ``S_k = S_{k-1} +- 1``.  On a grid
the crossing is detected at the first grid point past the barrier and ``S_k``
is snapped back onto the lattice, so ``S`` is an exact unit-step walk while the
path itself may overshoot by at most one grid increment.

``exact`` walks skip the path entirely: the durations are drawn from the exit
time law by inverse transform and the signs are fair coin flips.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oracles
from .errors import InsufficientData, InvalidArgument, UnsupportedMode
from .estimators import (
    EstimatorConfig,
    histogram_product,
    kernel_pair_sum,
    midpoints,
    occupation_from_values,
)
from .paths import BrownianPair, PathGrid, sample_path_until_exits
from .rng import RngStream


@dataclass(frozen=True, eq=False)
class EmbeddedWalk:
    mode: str
    tau: np.ndarray
    s_values: np.ndarray
    source: PathGrid | None = None
    tau_index: np.ndarray | None = None
    level: float = 1.0

    @property
    def n_steps(self) -> int:
        return self.s_values.size - 1

    def signs(self) -> np.ndarray:
        return np.sign(np.diff(self.s_values)).astype(np.int64)

    def lattice(self) -> np.ndarray:
        """Walk positions as integers relative to the start (``(S_k - S_0) / level``)."""
        return np.rint((self.s_values - self.s_values[0]) / self.level).astype(np.int64)


def extract_walk(path: PathGrid, level: float = 1.0) -> EmbeddedWalk:
    """Grid-mode exit times and lattice-snapped positions of ``path``.

    Extraction stops at the path horizon; a path that never exits yields the
    walk ``[start]``.
    """
    if path.values.size < 2:
        raise InsufficientData("path needs at least two grid points")
    v = path.values
    n = v.size
    idx = [0]
    s = [float(v[0])]
    anchor = float(v[0])
    pos = 1
    span = 256
    while pos < n:
        stop = min(n, pos + span)
        hits = np.flatnonzero(np.abs(v[pos:stop] - anchor) >= level)
        if hits.size == 0:
            pos = stop
            span = min(span * 2, 1 << 16)
            continue
        i = pos + int(hits[0])
        anchor = anchor + level if v[i] > anchor else anchor - level
        idx.append(i)
        s.append(anchor)
        pos = i + 1
        span = 256
    tau_index = np.asarray(idx, dtype=np.int64)
    return EmbeddedWalk("grid", tau_index * path.dt, np.asarray(s), path, tau_index, level)


def sample_walk_exact(n: int, start: float, stream: RngStream, law: oracles.ExitTimeLaw | None = None) -> EmbeddedWalk:
    """Walk with exact exit-time durations and independent fair signs."""
    if n < 0:
        raise InvalidArgument("walk length must be nonnegative")
    law = law or oracles.DEFAULT_EXIT_LAW
    durations = sample_exit_times(n, stream.child(0), law)
    signs = 2 * stream.child(1).generator().integers(0, 2, size=n) - 1
    tau = np.concatenate([[0.0], np.cumsum(durations)])
    s = np.concatenate([[float(start)], float(start) + law.level * np.cumsum(signs)])
    return EmbeddedWalk("exact", tau, s, None, None, law.level)


def sample_exit_times(size: int, stream: RngStream, law: oracles.ExitTimeLaw | None = None) -> np.ndarray:
    """``size`` i.i.d. exit times by inverse transform of the series survival function."""
    law = law or oracles.DEFAULT_EXIT_LAW
    u = stream.generator().random(size)
    # u in [0, 1); survival(t) = 1 - u is the same law and keeps 1 - u in (0, 1]
    return law.inverse_survival(1.0 - u)


def sample_first_exit_grid(dt: float, stream: RngStream, level: float = 1.0) -> tuple[float, int]:
    """(tau_1, sign of S_1 - S_0) of a grid-detected first exit from a fresh path."""
    path = sample_path_until_exits(1, dt, 0.0, stream, level)
    w = extract_walk(path, level)
    return float(w.tau[1]), int(np.sign(w.s_values[1] - w.s_values[0]))


# ---------------------------------------------------------------------------
# discrete intersection objects


@dataclass(frozen=True, eq=False)
class IntersectionRecord:
    """Intersections of two walks on ``[1, n]^2``; index pairs are 1-based."""

    n: int
    q_n: int
    sigma: int | None
    lam: np.ndarray
    early: np.ndarray

    def early_set(self) -> set[tuple[int, int]]:
        return {(int(j), int(k)) for j, k in self.early}


def _positions(walk) -> np.ndarray:
    return walk.s_values if isinstance(walk, EmbeddedWalk) else np.asarray(walk)


def _require_steps(arr: np.ndarray, n: int, what: str = "walk") -> None:
    if arr.size - 1 < n:
        raise InsufficientData(f"{what} has {arr.size - 1} steps, {n} needed")


def intersection_matrix(walk, walk_tilde, n: int) -> np.ndarray:
    s = _positions(walk)
    st = _positions(walk_tilde)
    _require_steps(s, n)
    _require_steps(st, n, "tilde walk")
    return s[1 : n + 1, None] == st[None, 1 : n + 1]


def intersections(walk, walk_tilde, n: int) -> IntersectionRecord:
    """``Q_n``, ``sigma``, the intersection set and its early (minimal) elements.

    Accepts :class:`EmbeddedWalk` objects or plain position arrays.
    """
    eq = intersection_matrix(walk, walk_tilde, n)
    lam = np.argwhere(eq) + 1
    q_n = int(lam.shape[0])
    sigma = int(lam.max(axis=1).min()) if q_n else None
    # (j, k) is early iff it is the only intersection in [1, j] x [1, k]
    rect = eq.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    early = np.argwhere(eq & (rect == 1)) + 1
    return IntersectionRecord(n, q_n, sigma, lam, early)


def event_F(walk, walk_tilde, rho: int, l: int) -> bool:
    """``S_rho = S~_l`` and no other pair of ``[1, rho] x [1, l]`` intersects."""
    s = _positions(walk)
    st = _positions(walk_tilde)
    if not (1 <= rho <= l):
        raise InvalidArgument(f"need 1 <= rho <= l, got rho={rho}, l={l}")
    if s.size - 1 < rho or st.size - 1 < l:
        raise InvalidArgument("walks are shorter than the requested rectangle")
    eq = s[1 : rho + 1, None] == st[None, 1 : l + 1]
    return bool(eq[rho - 1, l - 1] and eq.sum() == 1)


def hitting_time(walk, z, n_max: int) -> int | None:
    s = _positions(walk)
    _require_steps(s, n_max)
    hits = np.flatnonzero(s[1 : n_max + 1] == z)
    return int(hits[0]) + 1 if hits.size else None


# ---------------------------------------------------------------------------
# block intersection local times


@dataclass(frozen=True)
class BlockIlt:
    j: int
    k: int
    value: float
    estimator: EstimatorConfig


@dataclass(frozen=True)
class HStatistic:
    n: int
    value: float
    q_n: int = 0
    whole: float = float("nan")


def _grid_walk(walk: EmbeddedWalk, name: str) -> EmbeddedWalk:
    if walk.mode != "grid" or walk.source is None or walk.tau_index is None:
        raise UnsupportedMode(f"{name}: block ILT needs a grid-mode walk extracted from a path")
    return walk


def _check_pair(pair: BrownianPair, walk: EmbeddedWalk, walk_tilde: EmbeddedWalk) -> None:
    _grid_walk(walk, "walk")
    _grid_walk(walk_tilde, "walk_tilde")
    if walk.source is not pair.path_b or walk_tilde.source is not pair.path_bt:
        raise InvalidArgument("walks must be extracted from the members of the given pair")


def _block_parts(path: PathGrid, tau_index: np.ndarray, blocks: int, config: EstimatorConfig, bw: float):
    parts = []
    for j in range(blocks):
        i0, i1 = int(tau_index[j]), int(tau_index[j + 1])
        if config.kind == "binned":
            parts.append(occupation_from_values(path.values, path.dt, bw, i0, i1, config.origin))
        else:
            parts.append(midpoints(path.values, i0, i1))
    return parts


def _block_value(a, b, config: EstimatorConfig, bw: float, dt: float) -> float:
    if config.kind == "binned":
        return histogram_product(a, b)
    return dt * dt * kernel_pair_sum(a, b, bw, config.kernel)


def block_ilt_matrix(
    pair: BrownianPair,
    walk: EmbeddedWalk,
    walk_tilde: EmbeddedWalk,
    n: int,
    estimator_config: EstimatorConfig | None = None,
) -> np.ndarray:
    """``xi[j, k]`` for ``0 <= j, k <= n`` (block j spans ``[tau_j, tau_{j+1}]``)."""
    _check_pair(pair, walk, walk_tilde)
    config = estimator_config or EstimatorConfig()
    if walk.n_steps < n + 1 or walk_tilde.n_steps < n + 1:
        raise InsufficientData(f"need {n + 1} exits on each path")
    dt = pair.path_b.dt
    bw = config.resolve_bandwidth(dt)
    a = _block_parts(pair.path_b, walk.tau_index, n + 1, config, bw)
    b = _block_parts(pair.path_bt, walk_tilde.tau_index, n + 1, config, bw)
    out = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        for k in range(n + 1):
            out[j, k] = _block_value(a[j], b[k], config, bw, dt)
    return out


def block_ilt(
    pair: BrownianPair,
    walk: EmbeddedWalk,
    walk_tilde: EmbeddedWalk,
    j: int,
    k: int,
    estimator_config: EstimatorConfig | None = None,
) -> BlockIlt:
    """ILT estimate restricted to ``[tau_j, tau_{j+1}] x [tau~_k, tau~_{k+1}]``."""
    _check_pair(pair, walk, walk_tilde)
    config = estimator_config or EstimatorConfig()
    if j < 0 or k < 0:
        raise InvalidArgument("block indices must be nonnegative")
    if walk.n_steps < j + 1 or walk_tilde.n_steps < k + 1:
        raise InsufficientData(f"blocks ({j}, {k}) need exits {j + 1} and {k + 1}")
    dt = pair.path_b.dt
    bw = config.resolve_bandwidth(dt)
    a = _block_parts(pair.path_b, walk.tau_index[j:], 1, config, bw)[0]
    b = _block_parts(pair.path_bt, walk_tilde.tau_index[k:], 1, config, bw)[0]
    return BlockIlt(j, k, _block_value(a, b, config, bw, dt), config)


def h_statistic(
    pair: BrownianPair,
    walk: EmbeddedWalk,
    walk_tilde: EmbeddedWalk,
    n: int,
    estimator_config: EstimatorConfig | None = None,
) -> HStatistic:
    """``H_n = sum_{j,k=1..n} 1{S_j = S~_k} xi_{j,k}``.

    ``whole`` carries the estimate over ``[0, tau_{n+1}] x [0, tau~_{n+1}]``
    (the sum of all blocks ``0..n``), which bounds ``H_n`` from above.
    """
    xi = block_ilt_matrix(pair, walk, walk_tilde, n, estimator_config)
    eq = intersection_matrix(walk, walk_tilde, n)
    value = float(xi[1:, 1:][eq].sum())
    return HStatistic(n, value, int(eq.sum()), float(xi.sum()))


# ---------------------------------------------------------------------------
# concentration of tau_n


@dataclass(frozen=True)
class ConcentrationCheck:
    empirical_prob: float
    chebyshev_bound: float
    count: int
    replicates: int


def tau_concentration_check(n: int, delta: float, replicates: int, stream: RngStream) -> ConcentrationCheck:
    """Empirical ``P{|tau_n - n E tau_1| >= n delta}`` next to ``Var(tau_1) / (n delta^2)``."""
    if n < 1 or not delta > 0:
        raise InvalidArgument("need n >= 1 and delta > 0")
    mean, var = oracles.tau1_moments()
    count = 0
    batch = max(1, 2_000_000 // n)
    for b, start in enumerate(range(0, replicates, batch)):
        m = min(batch, replicates - start)
        tau = sample_exit_times(m * n, stream.child(b)).reshape(m, n).sum(axis=1)
        count += int(np.count_nonzero(np.abs(tau - n * mean) >= n * delta))
    return ConcentrationCheck(count / replicates, var / (n * delta * delta), count, replicates)

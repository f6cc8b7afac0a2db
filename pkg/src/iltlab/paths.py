"""Brownian paths on uniform grids, path pairs and simple random walks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidConfiguration
from .rng import RngStream

MU_CORNERS = ((-1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (1.0, -1.0))

# child indices of a replicate stream; kept fixed so fast samplers can mirror them
PATH_B_STREAM = 0
PATH_BT_STREAM = 1
START_LAW_STREAM = 2


@dataclass(frozen=True, eq=False)
class PathGrid:
    """Brownian trajectory sampled at ``k * horizon / n_steps``, k = 0..n_steps."""

    values: np.ndarray
    horizon: float
    n_steps: int

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def dt_exact(self) -> Fraction:
        return Fraction(self.horizon).limit_denominator(1 << 40) / self.n_steps

    @property
    def start(self) -> float:
        return float(self.values[0])

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    def shifted(self, offset: float) -> "PathGrid":
        return PathGrid(self.values + offset, self.horizon, self.n_steps)


@dataclass(frozen=True)
class StartLaw:
    """Law of the starting pair ``(x, x_tilde)``: a point mass or ``mu``.

    ``mu`` puts mass 1/4 on each of (-1,-1), (1,1), (-1,1), (1,-1).
    """

    kind: str = "point"
    x: float = 0.0
    x_tilde: float = 0.0

    def __post_init__(self):
        if self.kind not in ("point", "mu"):
            raise InvalidConfiguration(f"unknown start law {self.kind!r}")

    @classmethod
    def point(cls, x: float = 0.0, x_tilde: float = 0.0) -> "StartLaw":
        return cls("point", float(x), float(x_tilde))

    @classmethod
    def mu(cls) -> "StartLaw":
        return cls("mu")

    def sample(self, stream: RngStream) -> tuple[float, float]:
        if self.kind == "point":
            return (self.x, self.x_tilde)
        corner = int(stream.generator().integers(4))
        return MU_CORNERS[corner]

    def to_dict(self) -> dict:
        if self.kind == "mu":
            return {"kind": "mu"}
        return {"kind": "point", "x": self.x, "x_tilde": self.x_tilde}

    @classmethod
    def from_dict(cls, d: dict) -> "StartLaw":
        if d.get("kind") == "mu":
            return cls.mu()
        return cls.point(d.get("x", 0.0), d.get("x_tilde", 0.0))


@dataclass(frozen=True, eq=False)
class BrownianPair:
    path_b: PathGrid
    path_bt: PathGrid
    start_pair: tuple[float, float]


def _check_grid(n_steps: int, horizon: float) -> None:
    if int(n_steps) != n_steps or n_steps < 1:
        raise InvalidConfiguration(f"n_steps must be a positive integer, got {n_steps!r}")
    if not horizon > 0:
        raise InvalidConfiguration(f"horizon must be positive, got {horizon!r}")


def brownian_values(gen: np.random.Generator, n_steps: int, dt: float, start: float) -> np.ndarray:
    out = np.empty(n_steps + 1)
    out[0] = start
    steps = gen.standard_normal(n_steps)
    steps *= np.sqrt(dt)
    np.cumsum(steps, out=out[1:])
    out[1:] += start
    return out


def sample_path(n_steps: int, horizon: float, start: float, stream: RngStream) -> PathGrid:
    """Exact Gaussian-increment discretisation of Brownian motion on ``[0, horizon]``."""
    _check_grid(n_steps, horizon)
    n_steps = int(n_steps)
    values = brownian_values(stream.generator(), n_steps, horizon / n_steps, float(start))
    return PathGrid(values, float(horizon), n_steps)


def sample_pair(n_steps: int, horizon: float, start_law: StartLaw, stream: RngStream) -> BrownianPair:
    """Two independent paths; each member and the start law draw from their own sub-stream."""
    _check_grid(n_steps, horizon)
    x, xt = start_law.sample(stream.child(START_LAW_STREAM))
    b = sample_path(n_steps, horizon, x, stream.child(PATH_B_STREAM))
    bt = sample_path(n_steps, horizon, xt, stream.child(PATH_BT_STREAM))
    return BrownianPair(b, bt, (x, xt))


def sample_simple_walk(n: int, start: int, stream: RngStream) -> np.ndarray:
    if n < 0:
        raise InvalidConfiguration(f"walk length must be nonnegative, got {n}")
    steps = 2 * stream.generator().integers(0, 2, size=int(n), dtype=np.int64) - 1
    out = np.empty(int(n) + 1, dtype=np.int64)
    out[0] = start
    np.cumsum(steps, out=out[1:])
    out[1:] += start
    return out


def sample_path_until_exits(
    n_exits: int,
    dt: float,
    start: float,
    stream: RngStream,
    level: float = 1.0,
    chunk_steps: int | None = None,
) -> PathGrid:
    """Grow a path chunk by chunk until it has made ``n_exits`` unit exits.

    Exit detection follows :func:`iltlab.embedding.extract_walk`; the result is
    a prefix-consistent path (a longer request on the same stream only appends
    chunks), so truncation never changes the law of the first ``n_exits`` exits.
    """
    if not dt > 0:
        raise InvalidConfiguration("dt must be positive")
    if chunk_steps is None:
        chunk_steps = max(64, int(round(1.0 / dt)))
    gen = stream.generator()
    sd = np.sqrt(dt)
    pieces = [np.array([float(start)])]
    last = float(start)
    anchor = float(start)
    found = 0
    while found < n_exits:
        inc = gen.standard_normal(chunk_steps) * sd
        chunk = last + np.cumsum(inc)
        pos = 0
        while found < n_exits:
            hits = np.flatnonzero(np.abs(chunk[pos:] - anchor) >= level)
            if hits.size == 0:
                break
            i = pos + hits[0]
            anchor += level if chunk[i] > anchor else -level
            found += 1
            pos = i + 1
        pieces.append(chunk)
        last = float(chunk[-1])
    values = np.concatenate(pieces)
    n_steps = values.size - 1
    return PathGrid(values, n_steps * dt, n_steps)

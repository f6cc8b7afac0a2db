"""Experiment configuration: strict JSON parsing, defaults and serialisation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

from .errors import InvalidConfiguration
from .estimators import KERNELS, EstimatorConfig
from .lab import DEFAULT_EPS_WINDOW, POINTS_PER_DECADE, SimConfig, log_grid
from .paths import StartLaw

EXPERIMENTS = (
    "small-dev",
    "fit",
    "scaling",
    "neg-moment",
    "no-intersect",
    "hitting-tail",
    "tau-tail",
    "calibrate-a",
    "upper-tail",
    "oracle",
    "validate",
)

# Axis grids used when the config does not give one.
DEFAULT_GRIDS = {
    "small-dev": lambda: log_grid(*DEFAULT_EPS_WINDOW, POINTS_PER_DECADE).tolist(),
    "fit": lambda: log_grid(*DEFAULT_EPS_WINDOW, POINTS_PER_DECADE).tolist(),
    "no-intersect": lambda: [32, 64, 128, 256, 512],
    "hitting-tail": lambda: [64, 128, 256, 512, 1024],
    "tau-tail": lambda: [4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0],
    "calibrate-a": lambda: log_grid(1e-4, 0.1, 4).tolist(),
    "upper-tail": lambda: [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5],
}

# Selectable modes; the first is the default.
MODES = {
    "no-intersect": ("exact", "mc"),
    "tau-tail": ("series", "exact", "grid"),
}


@dataclass
class ExperimentConfig:
    """Everything needed to re-run one experiment.

    ``grid`` is the x-axis of the experiment (eps, n, t, a or u); ``None``
    selects the documented default for the experiment.
    """

    experiment: str
    master_seed: int = 0
    replicates: int = 200_000
    n_steps: int = 4096
    horizon: float = 1.0
    bandwidth: float | None = None
    estimator: str = "binned"
    kernel: str = "epanechnikov"
    functional: str = "mutual"
    dim: int = 1
    start_law: dict = field(default_factory=lambda: {"kind": "point", "x": 0.0, "x_tilde": 0.0})
    grid: list | None = None
    window: list | None = None
    p_list: list = field(default_factory=lambda: [0.0, 1.0 / 3.0, 1.0])
    t: float = 2.0
    exponent: float = 1.5
    z: int = 0
    mode: str | None = None
    dt: float = 1.0 / 16384
    target: float = 0.05
    source: str | None = None
    query: dict | None = None
    workers: int = 1
    out_dir: str = "results"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(key, why):
            raise InvalidConfiguration(f"{key}: {why}")

        if self.experiment not in EXPERIMENTS:
            bad("experiment", f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for key in ("master_seed", "replicates", "n_steps", "dim", "z", "workers"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, int):
                bad(key, f"expected an integer, got {v!r}")
        if not 0 <= self.master_seed < 2**64:
            bad("master_seed", "must be a 64-bit unsigned integer")
        if self.replicates < 1:
            bad("replicates", f"must be positive, got {self.replicates}")
        if self.n_steps < 1:
            bad("n_steps", f"must be positive, got {self.n_steps}")
        if self.workers < 1:
            bad("workers", f"must be positive, got {self.workers}")
        for key in ("horizon", "t", "exponent", "dt", "target"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                bad(key, f"must be a positive number, got {v!r}")
        if self.bandwidth is not None and (not isinstance(self.bandwidth, (int, float)) or not self.bandwidth > 0):
            bad("bandwidth", f"must be positive or null, got {self.bandwidth!r}")
        if self.estimator not in ("binned", "mollified"):
            bad("estimator", f"unknown estimator {self.estimator!r}")
        if self.kernel not in KERNELS:
            bad("kernel", f"unknown kernel {self.kernel!r}")
        if self.functional not in ("mutual", "self"):
            bad("functional", f"unknown functional {self.functional!r}")
        if self.dim not in (1, 2):
            bad("dim", "must be 1 or 2")
        modes = MODES.get(self.experiment, ())
        if self.mode is not None and self.mode not in modes:
            allowed = ", ".join(modes) if modes else "none"
            bad("mode", f"{self.mode!r} is not a mode of {self.experiment} (allowed: {allowed})")
        if not isinstance(self.start_law, dict):
            bad("start_law", "expected an object")
        extra = set(self.start_law) - {"kind", "x", "x_tilde"}
        if extra:
            bad(f"start_law.{sorted(extra)[0]}", "unknown key")
        if self.start_law.get("kind") not in ("point", "mu"):
            bad("start_law.kind", "must be 'point' or 'mu'")
        if self.grid is not None:
            if not isinstance(self.grid, list) or not self.grid:
                bad("grid", "expected a non-empty list")
            for i, v in enumerate(self.grid):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                    bad(f"grid[{i}]", f"must be a positive number, got {v!r}")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                bad("grid", "must be strictly ascending")
        if self.window is not None:
            if not isinstance(self.window, list) or len(self.window) != 2 or not 0 < self.window[0] < self.window[1]:
                bad("window", "expected [lo, hi] with 0 < lo < hi")
        if not isinstance(self.p_list, list) or any(isinstance(p, bool) or not isinstance(p, (int, float)) or p < 0 for p in self.p_list):
            bad("p_list", "expected a list of nonnegative numbers")
        if self.experiment == "oracle":
            if not isinstance(self.query, dict) or "name" not in self.query:
                bad("query", "oracle experiments need {\"name\": ..., \"args\": {...}}")
            extra = set(self.query) - {"name", "args"}
            if extra:
                bad(f"query.{sorted(extra)[0]}", "unknown key")
        try:
            self.sim_config()
        except InvalidConfiguration as exc:
            bad("estimator", str(exc))

    # -- derived objects ----------------------------------------------------

    def resolved_grid(self) -> list:
        if self.grid is not None:
            return list(self.grid)
        make = DEFAULT_GRIDS.get(self.experiment)
        return make() if make else []

    def resolved_mode(self) -> str | None:
        if self.mode is not None:
            return self.mode
        modes = MODES.get(self.experiment)
        return modes[0] if modes else None

    def sim_config(self, workers: int | None = None) -> SimConfig:
        return SimConfig(
            n_steps=self.n_steps,
            horizon=float(self.horizon),
            estimator=EstimatorConfig(self.estimator, self.bandwidth, self.kernel),
            start_law=StartLaw.from_dict(self.start_law),
            functional=self.functional,
            dim=self.dim,
            workers=workers or self.workers,
        )

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise InvalidConfiguration("config: expected a JSON object")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise InvalidConfiguration(f"{key}: unknown key")
        if "experiment" not in data:
            raise InvalidConfiguration("experiment: missing required field")
        d = dict(data)
        if isinstance(d.get("start_law"), dict):
            sl = dict(d["start_law"])
            if sl.get("kind") == "point":
                sl.setdefault("x", 0.0)
                sl.setdefault("x_tilde", 0.0)
            d["start_law"] = sl
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfiguration(f"config: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


def parse_config(path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config file (if any) and apply flag overrides on top."""
    data: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfiguration(f"config: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise InvalidConfiguration("config: expected a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return ExperimentConfig.from_dict(data)

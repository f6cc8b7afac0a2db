"""Experiment dispatch, result records, persistence and rendering."""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__, lab, oracles
from .config import ExperimentConfig
from .errors import CalibrationFailure, InvalidConfiguration
from .parallel import resolve_workers
from .rng import RngStream
from .validation import run_checks

CURVE_COLUMNS = ("x", "count", "replicates", "p_hat", "ci_low", "ci_high", "flag")

ORACLE_QUERIES = {
    "tau1_survival": oracles.tau1_survival,
    "tau1_moments": oracles.tau1_moments,
    "reflection_probability": oracles.reflection_probability,
    "expected_mutual_ilt": oracles.expected_mutual_ilt,
    "expected_self_ilt": oracles.expected_self_ilt,
    "no_intersection_exact": oracles.no_intersection_exact,
    "no_intersection_enumerated": oracles.no_intersection_enumerated,
    "no_intersection_pair": oracles.no_intersection_pair,
    "hitting_pmf_exact": oracles.hitting_pmf_exact,
    "hitting_pmf_mu": oracles.hitting_pmf_mu,
    "hitting_tail_mu": oracles.hitting_tail_mu,
    "max_law": oracles.max_law,
    "min_law": oracles.min_law,
    "f_event_probability": oracles.f_event_probability_bruteforce,
    "f_event_bound": oracles.f_event_bound,
    "q_n_law": oracles.q_n_law_enumerated,
}


@dataclass
class ResultRecord:
    """Self-describing output of one run; ``config`` alone suffices to reproduce it."""

    experiment: str
    config: dict
    status: str = "ok"
    curve: dict | None = None
    statistics: dict = field(default_factory=dict)
    message: str = ""
    exploratory: bool = False
    version: str = __version__
    started: str = ""
    finished: str = ""
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "status": self.status,
            "message": self.message,
            "exploratory": self.exploratory,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "wall_clock": self.wall_clock,
            "config": self.config,
            "statistics": self.statistics,
            "curve": self.curve,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        return cls(**{k: d[k] for k in d})

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def curve_to_dict(curve: lab.DeviationCurve) -> dict:
    return _jsonable(
        {
            "axis": curve.axis,
            "columns": list(CURVE_COLUMNS),
            "rows": [list(r) for r in curve.to_rows()],
            "estimator_config": curve.estimator_config,
            "meta": curve.meta,
        }
    )


def curve_from_dict(d: dict) -> lab.DeviationCurve:
    pts = [lab.CurvePoint(r[0], r[1], r[2], r[3], r[4], r[5], bool(r[6])) for r in d["rows"]]
    return lab.DeviationCurve(d["axis"], pts, d.get("estimator_config", {}), d.get("meta", {}))


def _fit_stats(fit: lab.ExponentFit | None) -> dict:
    return {"fit": None} if fit is None else {"fit": fit.to_dict()}


# ---------------------------------------------------------------------------
# experiments; each returns (curve or None, statistics)


def _stream(cfg: ExperimentConfig) -> RngStream:
    return RngStream(cfg.master_seed)


def _small_dev(cfg, workers):
    sim = cfg.sim_config(workers)
    curve = lab.small_deviation_curve(cfg.resolved_grid(), cfg.replicates, sim, _stream(cfg))
    stats = {"floor": curve.meta["floor"], "bandwidth": sim.bandwidth, "flagged": int(curve.flags.sum())}
    return curve, stats


def _fit(cfg, workers):
    if cfg.source:
        with open(cfg.source, encoding="utf-8") as fh:
            src = json.load(fh)
        if not src.get("curve"):
            raise InvalidConfiguration("source: record has no curve")
        curve = curve_from_dict(src["curve"])
        stats = {"source": cfg.source}
    else:
        curve, stats = _small_dev(cfg, workers)
    fit = lab.fit_exponent(curve, cfg.window)
    stats.update(_fit_stats(fit))
    try:
        stats["log_curvature"] = lab.log_curvature(curve, cfg.window)
    except Exception:
        stats["log_curvature"] = None
    return curve, stats


def _scaling(cfg, workers):
    sim = cfg.sim_config(workers)
    res = lab.scaling_law_test(cfg.t, cfg.replicates, sim, _stream(cfg), cfg.exponent)
    return None, {
        "ks_statistic": res.ks_statistic,
        "p_value": res.p_value,
        "t": res.t,
        "exponent": res.exponent,
        "n_steps_t": res.n_steps_t,
        "n_steps_unit": res.n_steps_unit,
    }


def _neg_moment(cfg, workers):
    sim = cfg.sim_config(workers)
    samples = lab.ilt_samples(sim, cfg.replicates, _stream(cfg))
    floor = lab.estimator_floor(sim)
    reports = lab.negative_moment_diagnostic(samples, cfg.p_list, floor)
    return None, {
        "floor": floor,
        "moments": [
            {
                "p": r.p,
                "sizes": list(r.sizes),
                "running_means": list(r.running_means),
                "last_change": r.last_change,
                "max_change": r.max_change,
                "max_share": r.max_share,
                "below_floor": r.below_floor,
                "verdict": r.verdict,
            }
            for r in reports
        ],
    }


def _no_intersect(cfg, workers):
    mode = "exact" if cfg.resolved_mode() == "exact" else cfg.replicates
    grid = [int(v) for v in cfg.resolved_grid()]
    curve, fit = lab.no_intersection_decay(grid, mode, _stream(cfg), cfg.window)
    return curve, {"mode": cfg.resolved_mode(), **_fit_stats(fit)}


def _hitting_tail(cfg, workers):
    grid = [int(v) for v in cfg.resolved_grid()]
    fit = lab.hitting_tail_decay(cfg.z, grid, cfg.window)
    return fit.curve, {"z": cfg.z, **_fit_stats(fit)}


def _tau_tail(cfg, workers):
    grid = np.asarray(cfg.resolved_grid(), dtype=float)
    mode = cfg.resolved_mode()
    slope = lab.tau_tail_slope(grid, mode, cfg.replicates, _stream(cfg), cfg.dt, workers)
    series = oracles.tau1_survival(grid)
    curve = lab.DeviationCurve.exact("t", grid, series, meta={"series_survival": True})
    return curve, {"mode": mode, "slope": slope, "reference": math.pi**2 / 8}


def _calibrate_a(cfg, workers):
    sim = cfg.sim_config(workers)
    cal = lab.calibrate_a(cfg.resolved_grid(), cfg.replicates, sim, _stream(cfg), cfg.target)
    return cal.curve, {
        "a": cal.a,
        "p_hat": cal.p_hat,
        "ci_low": cal.ci_low,
        "ci_high": cal.ci_high,
        "target": cal.target,
        "atom": cal.atom,
    }


def _upper_tail(cfg, workers):
    sim = cfg.sim_config(workers)
    probe = lab.upper_tail_probe(cfg.resolved_grid(), cfg.replicates, sim, _stream(cfg))
    return probe.curve, {"transform": probe.transform, "functional": probe.functional}


def _oracle(cfg, workers):
    name = cfg.query["name"]
    if name not in ORACLE_QUERIES:
        raise InvalidConfiguration(f"query.name: unknown oracle {name!r}; choose from {', '.join(ORACLE_QUERIES)}")
    args = cfg.query.get("args") or {}
    try:
        value = ORACLE_QUERIES[name](**args)
    except TypeError as exc:
        raise InvalidConfiguration(f"query.args: {exc}") from exc
    return None, {"query": cfg.query, "value": value}


def _validate(cfg, workers):
    results = run_checks()
    return None, {
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
    }


DISPATCH = {
    "small-dev": _small_dev,
    "fit": _fit,
    "scaling": _scaling,
    "neg-moment": _neg_moment,
    "no-intersect": _no_intersect,
    "hitting-tail": _hitting_tail,
    "tau-tail": _tau_tail,
    "calibrate-a": _calibrate_a,
    "upper-tail": _upper_tail,
    "oracle": _oracle,
    "validate": _validate,
}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def run(config: ExperimentConfig) -> ResultRecord:
    """Dispatch ``config`` and wrap the outcome in a record.

    Calibration failures are captured into a record with status ``failed`` so
    the measured curve is still persisted; other library errors propagate.
    """
    workers = resolve_workers(config.workers)
    rec = ResultRecord(config.experiment, config.to_dict(), started=_now())
    rec.exploratory = config.experiment == "upper-tail" or config.dim == 2
    t0 = time.perf_counter()
    try:
        curve, stats = DISPATCH[config.experiment](config, workers)
    except CalibrationFailure as exc:
        curve, stats = exc.curve, {"atom": exc.atom, "target": config.target}
        rec.status, rec.message = "failed", str(exc)
    rec.curve = curve_to_dict(curve) if curve is not None else None
    rec.statistics = _jsonable(stats)
    if config.experiment == "validate" and stats["failed"]:
        rec.status, rec.message = "failed", f"{stats['failed']} invariant checks failed"
    rec.wall_clock = round(time.perf_counter() - t0, 3)
    rec.finished = _now()
    return rec


# ---------------------------------------------------------------------------
# persistence and rendering


def _g(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _flatten(prefix: str, v, out: list) -> None:
    if isinstance(v, dict):
        for k in sorted(v):
            _flatten(f"{prefix}.{k}" if prefix else str(k), v[k], out)
    elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, out)
    elif isinstance(v, list):
        out.append((prefix, ";".join(_g(x) for x in v)))
    else:
        out.append((prefix, _g(v)))


def render_flat(record: ResultRecord) -> str:
    """CSV text: one row per curve point, or key/value rows when there is no curve."""
    if record.curve is not None:
        lines = [",".join(CURVE_COLUMNS)]
        lines += [",".join(_g(v) for v in row) for row in record.curve["rows"]]
    else:
        rows: list = []
        _flatten("", record.statistics, rows)
        lines = ["key,value"] + [f"{k},{v}" for k, v in rows]
    return "\n".join(lines) + "\n"


def render_table(record: ResultRecord) -> str:
    out = [f"experiment: {record.experiment}   status: {record.status}   seed: {record.config.get('master_seed')}"]
    if record.exploratory:
        out.append("exploratory: no acceptance tolerance applies")
    if record.message:
        out.append(f"message: {record.message}")
    fit = record.statistics.get("fit")
    if fit:
        out.append(
            f"slope: {fit['slope']:.4f} +- {fit['stderr']:.4f}  ({fit['method']}, {fit['n_points']} points, "
            f"window {fit['window'][0]:.4g}..{fit['window'][1]:.4g})"
        )
    if record.curve is not None:
        out.append(f"{'x':>12} {'count':>9} {'reps':>9} {'p_hat':>12} {'ci_low':>12} {'ci_high':>12} flag")
        for x, c, r, p, lo, hi, flag in record.curve["rows"]:
            cs = "-" if c is None else str(c)
            rs = "-" if r is None else str(r)
            out.append(f"{x:>12.6g} {cs:>9} {rs:>9} {p:>12.6g} {lo:>12.6g} {hi:>12.6g} {'*' if flag else ''}")
    rows: list = []
    _flatten("", {k: v for k, v in record.statistics.items() if k != "fit"}, rows)
    for k, v in rows:
        out.append(f"{k}: {v}")
    return "\n".join(out) + "\n"


def report(record: ResultRecord, fmt: str = "table") -> str:
    if fmt == "table":
        return render_table(record)
    if fmt == "flat":
        return render_flat(record)
    raise InvalidConfiguration(f"format: unknown format {fmt!r}; choose table or flat")


def record_stem(record: ResultRecord) -> str:
    return f"{record.experiment}-seed{record.config.get('master_seed', 0)}"


def save_record(record: ResultRecord, out_dir: str) -> tuple[str, str]:
    """Write ``<stem>.json`` and ``<stem>.csv`` under ``out_dir``; returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, record_stem(record))
    with open(stem + ".json", "w", encoding="utf-8") as fh:
        json.dump(record.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(stem + ".csv", "w", encoding="utf-8") as fh:
        fh.write(render_flat(record))
    return stem + ".json", stem + ".csv"


def load_record(path: str) -> ResultRecord:
    with open(path, encoding="utf-8") as fh:
        return ResultRecord.from_dict(json.load(fh))

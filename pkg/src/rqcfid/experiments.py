"""Monte Carlo orchestration: estimators, parameter sweeps, the heavy-output
vs fidelity scatter, and CSV/JSON persistence."""
from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Optional, Sequence

import numpy as np

from . import analytics
from .circuits import (BRICKWALL, SOLVABLE, CircuitConfig,
                       run_brickwall_trial, run_fidelity_trial,
                       run_heavy_output_trial, run_solvable_trial)
from .mc import Estimate, estimate
from .routing import Architecture, NoiseParams
from .seeding import Seed

__all__ = [
    "Estimate", "estimate", "SweepSpec", "SweepRow", "FitResult",
    "ScatterPoint", "ScatterResult", "fidelity_value", "fidelity_estimate",
    "brickwall_estimate", "analytic_prediction", "run_sweep",
    "hu_vs_f_scatter", "write_results",
]


# ---------------------------------------------------------------- estimators

def fidelity_value(config: CircuitConfig, seed: Seed) -> float:
    """Single fidelity sample for any circuit model (picklable trial)."""
    if config.model == SOLVABLE:
        return run_solvable_trial(config, seed).fidelity
    if config.model == BRICKWALL:
        return run_brickwall_trial(config.num_qubits, config.depth,
                                   config.noise.alpha, seed).fidelity
    return run_fidelity_trial(config, seed).fidelity


def fidelity_estimate(config: CircuitConfig, n: int, seed: Seed,
                      workers: Optional[int] = None) -> Estimate:
    return estimate(partial(fidelity_value, config), n, seed, workers=workers)


def brickwall_estimate(num_qubits: int, depth: int, alpha: float, n: int,
                       seed: Seed, workers: Optional[int] = None) -> Estimate:
    config = CircuitConfig(num_qubits, depth, Architecture.fully_connected(),
                           NoiseParams(alpha=alpha), model=BRICKWALL)
    return fidelity_estimate(config, n, seed, workers=workers)


def analytic_prediction(config: CircuitConfig) -> float:
    """Closed-form reference for a config: the solvable-model fidelity with
    the architecture's default delta, or the brick-wall perturbative value."""
    if config.model == BRICKWALL:
        return analytics.brickwall_fidelity_perturbative(
            config.num_qubits, config.depth, config.noise.alpha)
    delta = analytics.delta_formula(
        config.arch, config.num_qubits, config.noise.p,
        analytics.default_delta_mode(config.arch))
    return analytics.solvable_fidelity(config.num_qubits, config.depth,
                                       config.noise.alpha, delta)


# ---------------------------------------------------------------- sweeps

_AXES = ("T", "alpha", "p", "L")


@dataclass(frozen=True)
class SweepSpec:
    """Template config plus one varying axis."""

    config: CircuitConfig
    axis: str
    values: tuple
    trials: int

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of {_AXES}")
        if len(self.values) < 1:
            raise ValueError("need at least one axis value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("axis values must be strictly increasing")
        if self.trials < 2:
            raise ValueError("need at least two trials per point")

    def config_at(self, value) -> CircuitConfig:
        cfg = self.config
        if self.axis == "T":
            return replace(cfg, depth=int(value))
        if self.axis == "L":
            if cfg.arch.kind == "grid":
                raise ValueError("cannot sweep L on a fixed grid")
            return replace(cfg, num_qubits=int(value))
        if self.axis == "alpha":
            return replace(cfg, noise=replace(cfg.noise, alpha=float(value)))
        noise = cfg.noise
        if noise.pulse_mode:
            raise ValueError("sweep p directly, not through sigma")
        return replace(cfg, noise=replace(noise, p=float(value)))


@dataclass(frozen=True)
class SweepRow:
    model: str
    arch: str
    L: int
    T: int
    alpha: float
    p: float
    trials: int
    mc_mean: float
    mc_stderr: float
    analytic: float
    zscore: float


def run_sweep(spec: SweepSpec, seed: Seed,
              workers: Optional[int] = None) -> list[SweepRow]:
    """One row per axis value: MC estimate, analytic reference and z-score."""
    rows = []
    for i, value in enumerate(spec.values):
        cfg = spec.config_at(value)
        est = fidelity_estimate(cfg, spec.trials, seed.child(i), workers=workers)
        ref = analytic_prediction(cfg)
        rows.append(SweepRow(
            model=cfg.model, arch=cfg.arch.label(), L=cfg.num_qubits,
            T=cfg.depth, alpha=cfg.noise.alpha, p=cfg.noise.p,
            trials=spec.trials, mc_mean=est.mean, mc_stderr=est.stderr,
            analytic=ref, zscore=est.z_against(ref)))
    return rows


# ---------------------------------------------------------------- scatter

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class ScatterPoint:
    arch: str
    L: int
    T: int
    alpha: float
    p: float
    f_mean: float
    f_stderr: float
    h_mean: float
    h_stderr: float
    h_ideal_mean: float


@dataclass(frozen=True)
class ScatterResult:
    points: tuple[ScatterPoint, ...]
    fit: Optional[FitResult]        # None when the abscissa is degenerate
    map_rms: float                  # RMS of the linear-map back-prediction


def _heavy_chunk(config: CircuitConfig, seed: Seed, indices) -> list[tuple]:
    out = []
    for i in indices:
        r = run_heavy_output_trial(config, seed.child(i))
        out.append((r.fidelity, r.h_ideal, r.h_faulty))
    return out


def _heavy_samples(config: CircuitConfig, n: int, seed: Seed,
                   workers: Optional[int]) -> np.ndarray:
    vals = np.empty((n, 3))
    if workers is None or workers <= 1:
        vals[:] = _heavy_chunk(config, seed, range(n))
    else:
        chunks = np.array_split(np.arange(n), min(workers * 4, n))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [(c, pool.submit(_heavy_chunk, config, seed, list(c)))
                    for c in chunks if len(c)]
            for c, fut in futs:
                vals[c] = fut.result()
    return vals


def ols_fit(x: np.ndarray, y: np.ndarray) -> Optional[FitResult]:
    """Ordinary least squares y = a*x + b; None if x is (nearly) constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or float(np.var(x)) < 1e-14:
        return None
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(slope=float(slope), intercept=float(intercept), r_squared=r2)


def hu_vs_f_scatter(configs: Sequence[CircuitConfig], trials: int, seed: Seed,
                    workers: Optional[int] = None) -> ScatterResult:
    """Mean (fidelity, heavy-output) point per config, the least-squares line
    of h on F, and the RMS residual of the linear heavy-output-to-fidelity
    map evaluated with each config's own ideal heavy-output mean."""
    if len(configs) < 2:
        raise ValueError("need at least two configs for a scatter")
    points = []
    for i, cfg in enumerate(configs):
        vals = _heavy_samples(cfg, trials, seed.child(i), workers)
        f, hi, hf = vals[:, 0], vals[:, 1], vals[:, 2]
        points.append(ScatterPoint(
            arch=cfg.arch.label(), L=cfg.num_qubits, T=cfg.depth,
            alpha=cfg.noise.alpha, p=cfg.noise.p,
            f_mean=float(f.mean()), f_stderr=float(f.std(ddof=1) / np.sqrt(trials)),
            h_mean=float(hf.mean()), h_stderr=float(hf.std(ddof=1) / np.sqrt(trials)),
            h_ideal_mean=float(hi.mean())))
    fit = ols_fit(np.array([p.f_mean for p in points]),
                  np.array([p.h_mean for p in points]))
    sq = 0.0
    for p in points:
        back = analytics.fidelity_from_heavy_output(p.h_mean, p.h_ideal_mean, p.L)
        sq += (back - p.f_mean) ** 2
    return ScatterResult(points=tuple(points), fit=fit,
                         map_rms=float(np.sqrt(sq / len(points))))


# ---------------------------------------------------------------- persistence

def _row_dict(row) -> dict:
    if dataclasses.is_dataclass(row):
        return dataclasses.asdict(row)
    return dict(row)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_results(rows: Sequence, path, fmt: str = "csv",
                  columns: Optional[Sequence[str]] = None) -> None:
    """Write rows (dataclasses or dicts) with deterministic order and
    round-trip-exact floats (17 significant digits)."""
    dicts = [_row_dict(r) for r in rows]
    if columns is None:
        if not dicts:
            raise ValueError("empty table needs explicit columns")
        columns = list(dicts[0].keys())
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for d in dicts:
                writer.writerow([_fmt(d[c]) for c in columns])
    elif fmt == "json":
        payload = [{c: d[c] for c in columns} for d in dicts]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")

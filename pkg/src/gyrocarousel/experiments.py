"""Monte Carlo experiments and static gyro-log analysis.

Experiments are described by an :class:`ExperimentConfig` and produce a
:class:`~gyrocarousel.reports.Report`. Realization ``r`` always draws from
``seed.spawn(r)`` (x gyro from ``.spawn(0)``, y gyro from ``.spawn(1)``), so
results do not depend on how realizations are split between workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy import stats

from .allan import (
    GyroErrorParams,
    allan_statistic,
    allan_variance,
    analysis_taus,
    estimate_params,
    exceedance_fraction,
    integrate_angle,
    per_sample_levels,
    predict_interval,
)
from .carousel import (
    CarouselConfig,
    carousel_average,
    coefficient_vectors,
    direct_average,
    flicker_gain_vectors,
    predict_avg_rrw,
    predict_carousel_rrw,
    predict_flicker,
)
from .constant_avar import gen_R, gen_S, pinv_apply
from .logs import GyroLog, ingest
from .noise import fractional_integrate, white_draws
from .reports import Report
from .series import InvalidParameterError, SampleSeries, Seed

EXPERIMENTS = ("rrw-variance", "flicker-variance", "flicker-gain", "const-avar-check", "static-analysis")

#: Error levels of the two gyros of the one-hour static recording (x, y).
REFERENCE_GYRO_PARAMS = (
    GyroErrorParams(3e-7, 3e-10, 1e-5),
    GyroErrorParams(1e-7, 2e-10, 6e-5),
)

# realizations per work unit; fixed so output never depends on worker count
CHUNK = 50


@dataclass
class ExperimentConfig:
    """Everything needed to regenerate one report.

    Only the fields used by ``experiment`` matter; the rest keep defaults.
    ``gyro_x``/``gyro_y`` hold :class:`GyroErrorParams` dictionaries for the
    synthetic static log, used when ``log_path`` is empty.
    """

    experiment: str
    realizations: int = 1000
    samples_per_rev: int = 200
    period: float = 2.0
    bins: int = 50
    variance: float = 1.0
    d: float = 0.5
    seed: int = 0
    stream: int = 0
    levels: int = 10
    dimension: int = 10000
    log_path: str | None = None
    units: str = "rad"
    axes: tuple = ("gx", "gy")
    warmup_skip: float = 0.0
    tau_white: float = 1.0
    tau_rrw: float | None = None
    duration: float = 3600.0
    sample_rate: float = 100.0
    gyro_x: dict = field(default_factory=lambda: REFERENCE_GYRO_PARAMS[0].to_dict())
    gyro_y: dict = field(default_factory=lambda: REFERENCE_GYRO_PARAMS[1].to_dict())
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidParameterError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.realizations < 1 or self.bins < 1 or self.levels < 1 or self.dimension < 1:
            raise InvalidParameterError("realizations, bins, levels and dimension must be >= 1")
        if self.format not in ("csv", "json"):
            raise InvalidParameterError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")
        self.axes = tuple(self.axes)
        CarouselConfig(self.samples_per_rev, self.period)
        Seed(self.seed, self.stream)

    @property
    def carousel(self) -> CarouselConfig:
        return CarouselConfig(self.samples_per_rev, self.period)

    @property
    def seed_value(self) -> Seed:
        return Seed(self.seed, self.stream)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["axes"] = list(self.axes)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_file(cls, path) -> ExperimentConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# -- Monte Carlo core --------------------------------------------------------


def _process_chunk(kind, seed, start, stop, length, variance, d):
    xs, ys = [], []
    for r in range(start, stop):
        sr = seed.spawn(r)
        xs.append(white_draws(length, variance, sr.spawn(0)))
        ys.append(white_draws(length, variance, sr.spawn(1)))
    x, y = np.stack(xs), np.stack(ys)
    if kind == "RRW":
        x, y = np.cumsum(x, axis=1), np.cumsum(y, axis=1)
    elif kind == "Flicker":
        x, y = fractional_integrate(x, d), fractional_integrate(y, d)
    elif kind != "White":
        raise InvalidParameterError(f"cannot simulate process kind {kind!r}")
    return x, y


def simulate_bins(
    kind: str,
    N: int,
    bins: int,
    realizations: int,
    variance: float = 1.0,
    d: float | None = None,
    seed=0,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-realization averaged and carouseled estimates, each ``(realizations, bins)``.

    Both gyros carry independent ``kind`` errors; the averaged estimate uses
    the x gyro alone.
    """
    seed = Seed.coerce(seed)
    length = N * bins
    v = coefficient_vectors(N)

    def work(start):
        stop = min(start + CHUNK, realizations)
        x, y = _process_chunk(kind, seed, start, stop, length, variance, d)
        xb, yb = x.reshape(-1, bins, N), y.reshape(-1, bins, N)
        return xb.mean(axis=2), yb @ v.c - xb @ v.s

    starts = range(0, realizations, CHUNK)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def variance_with_error(estimates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ensemble variance per bin and its standard error under Gaussianity."""
    R = estimates.shape[0]
    if R < 2:
        nan = np.full(estimates.shape[1:], np.nan)
        return nan, nan
    var = estimates.var(axis=0, ddof=1)
    return var, var * math.sqrt(2.0 / (R - 1))


def trend_test(values) -> dict:
    """OLS slope of ``values`` against bin index with its standard error."""
    values = np.asarray(values, dtype=float)
    if values.size < 3 or not np.all(np.isfinite(values)):
        return {"slope": float("nan"), "slope_stderr": float("nan"), "flat_at_3sigma": False}
    fit = stats.linregress(np.arange(1, values.size + 1), values)
    return {
        "slope": float(fit.slope),
        "slope_stderr": float(fit.stderr),
        "flat_at_3sigma": bool(abs(fit.slope) <= 3.0 * fit.stderr),
    }


# -- experiments -------------------------------------------------------------


def _variance_report(config: ExperimentConfig, kind: str) -> Report:
    N, m, var = config.samples_per_rev, config.bins, config.variance
    d = config.d if kind == "Flicker" else None
    avg, car = simulate_bins(kind, N, m, config.realizations, var, d, config.seed_value, config.workers)
    va, sa = variance_with_error(avg)
    vc, sc = variance_with_error(car)
    table = {
        "bin": np.arange(1, m + 1),
        "averaged_var": va,
        "averaged_stderr": sa,
        "carouseled_var": vc,
        "carouseled_stderr": sc,
    }
    if kind == "RRW":
        table["predicted_averaged"] = predict_avg_rrw(N, m, var).per_bin_variance
        table["predicted_carouseled"] = predict_carousel_rrw(N, var, "exact", m).per_bin_variance
        table["predicted_carouseled_asymptotic"] = predict_carousel_rrw(N, var, "asymptotic", m).per_bin_variance
    else:
        table["predicted_averaged"] = predict_flicker(N, m, var, d, "averaged")
        table["predicted_carouseled"] = predict_flicker(N, m, var, d, "carouseled")
    results = {
        "carouseled_mean_var": float(vc.mean()),
        "carouseled_trend": trend_test(vc),
        "averaged_trend": trend_test(va),
        "averaged_increment": float(np.mean(np.diff(va))) if m > 1 else float("nan"),
    }
    return Report(config.experiment, config.to_dict(), config.seed_value.to_dict(), {"": table}, results)


def _gain_report(config: ExperimentConfig) -> Report:
    n, N, d = config.dimension, config.samples_per_rev, config.d
    table = {
        "dimension": np.arange(1, n + 1),
        "ones": flicker_gain_vectors(n, d, "ones"),
        "s": flicker_gain_vectors(n, d, "s", N),
        "c": flicker_gain_vectors(n, d, "c", N),
    }
    results = {name: {"final": float(table[name][-1]), "max_abs": float(np.abs(table[name]).max())} for name in ("ones", "s", "c")}
    return Report(config.experiment, config.to_dict(), config.seed_value.to_dict(), {"": table}, results)


def _const_avar_report(config: ExperimentConfig) -> Report:
    n, R = config.levels, config.realizations
    seed = config.seed_value
    taus = 2 ** np.arange(n)
    seqs = np.stack([gen_R(n, seed.spawn(r)).values for r in range(R)])
    two_avar = np.stack([2.0 * allan_statistic(seqs, int(tau)) for tau in taus], axis=1)
    mvue = np.var(pinv_apply(seqs, n), axis=1, ddof=1) if n >= 2 else np.full(R, np.nan)
    S = gen_S(n).values
    det = np.array([allan_statistic(S, int(tau)) for tau in taus])
    table = {
        "tau": taus,
        "mean_2avar": two_avar.mean(axis=0),
        "std_2avar": two_avar.std(axis=0, ddof=1) if R > 1 else np.full(n, np.nan),
        "deterministic_avar": det,
    }
    results = {
        "mvue_mean": float(mvue.mean()),
        "mvue_std": float(mvue.std(ddof=1)) if R > 1 else float("nan"),
        "deterministic_avar_constant": bool(np.all(det == 0.5)),
    }
    return Report(config.experiment, config.to_dict(), config.seed_value.to_dict(), {"": table}, results)


def simulate_static_log(
    params_x: GyroErrorParams,
    params_y: GyroErrorParams,
    duration: float,
    sample_rate: float,
    seed,
    bias=(0.0, 0.0),
) -> GyroLog:
    """Synthetic zero-input recording with white noise, RRW and a constant bias per axis.

    The z axis carries white noise at the x-gyro level only.
    """
    seed = Seed.coerce(seed)
    n = int(round(duration * sample_rate))
    dt = 1.0 / sample_rate
    axes = []
    for k, (p, b) in enumerate(zip((params_x, params_y, params_x), (*bias, 0.0))):
        white, q = per_sample_levels(p, dt)
        sk = seed.spawn(k)
        rate = white_draws(n, white, sk.spawn(0)) + b
        if k < 2:
            rate = rate + np.cumsum(white_draws(n, q, sk.spawn(1)))
        axes.append(rate)
    t = dt * np.arange(1, n + 1)
    return GyroLog(t, *axes, float(sample_rate), source="synthetic")


@dataclass
class StaticAnalysis:
    averaged: tuple
    carouseled: SampleSeries
    curves: tuple
    params: tuple
    predictions: dict
    exceedance: dict
    angles: dict
    config: CarouselConfig


def analyze_static(
    log: GyroLog,
    axes=("gx", "gy"),
    samples_per_rev: int = 200,
    warmup_skip: float = 0.0,
    tau_white: float = 1.0,
    tau_rrw: float | None = None,
) -> StaticAnalysis:
    """Averaging versus virtual carouseling of a zero-input gyro log.

    The log contains no physical rotation, so carouseling is applied in
    software: with zero true rate the rotated gyro outputs equal their errors
    and the carousel weights can be applied to the recorded samples directly.
    """
    x, y = (log.axis(a) for a in axes)
    N = int(samples_per_rev)
    if N > len(x):
        raise InvalidParameterError(f"N={N} exceeds the log length of {len(x)} samples")
    if len(x) < 10 * N:
        raise InvalidParameterError("the log must hold at least 10 revolutions")
    config = CarouselConfig(N, N * log.sample_interval)

    averaged = (direct_average(x, N), direct_average(y, N))
    carouseled = carousel_average((x, y), config, truncate=True)
    m = len(carouseled)

    skip = int(round(warmup_skip / log.sample_interval))
    if skip >= len(x) // 2:
        raise InvalidParameterError("warm-up exclusion leaves less than half of the log")
    n_used = len(x) - skip
    taus = analysis_taus(n_used, log.sample_interval, (tau_white, tau_rrw))
    taus = taus[n_used // taus >= 2]
    curves, params = [], []
    for series in (x, y):
        trimmed = SampleSeries(series.values[skip:], series.sample_interval, series.label)
        curve = allan_variance(trimmed, taus)
        curves.append(curve)
        params.append(estimate_params(curve, tau_white, tau_rrw))
    params = tuple(params)

    predictions = {
        "averaged_x": predict_interval(params, config, m, "averaged", 0),
        "averaged_y": predict_interval(params, config, m, "averaged", 1),
        "carouseled": predict_interval(params, config, m, "carouseled"),
    }
    exceedance = {
        "averaged_x": exceedance_fraction(averaged[0].values[:m], predictions["averaged_x"].two_sigma),
        "averaged_y": exceedance_fraction(averaged[1].values[:m], predictions["averaged_y"].two_sigma),
        "carouseled": exceedance_fraction(carouseled.values, predictions["carouseled"].two_sigma),
    }
    angles = {
        "averaged_x": integrate_angle(averaged[0]),
        "averaged_y": integrate_angle(averaged[1]),
        "carouseled": integrate_angle(carouseled),
    }
    return StaticAnalysis(averaged, carouseled, tuple(curves), params, predictions, exceedance, angles, config)


def static_report(analysis: StaticAnalysis, config: ExperimentConfig, log: GyroLog) -> Report:
    m = len(analysis.carouseled)
    T = analysis.config.period
    rates = {"bin": np.arange(1, m + 1), "t": T * np.arange(1, m + 1)}
    for name, series in zip(("averaged_x", "averaged_y"), analysis.averaged):
        rates[name] = series.values[:m]
    rates["carouseled"] = analysis.carouseled.values
    for name, pred in analysis.predictions.items():
        rates[f"two_sigma_{name}"] = pred.two_sigma
    angles = {"bin": rates["bin"], "t": rates["t"]}
    for name, series in analysis.angles.items():
        angles[f"angle_{name}_rad"] = series.values[:m]
        angles[f"angle_{name}_deg"] = np.rad2deg(series.values[:m])
    cx, cy = analysis.curves
    allan = {"tau": cx.tau, "avar_x": cx.avar, "bins_x": cx.bins, "avar_y": cy.avar, "bins_y": cy.bins}
    results = {
        "samples_per_rev": analysis.config.samples_per_rev,
        "period": T,
        "params_x": analysis.params[0].to_dict(),
        "params_y": analysis.params[1].to_dict(),
        "exceedance": analysis.exceedance,
        "terminal_angle_deg": {k: float(np.rad2deg(v.values[-1])) for k, v in analysis.angles.items()},
        "log": {
            "source": log.source,
            "samples": len(log),
            "sample_rate": log.sample_rate,
            "gap_lines": list(log.gap_lines),
            "rejected_lines": list(log.rejected_lines),
        },
    }
    tables = {"rates": rates, "angles": angles, "allan": allan}
    return Report(config.experiment, config.to_dict(), config.seed_value.to_dict(), tables, results)


def _static_report(config: ExperimentConfig) -> Report:
    if config.log_path:
        log = ingest(config.log_path, config.units)
    else:
        log = simulate_static_log(
            GyroErrorParams.from_dict(config.gyro_x),
            GyroErrorParams.from_dict(config.gyro_y),
            config.duration,
            config.sample_rate,
            config.seed_value,
        )
    analysis = analyze_static(log, config.axes, config.samples_per_rev, config.warmup_skip, config.tau_white, config.tau_rrw)
    return static_report(analysis, config, log)


def build_report(config: ExperimentConfig) -> Report:
    if config.experiment == "rrw-variance":
        return _variance_report(config, "RRW")
    if config.experiment == "flicker-variance":
        return _variance_report(config, "Flicker")
    if config.experiment == "flicker-gain":
        return _gain_report(config)
    if config.experiment == "const-avar-check":
        return _const_avar_report(config)
    return _static_report(config)


def run_experiment(config: ExperimentConfig, output=None) -> list[Path]:
    """Run ``config`` and write its report files; returns the written paths."""
    output = output or config.output
    if not output:
        raise InvalidParameterError("an output path prefix is required")
    report = build_report(config)
    try:
        return report.write(output, config.format)
    except OSError as exc:
        raise InvalidParameterError(f"cannot write report to {output}: {exc}") from exc


__all__ = [
    "EXPERIMENTS",
    "REFERENCE_GYRO_PARAMS",
    "ExperimentConfig",
    "StaticAnalysis",
    "analyze_static",
    "build_report",
    "run_experiment",
    "simulate_bins",
    "simulate_static_log",
    "static_report",
    "trend_test",
    "variance_with_error",
]

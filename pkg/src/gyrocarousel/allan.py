"""Non-overlapping Allan variance, error-parameter extraction and angle integration."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .carousel import CarouselConfig, VariancePrediction, carousel_rrw_parts, predict_avg_rrw
from .series import InvalidParameterError, SampleSeries

log = logging.getLogger(__name__)

#: Minimum number of bins per point on the default tau grid.
DEFAULT_MIN_BINS = 9


@dataclass(frozen=True)
class AllanCurve:
    """Allan variance per averaging time.

    ``tau`` in seconds, ``avar`` in squared series units, ``bins`` the number
    of disjoint bins ``M`` used at each point.
    """

    tau: np.ndarray
    avar: np.ndarray
    bins: np.ndarray
    source_label: str = ""
    warnings: tuple = field(default=())

    def __len__(self):
        return self.tau.size

    def points(self):
        return list(zip(self.tau.tolist(), self.avar.tolist(), self.bins.tolist()))


@dataclass(frozen=True)
class GyroErrorParams:
    """Gyro error levels read off an Allan curve.

    Attributes
    ----------
    white_variance_at_1s : float
        Allan variance of the white component at 1 s, (rad/s)^2.
    rrw_variance : float
        Rate random walk intensity, (rad/s)^2/s.
    bias_instability : float
        Square root of the curve minimum, rad/s.
    tau_ref_rrw : float or None
        Averaging time the RRW value was read at, s; None when not read off a curve.
    """

    white_variance_at_1s: float
    rrw_variance: float
    bias_instability: float = 0.0
    tau_ref_rrw: float | None = None

    def __post_init__(self):
        for name in ("white_variance_at_1s", "rrw_variance", "bias_instability"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be non-negative")

    def to_dict(self) -> dict:
        return {
            "white_variance_at_1s": self.white_variance_at_1s,
            "rrw_variance": self.rrw_variance,
            "bias_instability": self.bias_instability,
            "tau_ref_rrw": self.tau_ref_rrw,
        }

    @classmethod
    def from_dict(cls, data: dict) -> GyroErrorParams:
        return cls(
            float(data["white_variance_at_1s"]),
            float(data["rrw_variance"]),
            float(data.get("bias_instability", 0.0)),
            None if data.get("tau_ref_rrw") is None else float(data["tau_ref_rrw"]),
        )


def default_taus(n_samples: int, min_bins: int = DEFAULT_MIN_BINS) -> np.ndarray:
    """Powers of two (in samples) leaving at least ``min_bins`` bins."""
    top = n_samples // min_bins
    if top < 1:
        return np.array([], dtype=int)
    return 2 ** np.arange(int(np.log2(top)) + 1)


def allan_statistic(values, tau: int) -> np.ndarray:
    """Non-overlapping Allan variance at bin size ``tau`` along the last axis.

    Accepts a 1-D series or a 2-D stack of realizations; the trailing partial
    bin is dropped.
    """
    values = np.asarray(values, dtype=float)
    M = values.shape[-1] // tau
    if M < 2:
        raise InvalidParameterError(f"bin size {tau} leaves fewer than two bins")
    means = values[..., : M * tau].reshape(values.shape[:-1] + (M, tau)).mean(axis=-1)
    diffs = np.diff(means, axis=-1)
    return 0.5 * np.sum(diffs * diffs, axis=-1) / (M - 1)


def allan_variance(series, taus=None) -> AllanCurve:
    """Allan curve of ``series`` at bin sizes ``taus`` (in samples).

    Points that would leave fewer than two bins are omitted; each omission is
    recorded in :attr:`AllanCurve.warnings` and reported via :mod:`warnings`.
    """
    if not isinstance(series, SampleSeries):
        series = SampleSeries(series)
    n = len(series)
    taus = default_taus(n) if taus is None else np.unique(np.asarray(taus, dtype=int))
    notes, kept, avars, bins = [], [], [], []
    for tau in taus:
        if tau < 1 or n // tau < 2:
            notes.append(f"tau={int(tau)} samples omitted: fewer than 2 bins in {n} samples")
            continue
        kept.append(int(tau))
        avars.append(float(allan_statistic(series.values, int(tau))))
        bins.append(n // int(tau))
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return AllanCurve(
        np.asarray(kept, dtype=float) * series.sample_interval,
        np.asarray(avars),
        np.asarray(bins, dtype=int),
        series.label,
        tuple(notes),
    )


def _pick(curve: AllanCurve, tau: float) -> int:
    if len(curve) < 2:
        raise InvalidParameterError("the Allan curve is too short for parameter extraction")
    k = int(np.argmin(np.abs(np.log(curve.tau) - np.log(tau))))
    lo = curve.tau[max(k - 1, 0)]
    hi = curve.tau[min(k + 1, len(curve) - 1)]
    if not lo <= tau <= hi:
        raise InvalidParameterError(f"no curve point within one grid step of tau={tau} s")
    return k


def estimate_params(curve: AllanCurve, tau_white: float = 1.0, tau_rrw: float | None = None) -> GyroErrorParams:
    """Read white noise, RRW and bias instability off an Allan curve.

    The white level is taken at ``tau_white`` and scaled to 1 s along the
    -1 slope (a no-op when ``tau_white`` is 1 s). The RRW intensity uses
    ``avar(tau) = K^2 tau / 3`` at ``tau_rrw`` (default: the longest
    tau). Bias instability is the square root of the curve minimum, without the
    customary 0.664 scaling.
    """
    kw = _pick(curve, tau_white)
    white = float(curve.avar[kw] * curve.tau[kw])
    kr = len(curve) - 1 if tau_rrw is None else _pick(curve, tau_rrw)
    tau_r = float(curve.tau[kr])
    rrw = 3.0 * float(curve.avar[kr]) / tau_r
    return GyroErrorParams(white, rrw, float(np.sqrt(curve.avar.min())), tau_r)


def analysis_taus(n_samples: int, dt: float, extra_seconds=(), min_bins: int = DEFAULT_MIN_BINS) -> np.ndarray:
    """Default tau grid plus the given averaging times rounded to whole samples."""
    taus = set(default_taus(n_samples, min_bins).tolist())
    for seconds in extra_seconds:
        if seconds is not None:
            taus.add(max(1, int(round(seconds / dt))))
    return np.array(sorted(taus), dtype=int)


def estimate_params_from_series(
    series: SampleSeries,
    tau_white: float = 1.0,
    tau_rrw: float | None = None,
    warmup_skip: float = 0.0,
) -> tuple[GyroErrorParams, AllanCurve]:
    """Allan curve and parameters, optionally excluding a leading warm-up period."""
    skip = int(round(warmup_skip / series.sample_interval))
    if skip >= len(series):
        raise InvalidParameterError("warm-up exclusion removes the whole series")
    trimmed = SampleSeries(series.values[skip:], series.sample_interval, series.label)
    taus = analysis_taus(len(trimmed), trimmed.sample_interval, (tau_white, tau_rrw))
    taus = taus[len(trimmed) // taus >= 2]
    curve = allan_variance(trimmed, taus)
    return estimate_params(curve, tau_white, tau_rrw), curve


def per_sample_levels(params: GyroErrorParams, dt: float) -> tuple[float, float]:
    """Per-sample white variance and per-sample RRW increment variance."""
    return params.white_variance_at_1s / dt, params.rrw_variance * dt


def predict_interval(params, config: CarouselConfig, bins: int, mode: str = "carouseled", gyro: int = 0) -> VariancePrediction:
    """Predicted variance of averaged or carouseled estimates from Allan parameters.

    ``params`` is the ``(x, y)`` pair of :class:`GyroErrorParams`. The
    averaged mode describes gyro ``params[gyro]`` alone; the carouseled mode
    uses the mean white level of both gyros and weights the sine and cosine
    RRW terms by the x and y intensities. 1/f noise is not included.
    """
    if isinstance(params, GyroErrorParams):
        params = (params, params)
    N, dt = config.samples_per_rev, config.sample_interval
    levels = [per_sample_levels(p, dt) for p in params]
    if mode == "averaged":
        white, q = levels[gyro]
        rrw = predict_avg_rrw(N, bins, q)
        return VariancePrediction(
            white / N + rrw.per_bin_variance,
            rrw.cross_covariances + white / N * np.eye(bins),
            rrw.asymptotic_coefficient,
            {"white": white / N},
        )
    if mode == "carouseled":
        white = 0.5 * (levels[0][0] + levels[1][0])
        sine, cosine = carousel_rrw_parts(N)
        rrw = levels[0][1] * sine + levels[1][1] * cosine
        total = white / N + rrw
        return VariancePrediction(np.full(bins, total), total * np.eye(bins), float("nan"), {"white": white / N, "rrw": rrw})
    raise InvalidParameterError(f"unknown mode {mode!r}")


def exceedance_fraction(estimates, two_sigma) -> float:
    """Fraction of estimates whose magnitude exceeds the 2-sigma bound."""
    estimates = np.asarray(estimates, dtype=float)
    return float(np.mean(np.abs(estimates) > np.broadcast_to(two_sigma, estimates.shape)))


def integrate_angle(series, dt: float | None = None) -> SampleSeries:
    """Accumulated angle (rad) of a rate series: running sum times ``dt``."""
    if not isinstance(series, SampleSeries):
        series = SampleSeries(series, 1.0 if dt is None else dt)
    dt = series.sample_interval if dt is None else float(dt)
    return SampleSeries(np.cumsum(series.values) * dt, dt, f"angle {series.label}".strip())

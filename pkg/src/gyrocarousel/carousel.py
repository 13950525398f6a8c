"""Carouseling and direct averaging, with closed-form variance predictors.

Two gyros with perpendicular sensitive axes are rotated uniformly; sample
``i`` of revolution ``t`` is taken at angle ``phi = 2*pi*i/N`` for
``i = 1..N``. Each revolution produces one rate estimate

    omega_t = sum_i (-x_i * sin(phi_i) + y_i * cos(phi_i)) / N

whereas a single non-rotated gyro is simply block-averaged over ``N``
samples. The predictors evaluate the variance of those estimates for white
noise, rate random walk and 1/f noise as quadratic forms ``sigma^2 |M^T w|^2``
with ``M`` the identity, the cumulative-sum matrix or the fractional
integrator.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .noise import compose_error, flicker_coefficients
from .series import InvalidParameterError, SampleSeries, Seed, check_d, check_variance

Rate = float | Callable[[np.ndarray], np.ndarray]

#: Coefficient of ``sigma^2 N`` for the second direct average of a random walk.
AVERAGED_RRW_COEFFICIENT = 4.0 / 3.0
#: Coefficient of ``sigma^2 N`` for any carouseled average of a random walk.
CAROUSEL_RRW_COEFFICIENT = 1.0 / (2.0 * math.pi**2)


@dataclass(frozen=True)
class CoefficientVectors:
    s: np.ndarray
    c: np.ndarray
    ones: np.ndarray


def coefficient_vectors(N: int) -> CoefficientVectors:
    """Sine, cosine and averaging weights of one revolution (1/N included)."""
    if int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {N!r}")
    phi = 2.0 * np.pi * np.arange(1, N + 1) / N
    return CoefficientVectors(np.sin(phi) / N, np.cos(phi) / N, np.full(N, 1.0 / N))


@dataclass(frozen=True)
class CarouselConfig:
    """Uniform carouseling: ``samples_per_rev`` samples per ``period`` seconds."""

    samples_per_rev: int
    period: float = 1.0

    def __post_init__(self):
        if int(self.samples_per_rev) != self.samples_per_rev or self.samples_per_rev < 2:
            raise InvalidParameterError("samples_per_rev must be an integer >= 2")
        if not self.period > 0:
            raise InvalidParameterError("period must be > 0")
        object.__setattr__(self, "samples_per_rev", int(self.samples_per_rev))
        object.__setattr__(self, "period", float(self.period))

    @property
    def N(self) -> int:
        return self.samples_per_rev

    @property
    def sample_interval(self) -> float:
        return self.period / self.samples_per_rev

    @property
    def sample_rate(self) -> float:
        return self.samples_per_rev / self.period

    @property
    def vectors(self) -> CoefficientVectors:
        return coefficient_vectors(self.samples_per_rev)

    def phases(self, n_samples: int) -> np.ndarray:
        """Carouseling angle of each of ``n_samples`` consecutive samples."""
        i = np.arange(n_samples) % self.samples_per_rev + 1
        return 2.0 * np.pi * i / self.samples_per_rev


@dataclass(frozen=True)
class CarouselSignal:
    """Outputs of the two carouseled gyros plus the rates that produced them."""

    x: SampleSeries
    y: SampleSeries
    omega: Rate = 0.0
    omega_perp: Rate = 0.0

    def __post_init__(self):
        if len(self.x) != len(self.y) or self.x.sample_interval != self.y.sample_interval:
            raise InvalidParameterError("x and y must share length and sample interval")


@dataclass(frozen=True)
class VariancePrediction:
    """Predicted variance of consecutive averaged or carouseled estimates.

    ``per_bin_variance`` is in the squared units of the inputs.
    ``cross_covariances`` holds the full bin-by-bin covariance when known.
    """

    per_bin_variance: np.ndarray
    cross_covariances: np.ndarray | None = None
    asymptotic_coefficient: float = float("nan")
    parts: dict = field(default_factory=dict)

    @property
    def two_sigma(self) -> np.ndarray:
        return 2.0 * np.sqrt(self.per_bin_variance)


def _evaluate_rate(rate: Rate, t: np.ndarray) -> np.ndarray:
    if callable(rate):
        return np.broadcast_to(np.asarray(rate(t), dtype=float), t.shape)
    return np.full(t.shape, float(rate))


def synthesize_pair(
    config: CarouselConfig,
    omega: Rate,
    omega_perp: Rate,
    errors_x,
    errors_y,
    n_samples: int,
    seed,
) -> CarouselSignal:
    """Simulate both gyro outputs while carouseling.

    ``omega`` and ``omega_perp`` are constants or callables of the sample
    times (seconds). ``errors_x``/``errors_y`` are lists of
    :class:`~gyrocarousel.series.ProcessSpec`; empty lists mean error-free.
    The x gyro draws from ``seed.spawn(0)``, the y gyro from ``seed.spawn(1)``.
    """
    N = config.samples_per_rev
    if n_samples < N or n_samples % N:
        raise InvalidParameterError(f"n_samples={n_samples} is not a whole number of {N}-sample revolutions")
    seed = Seed.coerce(seed)
    dt = config.sample_interval
    t = dt * np.arange(1, n_samples + 1)
    phi = config.phases(n_samples)
    w, wp = _evaluate_rate(omega, t), _evaluate_rate(omega_perp, t)
    x = -w * np.sin(phi) + wp * np.cos(phi)
    y = w * np.cos(phi) + wp * np.sin(phi)
    if errors_x:
        x = x + compose_error(errors_x, n_samples, seed.spawn(0), dt).values
    if errors_y:
        y = y + compose_error(errors_y, n_samples, seed.spawn(1), dt).values
    return CarouselSignal(SampleSeries(x, dt, "gyro x"), SampleSeries(y, dt, "gyro y"), omega, omega_perp)


def direct_average(series, N: int) -> SampleSeries:
    """Non-overlapping means of ``N`` samples; a trailing partial block is dropped."""
    if int(N) != N or N < 1:
        raise InvalidParameterError(f"block length must be >= 1, got {N!r}")
    if not isinstance(series, SampleSeries):
        series = SampleSeries(series)
    m = len(series) // N
    if m == 0:
        raise InvalidParameterError(f"series of length {len(series)} holds no {N}-sample block")
    blocks = series.values[: m * N].reshape(m, N)
    return SampleSeries(blocks.mean(axis=1), series.sample_interval * N, f"averaged {series.label}".strip())


def _pair(signal):
    if isinstance(signal, CarouselSignal):
        return signal.x, signal.y
    x, y = signal
    x = x if isinstance(x, SampleSeries) else SampleSeries(x)
    y = y if isinstance(y, SampleSeries) else SampleSeries(y)
    if len(x) != len(y):
        raise InvalidParameterError("x and y series differ in length")
    return x, y


def carousel_average(signal, config: CarouselConfig, *, perpendicular: bool = False, truncate: bool = False):
    """One rate estimate per revolution.

    Parameters
    ----------
    signal : CarouselSignal or (x, y) pair of series
    config : CarouselConfig
    perpendicular : bool
        Also return the estimate about the axis at 90 degrees.
    truncate : bool
        Drop trailing samples that do not fill a revolution instead of raising.

    Returns
    -------
    SampleSeries, or a pair ``(omega, omega_perp)`` when ``perpendicular``.
    """
    x, y = _pair(signal)
    N = config.samples_per_rev
    m = len(x) // N
    if m == 0 or (len(x) % N and not truncate):
        raise InvalidParameterError(f"length {len(x)} is not a whole number of {N}-sample revolutions")
    v = coefficient_vectors(N)
    xb = x.values[: m * N].reshape(m, N)
    yb = y.values[: m * N].reshape(m, N)
    dt = x.sample_interval * N
    est = SampleSeries(yb @ v.c - xb @ v.s, dt, "carouseled")
    if not perpendicular:
        return est
    return est, SampleSeries(xb @ v.c + yb @ v.s, dt, "carouseled perpendicular")


def carousel_average_variable(signal, samples_per_rev) -> np.ndarray:
    """Carousel estimates when revolution ``t`` spans ``samples_per_rev[t]`` samples.

    No variance prediction applies to this case. Returns a plain array since
    the estimates are not uniformly spaced in time.
    """
    x, y = _pair(signal)
    counts = np.asarray(samples_per_rev, dtype=int)
    if np.any(counts < 2):
        raise InvalidParameterError("every revolution needs at least 2 samples")
    if counts.sum() > len(x):
        raise InvalidParameterError("revolution lengths exceed the series length")
    out = np.empty(counts.size)
    start = 0
    for t, N in enumerate(counts):
        v = coefficient_vectors(int(N))
        out[t] = y.values[start : start + N] @ v.c - x.values[start : start + N] @ v.s
        start += N
    return out


# -- quadratic forms ---------------------------------------------------------


def _suffix_sums(w: np.ndarray) -> np.ndarray:
    return np.cumsum(w[..., ::-1], axis=-1)[..., ::-1]


def _fractional_transpose(w: np.ndarray, d: float) -> np.ndarray:
    """``F^T w`` for the fractional integrator ``F`` of matching size."""
    n = w.shape[-1]
    c = flicker_coefficients(n, d).coefficients
    return fftconvolve(w[::-1], c)[:n][::-1]


def exact_linear_variance(weights, kind: str, variance: float, d: float | None = None) -> float:
    """Exact variance of ``weights @ process`` for one realization.

    ``kind`` is ``"White"``, ``"RRW"`` or ``"Flicker"`` (``d`` required);
    the process has as many samples as ``weights``.
    """
    w = np.asarray(weights, dtype=float).reshape(-1)
    variance = check_variance(variance)
    if kind == "White":
        g = w
    elif kind == "RRW":
        g = _suffix_sums(w)
    elif kind == "Flicker":
        g = _fractional_transpose(w, check_d(d))
    else:
        raise InvalidParameterError(f"no variance propagation for process kind {kind!r}")
    return variance * float(g @ g)


def process_matrix(kind: str, n: int, d: float | None = None) -> np.ndarray:
    """Dense ``n x n`` map from driving noise to process samples (small n only)."""
    if kind == "White":
        return np.eye(n)
    if kind == "RRW":
        return np.tril(np.ones((n, n)))
    if kind == "Flicker":
        return flicker_coefficients(n, d).dense()
    raise InvalidParameterError(f"no process matrix for kind {kind!r}")


def dense_block_covariance(kind: str, block_weights, bins: int, variance: float = 1.0, d=None) -> np.ndarray:
    """Reference ``bins x bins`` covariance of per-block weighted sums.

    Builds ``B M M^T B^T`` explicitly; intended for cross-checking the fast
    predictors at small ``N``.
    """
    w = np.asarray(block_weights, dtype=float)
    N = w.size
    B = np.kron(np.eye(bins), w)
    M = process_matrix(kind, N * bins, d)
    BM = B @ M
    return variance * BM @ BM.T


def predict_avg_rrw(N: int, bins: int, variance: float) -> VariancePrediction:
    """Variance of consecutive ``N``-sample means of a random walk started at zero.

    The first mean has variance ``sigma^2 (2N^3 + 3N^2 + N) / (6N^2)`` and each
    later one grows by ``sigma^2 N``; mean ``s`` and ``t > s`` share covariance
    ``sigma^2 ((s - 1) N + (N + 1) / 2)``.
    """
    if N < 1 or bins < 1:
        raise InvalidParameterError("N and bins must be >= 1")
    variance = check_variance(variance)
    first = (2 * N**3 + 3 * N**2 + N) / (6 * N**2)
    t = np.arange(1, bins + 1)
    diag = variance * (first + (t - 1) * N)
    lower = np.minimum.outer(t, t)
    cov = variance * ((lower - 1) * N + (N + 1) / 2)
    np.fill_diagonal(cov, diag)
    return VariancePrediction(diag, cov, AVERAGED_RRW_COEFFICIENT)


def carousel_rrw_parts(N: int) -> tuple[float, float]:
    """Exact sine and cosine contributions ``|R^T s|^2`` and ``|R^T c|^2``."""
    v = coefficient_vectors(N)
    gs, gc = _suffix_sums(v.s), _suffix_sums(v.c)
    return float(gs @ gs), float(gc @ gc)


def predict_carousel_rrw(N: int, variance: float, mode: str = "exact", bins: int = 1) -> VariancePrediction:
    """Variance of carouseled random-walk estimates, identical for every revolution.

    ``mode="exact"`` evaluates the quadratic forms in O(N); ``"asymptotic"``
    uses the large-N limits ``3N/(8 pi^2)`` (sine) and ``N/(8 pi^2)`` (cosine).
    """
    if N < 2:
        raise InvalidParameterError("carouseling needs N >= 2")
    variance = check_variance(variance)
    if mode == "exact":
        sine, cosine = carousel_rrw_parts(N)
    elif mode == "asymptotic":
        sine, cosine = 3 * N / (8 * math.pi**2), N / (8 * math.pi**2)
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    per_bin = variance * (sine + cosine)
    return VariancePrediction(
        np.full(bins, per_bin),
        per_bin * np.eye(bins),
        CAROUSEL_RRW_COEFFICIENT,
        {"sine": variance * sine, "cosine": variance * cosine},
    )


def reduction_factor_rrw() -> float:
    """Relative RRW variance reduction of carouseling versus the second direct average."""
    return 1.0 - CAROUSEL_RRW_COEFFICIENT / AVERAGED_RRW_COEFFICIENT


def predict_flicker(N: int, bins: int, variance: float, d: float, mode: str) -> np.ndarray:
    """Exact per-bin variance of averaged or carouseled 1/f noise.

    The averaged case uses a single gyro; the carouseled case sums the sine
    and cosine terms of two independent gyros.
    """
    v = coefficient_vectors(N)
    weights = (v.ones,) if mode == "averaged" else (v.s, v.c)
    out = np.empty(bins)
    for t in range(1, bins + 1):
        total = 0.0
        for w in weights:
            full = np.zeros(t * N)
            full[(t - 1) * N :] = w
            total += exact_linear_variance(full, "Flicker", variance, d)
        out[t - 1] = total
    return out


def flicker_gain_vectors(dimension: int, d: float, weights: str = "ones", N: int | None = None) -> np.ndarray:
    """Cumulative gains ``sum_{k<n} c_k w_{k+1}`` for ``n = 1..dimension``.

    This is the leading entry of ``F^T w`` as the matrix dimension grows, with
    ``w`` a unit-amplitude ones, sine or cosine pattern of period ``N``. The
    ones gain diverges; sine and cosine gains stay bounded for even ``N``.
    """
    c = flicker_coefficients(dimension, d).coefficients
    if weights == "ones":
        w = np.ones(dimension)
    else:
        if N is None or N < 2:
            raise InvalidParameterError("sine/cosine weights need a period N >= 2")
        phi = 2.0 * np.pi * np.arange(1, dimension + 1) / N
        if weights == "s":
            w = np.sin(phi)
        elif weights == "c":
            w = np.cos(phi)
        else:
            raise InvalidParameterError(f"unknown weights {weights!r}")
    return np.cumsum(c * w)

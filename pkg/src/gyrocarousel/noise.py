"""Seedable synthesis of the additive gyro error processes.

Four processes are supported: random-constant bias, white noise, rate random
walk (cumulative sum of white increments, started from zero) and 1/f noise
modelled as a causal fractional integral of white noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .series import (
    InvalidParameterError,
    ProcessSpec,
    SampleSeries,
    Seed,
    check_d,
    check_length,
    check_variance,
)

__all__ = [
    "FractionalMatrix",
    "compose_error",
    "flicker_coefficients",
    "fractional_integrate",
    "gen_bias",
    "gen_flicker",
    "gen_process",
    "gen_rrw",
    "gen_white",
    "white_draws",
]


@dataclass(frozen=True)
class FractionalMatrix:
    """Unit lower-triangular Toeplitz matrix of a fractional integrator.

    Only the first column is stored; :meth:`dense` materializes the matrix.
    """

    d: float
    coefficients: np.ndarray

    @property
    def n(self) -> int:
        return self.coefficients.size

    def dense(self) -> np.ndarray:
        n = self.n
        lag = np.subtract.outer(np.arange(n), np.arange(n))
        out = np.zeros((n, n))
        mask = lag >= 0
        out[mask] = self.coefficients[lag[mask]]
        return out


def flicker_coefficients(n: int, d: float) -> FractionalMatrix:
    """Impulse response of the order-``d`` fractional integrator.

    Uses ``c_0 = 1``, ``c_k = c_{k-1} (k - 1 + d) / k``, which equals
    ``Gamma(k + d) / (Gamma(k + 1) Gamma(d))`` without overflowing for large k.
    """
    n = check_length(n)
    d = check_d(d)
    k = np.arange(1, n, dtype=float)
    c = np.empty(n)
    c[0] = 1.0
    c[1:] = np.cumprod((k - 1.0 + d) / k)
    c.setflags(write=False)
    return FractionalMatrix(d, c)


def fractional_integrate(w, d: float, method: str = "fft") -> np.ndarray:
    """Apply the causal fractional integrator to driving noise ``w``.

    ``w`` may be 1-D or 2-D (realizations along axis 0, time along the last
    axis). ``method`` is ``"fft"`` (zero-padded linear convolution) or
    ``"direct"`` (O(n^2) time-domain convolution).
    """
    w = np.asarray(w, dtype=float)
    n = w.shape[-1]
    c = flicker_coefficients(n, d).coefficients
    if method == "fft":
        kernel = c.reshape((1,) * (w.ndim - 1) + (n,))
        return fftconvolve(w, kernel, axes=-1)[..., :n]
    if method == "direct":
        flat = w.reshape(-1, n)
        out = np.stack([np.convolve(row, c)[:n] for row in flat])
        return out.reshape(w.shape)
    raise InvalidParameterError(f"unknown convolution method {method!r}")


def white_draws(n: int, variance: float, seed) -> np.ndarray:
    """Raw zero-mean Gaussian draws underlying every stochastic generator."""
    n = check_length(n)
    variance = check_variance(variance)
    draws = Seed.coerce(seed).rng().standard_normal(n)
    return np.sqrt(variance) * draws


def gen_white(n: int, variance: float, seed, sample_interval: float = 1.0) -> SampleSeries:
    """White Gaussian noise with per-sample ``variance``."""
    return SampleSeries(white_draws(n, variance, seed), sample_interval, "white")


def gen_rrw(n: int, variance: float, seed, sample_interval: float = 1.0) -> SampleSeries:
    """Rate random walk ``r_t = r_{t-1} + q_t`` with ``r_0 = 0``.

    The increments are exactly the draws of :func:`gen_white` for the same
    arguments, so the output equals their running sum.
    """
    return SampleSeries(np.cumsum(white_draws(n, variance, seed)), sample_interval, "rrw")


def gen_flicker(
    n: int,
    variance: float,
    d: float,
    seed,
    sample_interval: float = 1.0,
    method: str = "fft",
) -> SampleSeries:
    """1/f noise as the fractional integral of white noise with ``variance``."""
    d = check_d(d)
    w = white_draws(n, variance, seed)
    return SampleSeries(fractional_integrate(w, d, method), sample_interval, "flicker")


def gen_bias(n: int, bias_value: float, sample_interval: float = 1.0) -> SampleSeries:
    n = check_length(n)
    return SampleSeries(np.full(n, float(bias_value)), sample_interval, "bias")


def gen_process(spec: ProcessSpec, n: int, seed, sample_interval: float = 1.0) -> SampleSeries:
    """One realization of the process described by ``spec``."""
    if spec.kind == "Bias":
        return gen_bias(n, spec.bias_value, sample_interval)
    if spec.kind == "White":
        return gen_white(n, spec.variance, seed, sample_interval)
    if spec.kind == "RRW":
        return gen_rrw(n, spec.variance, seed, sample_interval)
    return gen_flicker(n, spec.variance, spec.d, seed, sample_interval)


def compose_error(specs, n: int, seed, sample_interval: float = 1.0, sub_seeds=None) -> SampleSeries:
    """Superpose one realization of every process in ``specs``.

    Spec ``i`` draws from ``seed.spawn(i)`` unless ``sub_seeds`` supplies the
    per-spec seeds explicitly.
    """
    specs = list(specs)
    if not specs:
        raise InvalidParameterError("at least one process spec is required")
    if sub_seeds is None:
        seed = Seed.coerce(seed)
        sub_seeds = [seed.spawn(i) for i in range(len(specs))]
    elif len(sub_seeds) != len(specs):
        raise InvalidParameterError("need one sub-seed per spec")
    # canonical summation order keeps the result bit-identical under permutation
    pairs = sorted(zip(specs, map(Seed.coerce, sub_seeds)), key=lambda p: (repr(p[0].to_dict()), p[1].stream))
    total = np.zeros(check_length(n))
    for spec, sub in pairs:
        total += gen_process(spec, n, sub, sample_interval).values
    label = " + ".join(spec.kind for spec in specs)
    return SampleSeries(total, sample_interval, label)

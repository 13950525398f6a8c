"""Core value types shared by every module: sample series, seeds and errors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Name of the pseudo-random generator recorded in report metadata.
PRNG_NAME = f"numpy.random.PCG64+SeedSequence (numpy {np.__version__}), standard_normal"


class InvalidParameterError(ValueError):
    """Raised when an argument violates an operation's domain."""


def check_variance(variance) -> float:
    variance = float(variance)
    if not np.isfinite(variance) or variance < 0:
        raise InvalidParameterError(f"variance must be finite and >= 0, got {variance!r}")
    return variance


def check_length(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"length must be a positive integer, got {n!r}")
    return int(n)


def check_d(d) -> float:
    d = float(d)
    if not 0.0 < d < 1.0:
        raise InvalidParameterError(f"fractional order d must lie in (0, 1), got {d!r}")
    return d


@dataclass(frozen=True)
class Seed:
    """Reproducible seed made of a master value and a stream index.

    The pair fully determines every draw made from :meth:`rng`.
    Child seeds for sub-processes or realizations come from :meth:`spawn`.
    """

    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            value = getattr(self, name)
            if int(value) != value or not 0 <= value < 2**64:
                raise InvalidParameterError(f"seed {name} must be a 64-bit unsigned integer")
            object.__setattr__(self, name, int(value))

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.master, self.stream])))

    def spawn(self, index: int) -> Seed:
        """Deterministic child seed for sub-stream ``index``."""
        state = np.random.SeedSequence([self.master, self.stream, int(index)]).generate_state(1, np.uint64)
        return Seed(self.master, int(state[0]))

    def to_dict(self) -> dict:
        return {"master": self.master, "stream": self.stream}

    @classmethod
    def coerce(cls, seed) -> Seed:
        if isinstance(seed, Seed):
            return seed
        if isinstance(seed, dict):
            return cls(seed["master"], seed.get("stream", 0))
        if isinstance(seed, (tuple, list)):
            return cls(*seed)
        return cls(int(seed))


@dataclass(frozen=True)
class SampleSeries:
    """Uniformly sampled scalar time series.

    Parameters
    ----------
    values : array_like
        Samples, rad/s unless the label says otherwise. Stored read-only.
    sample_interval : float
        Seconds between consecutive samples.
    label : str
        Free text description.
    """

    values: np.ndarray
    sample_interval: float = 1.0
    label: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 1:
            raise InvalidParameterError("a series needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("series values must all be finite")
        dt = float(self.sample_interval)
        if not np.isfinite(dt) or dt <= 0:
            raise InvalidParameterError(f"sample_interval must be > 0, got {dt!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sample_interval", dt)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def times(self) -> np.ndarray:
        """Time stamps ``k * dt`` for ``k = 1..n``."""
        return self.sample_interval * np.arange(1, len(self) + 1)

    def __add__(self, other: SampleSeries) -> SampleSeries:
        if len(other) != len(self) or other.sample_interval != self.sample_interval:
            raise InvalidParameterError("series must share length and sample interval")
        label = " + ".join(lbl for lbl in (self.label, other.label) if lbl)
        return SampleSeries(self.values + other.values, self.sample_interval, label)


@dataclass(frozen=True)
class ProcessSpec:
    """Description of one additive gyro error process.

    ``variance`` is the per-sample variance of the driving white noise for
    ``White``/``Flicker`` and the per-sample increment variance for ``RRW``.
    """

    kind: str
    variance: float = 0.0
    bias_value: float | None = None
    d: float | None = None

    KINDS = ("Bias", "White", "RRW", "Flicker")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidParameterError(f"unknown process kind {self.kind!r}")
        object.__setattr__(self, "variance", check_variance(self.variance))
        if self.kind == "Flicker":
            if self.d is None:
                raise InvalidParameterError("Flicker requires d")
            object.__setattr__(self, "d", check_d(self.d))
        elif self.d is not None:
            raise InvalidParameterError(f"{self.kind} does not take d")
        if self.kind == "Bias":
            bias = 0.0 if self.bias_value is None else float(self.bias_value)
            if not np.isfinite(bias):
                raise InvalidParameterError("bias_value must be finite")
            object.__setattr__(self, "bias_value", bias)

    @classmethod
    def bias(cls, value: float) -> ProcessSpec:
        return cls("Bias", bias_value=value)

    @classmethod
    def white(cls, variance: float) -> ProcessSpec:
        return cls("White", variance)

    @classmethod
    def rrw(cls, variance: float) -> ProcessSpec:
        return cls("RRW", variance)

    @classmethod
    def flicker(cls, variance: float, d: float = 0.5) -> ProcessSpec:
        return cls("Flicker", variance, d=d)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "variance": self.variance}
        if self.bias_value is not None:
            out["bias_value"] = self.bias_value
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ProcessSpec:
        return cls(data["kind"], data.get("variance", 0.0), data.get("bias_value"), data.get("d"))


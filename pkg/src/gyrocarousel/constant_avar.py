"""Sequences with exactly constant non-overlapping Allan variance at dyadic bin sizes.

A length ``2**n`` sequence is built as a superposition of ``n`` square waves
of amplitude 1/2.  Starting from ``[-1/2, 1/2]`` every level duplicates each
element and adds the period-four sign pattern ``[-1/2, 1/2, 1/2, -1/2, ...]``.
For the deterministic sequence every difference of consecutive bin means has
magnitude one at bin sizes ``1, 2, 4, ..., 2**(n-1)``; scaling level ``i`` by
a random draw ``x_i`` gives the stochastic variant ``K @ x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import InvalidParameterError, Seed

__all__ = [
    "DyadicSequence",
    "build_K",
    "difference_matrix",
    "gen_R",
    "gen_S",
    "gray_code_matrix",
    "mvue_c2",
    "pinv_K",
    "pinv_apply",
    "sign_pattern",
]

_PATTERN2 = np.array([-1, 1, 1, -1], dtype=np.int64)


@dataclass(frozen=True)
class DyadicSequence:
    n: int
    values: np.ndarray
    kind: str = "deterministic"
    draws: np.ndarray | None = None

    def __len__(self):
        return self.values.size


def _check_levels(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"level count must be an integer >= 1, got {n!r}")
    return int(n)


def sign_pattern(length: int) -> np.ndarray:
    """First ``length`` entries of ``a_1 = -1/2, a_2 = 1/2, a_k = -a_{k-2}``."""
    return 0.5 * np.resize(_PATTERN2, length)


def _doubled_S(n: int) -> np.ndarray:
    # twice the sequence, so every step is integer arithmetic
    v = np.array([-1, 1], dtype=np.int64)
    for i in range(2, n + 1):
        v = np.repeat(v, 2) + np.resize(_PATTERN2, 2**i)
    return v


def gen_S(n: int) -> DyadicSequence:
    """Deterministic constant-Allan-variance sequence of length ``2**n``."""
    n = _check_levels(n)
    return DyadicSequence(n, _doubled_S(n) / 2.0)


def gen_R(n: int, seed=None, draws=None) -> DyadicSequence:
    """Stochastic sequence ``K @ x`` with one draw per level.

    Give either explicit ``draws`` (length ``n``) or a ``seed`` for
    standard-normal draws.
    """
    n = _check_levels(n)
    if draws is None:
        if seed is None:
            raise InvalidParameterError("gen_R needs a seed or explicit draws")
        draws = Seed.coerce(seed).rng().standard_normal(n)
    x = np.asarray(draws, dtype=float).reshape(-1)
    if x.size != n:
        raise InvalidParameterError(f"expected {n} draws, got {x.size}")
    v = sign_pattern(2) * x[0]
    for i in range(2, n + 1):
        v = np.repeat(v, 2) + sign_pattern(2**i) * x[i - 1]
    return DyadicSequence(n, v, "stochastic", x)


def build_K(n: int) -> np.ndarray:
    """The ``2**n x n`` level matrix; column ``i`` is ``kron(a[:2**i], ones(2**(n-i)))``."""
    n = _check_levels(n)
    if n > 20:
        raise InvalidParameterError("refusing to materialize K densely for n > 20; use gen_R / pinv_apply")
    return np.column_stack([np.kron(sign_pattern(2**i), np.ones(2 ** (n - i))) for i in range(1, n + 1)])


def pinv_apply(values, n: int | None = None) -> np.ndarray:
    """``K^+ @ values`` without forming ``K``; works along the last axis.

    Columns of ``K`` are orthogonal with squared norm ``2**n / 4``, so
    ``K^+ = (4 / 2**n) K^T``; column ``i`` is constant over blocks of
    ``2**(n-i)`` samples, which turns each row product into block sums.
    """
    values = np.asarray(values, dtype=float)
    length = values.shape[-1]
    if n is None:
        n = length.bit_length() - 1
    if length != 2**n:
        raise InvalidParameterError("sequence length must be a power of two")
    lead = values.shape[:-1]
    out = np.empty(lead + (n,))
    for i in range(1, n + 1):
        block_sums = values.reshape(lead + (2**i, 2 ** (n - i))).sum(axis=-1)
        out[..., i - 1] = block_sums @ sign_pattern(2**i)
    return out * 4.0 / length


def pinv_K(n: int) -> np.ndarray:
    """Moore-Penrose pseudoinverse of :func:`build_K` in closed form."""
    return 4.0 / 2**n * build_K(n).T


def difference_matrix(length: int, tau: int = 1) -> np.ndarray:
    """Rows map a series to the differences of consecutive ``tau``-bin means."""
    bins = length // tau
    A = np.zeros((bins - 1, length))
    for j in range(bins - 1):
        A[j, j * tau : (j + 1) * tau] = -1.0 / tau
        A[j, (j + 1) * tau : (j + 2) * tau] = 1.0 / tau
    return A


def mvue_c2(sequence: DyadicSequence) -> float:
    """Sample variance (divisor ``n - 1``) of the draws recovered through ``K^+``."""
    if sequence.n < 2:
        raise InvalidParameterError("the variance of a single draw is undefined; need n >= 2")
    x = pinv_apply(sequence.values, sequence.n)
    return float(np.var(x, ddof=1))


def gray_code_matrix(n: int) -> np.ndarray:
    """Binary-reflected Gray code, one codeword per row, most significant bit first.

    Built by reflection (prefix 0 to the previous list, 1 to its reverse).
    """
    codes = [[]]
    for _ in range(_check_levels(n)):
        codes = [[0] + c for c in codes] + [[1] + c for c in reversed(codes)]
    return np.array(codes, dtype=np.int64)

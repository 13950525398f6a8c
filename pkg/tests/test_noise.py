import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from gyrocarousel.noise import (
    compose_error,
    flicker_coefficients,
    fractional_integrate,
    gen_bias,
    gen_flicker,
    gen_process,
    gen_rrw,
    gen_white,
)
from gyrocarousel.series import InvalidParameterError, ProcessSpec, SampleSeries, Seed


def test_seed_streams_are_independent_and_reproducible():
    a = Seed(1, 0).rng().standard_normal(4)
    b = Seed(1, 0).rng().standard_normal(4)
    c = Seed(1, 1).rng().standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert Seed(1, 0).spawn(3) != Seed(1, 0).spawn(4)


def test_seed_coerce_forms():
    s = Seed(7, 2)
    assert Seed.coerce(s) is s
    assert Seed.coerce({"master": 7, "stream": 2}) == s
    assert Seed.coerce((7, 2)) == s
    assert Seed.coerce(7) == Seed(7, 0)
    with pytest.raises(InvalidParameterError):
        Seed(-1, 0)


def test_sample_series_validation():
    with pytest.raises(InvalidParameterError):
        SampleSeries([])
    with pytest.raises(InvalidParameterError):
        SampleSeries([1.0, np.nan])
    with pytest.raises(InvalidParameterError):
        SampleSeries([1.0], 0.0)
    s = SampleSeries([1.0, 2.0], 0.5)
    assert np.array_equal(s.times, [0.5, 1.0])
    with pytest.raises(ValueError):
        s.values[0] = 3.0


def test_process_spec_rules():
    with pytest.raises(InvalidParameterError):
        ProcessSpec.white(-1.0)
    with pytest.raises(InvalidParameterError):
        ProcessSpec.flicker(1.0, d=1.0)
    with pytest.raises(InvalidParameterError):
        ProcessSpec("White", 1.0, d=0.5)
    with pytest.raises(InvalidParameterError):
        ProcessSpec("Pink", 1.0)
    spec = ProcessSpec.flicker(2.0, 0.3)
    assert ProcessSpec.from_dict(spec.to_dict()) == spec


def test_rrw_is_running_sum_of_white():
    w = gen_white(1000, 2.0, Seed(3, 1))
    r = gen_rrw(1000, 2.0, Seed(3, 1))
    assert np.array_equal(r.values, np.cumsum(w.values))


def test_rrw_ensemble_variance_grows_linearly():
    R, t = 10_000, 50
    ends = np.array([gen_rrw(t, 1.0, Seed(11, 0).spawn(r)).values[-1] for r in range(R)])
    var = ends.var(ddof=1)
    # chi-square spread of the sample variance
    assert abs(var - t) < 5 * t * math.sqrt(2 / (R - 1))


def test_flicker_coefficients_against_gamma():
    d = 0.37
    n = 171
    k = np.arange(n)
    direct = np.exp(gammaln(k + d) - gammaln(k + 1) - gammaln(d))
    c = flicker_coefficients(n, d).coefficients
    np.testing.assert_allclose(c, direct, rtol=1e-12)


def test_flicker_coefficient_asymptote():
    c = flicker_coefficients(10_001, 0.5).coefficients
    k = 10_000
    ratio = c[k] / k ** (0.5 - 1)
    assert abs(ratio / (1 / math.gamma(0.5)) - 1) < 0.01


def test_flicker_coefficients_continuity_at_d_one():
    c = flicker_coefficients(101, 1 - 1e-12).coefficients
    assert np.all(np.abs(c - 1) < 1e-6)


@given(st.floats(0.01, 0.99), st.integers(2, 300))
def test_flicker_coefficients_positive_decreasing(d, n):
    c = flicker_coefficients(n, d).coefficients
    assert c[0] == 1.0
    assert np.all(c > 0)
    assert np.all(np.diff(c) < 0)


@pytest.mark.parametrize("n", [1, 7, 256, 4096])
def test_fft_and_direct_convolution_agree(n):
    w = Seed(5, 0).rng().standard_normal(n)
    a = fractional_integrate(w, 0.5, "fft")
    b = fractional_integrate(w, 0.5, "direct")
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10 * np.abs(b).max())


def test_fractional_integrate_matches_dense_toeplitz():
    n = 64
    w = Seed(6, 0).rng().standard_normal(n)
    F = flicker_coefficients(n, 0.4).dense()
    assert np.allclose(F, np.tril(F))
    np.testing.assert_allclose(fractional_integrate(w, 0.4), F @ w, rtol=1e-12, atol=1e-12)


def test_fractional_integrate_batched_rows():
    w = Seed(8, 0).rng().standard_normal((3, 100))
    out = fractional_integrate(w, 0.5)
    for row, o in zip(w, out):
        np.testing.assert_allclose(fractional_integrate(row, 0.5), o, atol=1e-12)


def test_gen_flicker_rejects_bad_d():
    with pytest.raises(InvalidParameterError):
        gen_flicker(10, 1.0, 0.0, 0)


def test_bias_is_constant():
    assert np.all(gen_bias(5, 0.25).values == 0.25)


def test_white_sum_of_two_processes():
    n = 1_000_000
    e = compose_error([ProcessSpec.white(1.0), ProcessSpec.white(2.0)], n, Seed(9, 0))
    assert abs(e.values.var() / 3.0 - 1) < 0.02


def test_compose_is_order_independent():
    specs = [ProcessSpec.white(1.0), ProcessSpec.rrw(0.1), ProcessSpec.flicker(0.5, 0.5), ProcessSpec.bias(2.0)]
    seeds = [Seed(1, 10 + i) for i in range(4)]
    a = compose_error(specs, 500, None, sub_seeds=seeds)
    b = compose_error(specs[::-1], 500, None, sub_seeds=seeds[::-1])
    assert np.array_equal(a.values, b.values)


@pytest.mark.parametrize(
    "spec", [ProcessSpec.white(1.0), ProcessSpec.rrw(1.0), ProcessSpec.flicker(1.0, 0.5)], ids=lambda s: s.kind
)
def test_zero_mean(spec):
    n = 1_000_000 if spec.kind == "White" else 20_000
    if spec.kind == "White":
        v = gen_process(spec, n, Seed(2, 0)).values
        assert abs(v.mean()) < 5 / math.sqrt(n)
    else:
        # ensemble of short realizations at the last index
        R = 5000
        ends = np.array([gen_process(spec, 64, Seed(2, 0).spawn(r)).values[-1] for r in range(R)])
        assert abs(ends.mean()) < 5 * ends.std() / math.sqrt(R)


@settings(max_examples=25)
@given(st.integers(0, 2**32), st.integers(1, 200))
def test_generators_deterministic(master, n):
    s = Seed(master, 0)
    assert np.array_equal(gen_white(n, 1.0, s).values, gen_white(n, 1.0, s).values)
    assert np.array_equal(gen_flicker(n, 1.0, 0.5, s).values, gen_flicker(n, 1.0, 0.5, s).values)

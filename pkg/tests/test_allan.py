import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyrocarousel.allan import (
    AllanCurve,
    GyroErrorParams,
    allan_statistic,
    allan_variance,
    default_taus,
    estimate_params,
    estimate_params_from_series,
    exceedance_fraction,
    integrate_angle,
    predict_interval,
)
from gyrocarousel.carousel import CarouselConfig, predict_carousel_rrw
from gyrocarousel.constant_avar import gen_S
from gyrocarousel.noise import gen_rrw, gen_white
from gyrocarousel.series import InvalidParameterError, SampleSeries, Seed


def _avar_loop(values, tau):
    m = len(values) // tau
    means = [sum(values[j * tau : (j + 1) * tau]) / tau for j in range(m)]
    return sum((b - a) ** 2 for a, b in itertools.pairwise(means)) / (2 * (m - 1))


@settings(max_examples=50)
@given(st.lists(st.floats(-100, 100), min_size=4, max_size=80), st.integers(1, 20))
def test_statistic_matches_loop(values, tau):
    if len(values) // tau < 2:
        return
    assert math.isclose(allan_statistic(values, tau), _avar_loop(values, tau), rel_tol=1e-9, abs_tol=1e-9)


def test_deterministic_sequence_half():
    curve = allan_variance(SampleSeries(gen_S(10).values), 2 ** np.arange(10))
    assert np.all(curve.avar == 0.5)


def test_constant_series_zero():
    curve = allan_variance(np.full(256, 3.0))
    assert np.all(curve.avar == 0.0)


def test_tau_in_seconds_and_bins():
    curve = allan_variance(SampleSeries(np.arange(100.0), 0.5), [1, 4])
    assert curve.tau.tolist() == [0.5, 2.0]
    assert curve.bins.tolist() == [100, 25]
    assert [p[2] for p in curve.points()] == [100, 25]


def test_oversized_tau_omitted_with_warning():
    with pytest.warns(UserWarning):
        curve = allan_variance(np.arange(10.0), [1, 6])
    assert curve.tau.tolist() == [1.0]
    assert len(curve.warnings) == 1


def test_default_taus_leave_min_bins():
    taus = default_taus(1000)
    assert taus.tolist() == [1, 2, 4, 8, 16, 32, 64]
    assert np.all(1000 // taus >= 9)


def test_white_noise_slope():
    x = gen_white(1_000_000, 1.0, Seed(2, 0))
    taus = np.array([1, 2, 5, 10, 20, 50, 100])
    curve = allan_variance(x, taus)
    np.testing.assert_allclose(curve.avar * taus, 1.0, rtol=0.10)
    slope = np.polyfit(np.log10(taus), np.log10(curve.avar), 1)[0]
    assert abs(slope + 1) < 0.1


def test_rrw_slope():
    # ensemble-averaged curve of short RRW realizations over a decade of tau
    taus = np.array([10, 20, 50, 100])
    R = 200
    avars = np.mean([allan_variance(gen_rrw(4000, 1.0, Seed(3, 0).spawn(r)), taus).avar for r in range(R)], axis=0)
    slope = np.polyfit(np.log10(taus), np.log10(avars), 1)[0]
    assert abs(slope - 1) < 0.1


def test_estimate_params_white_and_rrw():
    dt = 0.01
    n = 360_000
    white = gen_white(n, 3e-7 / dt, Seed(4, 0), dt)
    params, _ = estimate_params_from_series(white)
    assert abs(params.white_variance_at_1s / 3e-7 - 1) < 0.2
    # RRW read on the ascending slope; averaged over realizations to tame the spread of few bins
    est = []
    for r in range(20):
        rrw = gen_rrw(n, 2e-10 * dt, Seed(5, 0).spawn(r), dt)
        p, _ = estimate_params_from_series(rrw + gen_white(n, 1e-7 / dt, Seed(6, 0).spawn(r), dt), tau_rrw=200.0)
        est.append(p.rrw_variance)
    assert abs(np.mean(est) / 2e-10 - 1) < 0.3


def test_pure_white_bias_instability_at_end():
    curve = allan_variance(gen_white(100_000, 1.0, Seed(7, 0)))
    p = estimate_params(curve)
    assert p.bias_instability == pytest.approx(math.sqrt(curve.avar[-1]))


def test_estimate_params_rejects_far_tau():
    curve = allan_variance(gen_white(1024, 1.0, Seed(7, 0)), [1, 2, 4])
    with pytest.raises(InvalidParameterError):
        estimate_params(curve, tau_white=100.0)
    with pytest.raises(InvalidParameterError):
        estimate_params(AllanCurve(np.array([1.0]), np.array([1.0]), np.array([4])))


def test_warmup_exclusion():
    s = SampleSeries(np.concatenate([np.full(100, 50.0), gen_white(10_000, 1.0, Seed(1, 1)).values]))
    p, _ = estimate_params_from_series(s, warmup_skip=100)
    assert abs(p.white_variance_at_1s - 1) < 0.1
    with pytest.raises(InvalidParameterError):
        estimate_params_from_series(s, warmup_skip=1e9)


def test_params_round_trip():
    p = GyroErrorParams(1e-7, 2e-10, 6e-5, 100.0)
    assert GyroErrorParams.from_dict(p.to_dict()) == p


def test_predict_interval_zero_rrw():
    cfg = CarouselConfig(200, 2.0)
    p = GyroErrorParams(3e-7, 0.0)
    white = 3e-7 / cfg.sample_interval / 200
    for mode in ("averaged", "carouseled"):
        np.testing.assert_allclose(predict_interval((p, p), cfg, 5, mode).per_bin_variance, white)


def test_predict_interval_shapes():
    cfg = CarouselConfig(200, 2.0)
    px, py = GyroErrorParams(3e-7, 3e-10), GyroErrorParams(1e-7, 2e-10)
    car = predict_interval((px, py), cfg, 100, "carouseled")
    avg = predict_interval((px, py), cfg, 100, "averaged")
    assert np.all(car.two_sigma == car.two_sigma[0])
    assert np.all(np.diff(avg.two_sigma) > 0)
    np.testing.assert_allclose(car.two_sigma, 2 * np.sqrt(car.per_bin_variance))
    # equal gyros reduce to the plain carouseled RRW predictor
    same = predict_interval((px, px), cfg, 1, "carouseled")
    q = 3e-10 * cfg.sample_interval
    rrw = predict_carousel_rrw(200, q).per_bin_variance[0]
    assert same.parts["rrw"] == pytest.approx(rrw)


def test_exceedance_fraction():
    assert exceedance_fraction([0.1, -3.0, 2.5, 0.0], 2.0) == 0.5


def test_integrate_angle_examples():
    a = integrate_angle(SampleSeries(np.full(3, 0.1), 2.0))
    np.testing.assert_allclose(a.values, [0.2, 0.4, 0.6])
    assert np.all(integrate_angle(np.zeros(5), 1.0).values == 0)


@settings(max_examples=40)
@given(
    st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30),
    st.integers(-8, 8),
)
def test_integrate_angle_linear(values, a):
    # integer scale and float sums of representable integers keep the identity exact
    s1 = np.round(np.array(values))
    s2 = s1[::-1].copy()
    lhs = integrate_angle(SampleSeries(a * s1 + s2, 0.5)).values
    rhs = a * integrate_angle(SampleSeries(s1, 0.5)).values + integrate_angle(SampleSeries(s2, 0.5)).values
    assert np.array_equal(lhs, rhs)


def test_no_warning_on_valid_curve():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        allan_variance(np.arange(64.0))

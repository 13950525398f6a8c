"""1/f noise: the gain of the fractional integrator with and without carouseling.

The plain sum of the impulse response diverges, whereas sine or cosine weights
of even period produce alternating partial sums that stay bounded.
"""

import numpy as np
from _plot import maybe_plot

from gyrocarousel import flicker_gain_vectors, predict_flicker
from gyrocarousel.experiments import simulate_bins, trend_test, variance_with_error

d, dim, period = 0.5, 10_000, 300
ones = flicker_gain_vectors(dim, d, "ones")
s = flicker_gain_vectors(dim, d, "s", period)
c = flicker_gain_vectors(dim, d, "c", period)
print("Cumulative gain at growing matrix dimension:")
for n in (100, 1000, 10_000):
    print(f"  {n:>6}: ones {ones[n - 1]:8.2f}   sine {s[n - 1]:7.3f}   cosine {c[n - 1]:7.3f}")
print(f"  max |sine gain| {np.abs(s).max():.3f}, max |cosine gain| {np.abs(c).max():.3f}")

N, bins, R = 200, 50, 500
avg, car = simulate_bins("Flicker", N, bins, R, 1.0, d, seed=2)
va, sa = variance_with_error(avg)
vc, sc = variance_with_error(car)
pa = predict_flicker(N, bins, 1.0, d, "averaged")
pc = predict_flicker(N, bins, 1.0, d, "carouseled")
print(f"\n{R} realizations of 1/f noise, N={N}")
for t in (1, 10, 50):
    print(f"  bin {t:>2}: averaged {va[t - 1]:.3f} (exact {pa[t - 1]:.3f})  carouseled {vc[t - 1]:.3f} (exact {pc[t - 1]:.3f})")
print("  carouseled flat:", trend_test(vc)["flat_at_3sigma"], "  averaged flat:", trend_test(va)["flat_at_3sigma"])


def draw(ax):
    ax.plot(ones, label="ones")
    ax.plot(s, label="sine")
    ax.plot(c, label="cosine")
    ax.set_xlabel("matrix dimension")
    ax.legend()


maybe_plot("03_flicker_gain", draw)

"""Rate random walk: direct averaging versus carouseling.

Two perpendicular gyros rotate with N samples per revolution. The variance of
a directly averaged random walk grows by about sigma^2 N per revolution, while
the carouseled estimate stays level at about sigma^2 N / (2 pi^2).
"""

import numpy as np
from _plot import maybe_plot

from gyrocarousel import predict_avg_rrw, predict_carousel_rrw, reduction_factor_rrw
from gyrocarousel.experiments import simulate_bins, trend_test, variance_with_error

N, bins, R = 200, 50, 1000
avg, car = simulate_bins("RRW", N, bins, R, 1.0, None, seed=1)
va, _ = variance_with_error(avg)
vc, _ = variance_with_error(car)
pa = predict_avg_rrw(N, bins, 1.0).per_bin_variance
pc = predict_carousel_rrw(N, 1.0, bins=bins).per_bin_variance

print(f"{R} realizations, N={N}, unit driving variance")
print(" bin   averaged (sim / pred)     carouseled (sim / pred)")
for t in (1, 2, 10, 25, 50):
    print(f" {t:>3}   {va[t - 1]:9.1f} / {pa[t - 1]:9.1f}     {vc[t - 1]:7.3f} / {pc[t - 1]:7.3f}")

trend = trend_test(vc)
print(f"\ncarouseled trend: slope {trend['slope']:.4f} +/- {trend['slope_stderr']:.4f}  flat: {trend['flat_at_3sigma']}")
print(f"averaged increment per bin: {np.mean(np.diff(va)):.1f} (prediction {N})")
print(f"asymptotic reduction relative to the second average: {reduction_factor_rrw():.4f}")

for n in (4, 16, 200, 10_000):
    exact = predict_carousel_rrw(n, 1.0).per_bin_variance[0]
    asym = predict_carousel_rrw(n, 1.0, "asymptotic").per_bin_variance[0]
    print(f"  N={n:>6}: exact {exact:.4f}, asymptotic {asym:.4f}")


def draw(ax):
    t = np.arange(1, bins + 1)
    ax.semilogy(t, va, label="averaged")
    ax.semilogy(t, vc, label="carouseled")
    ax.semilogy(t, pa, "k--", lw=0.8)
    ax.semilogy(t, pc, "k--", lw=0.8)
    ax.set_xlabel("revolution")
    ax.set_ylabel("variance")
    ax.legend()


maybe_plot("02_rrw_carouseling", draw)

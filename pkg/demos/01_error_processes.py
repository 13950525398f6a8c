"""Gyro error processes: white noise, rate random walk, 1/f noise and bias.

Each generator is driven by a (master, stream) seed, so identical seeds give
identical series. Run with --plot to save a figure.
"""

import numpy as np
from _plot import maybe_plot

from gyrocarousel import ProcessSpec, Seed, compose_error, flicker_coefficients, gen_flicker, gen_rrw, gen_white

n = 10_000
seed = Seed(42, 0)

white = gen_white(n, 1.0, seed)
rrw = gen_rrw(n, 1.0, seed)
flicker = gen_flicker(n, 1.0, 0.5, seed)

print("A random walk is the running sum of the white draws with the same seed:")
print("  identical:", np.array_equal(rrw.values, np.cumsum(white.values)))

c = flicker_coefficients(10_001, 0.5).coefficients
print("\n1/f impulse response c_k decays like k^(d-1):")
for k in (1, 10, 100, 1000, 10_000):
    print(f"  k={k:>6}  c_k={c[k]:.5f}  c_k*k^(1-d)={c[k] * k**0.5:.5f}")
print(f"  limit 1/Gamma(0.5) = {1 / np.sqrt(np.pi):.5f}")

# ensemble variance at the last sample shows the growth of each process
R = 500
ends = {
    "white": [gen_white(1000, 1.0, seed.spawn(r)).values[-1] for r in range(R)],
    "rrw": [gen_rrw(1000, 1.0, seed.spawn(r)).values[-1] for r in range(R)],
    "flicker": [gen_flicker(1000, 1.0, 0.5, seed.spawn(r)).values[-1] for r in range(R)],
}
print("\nEnsemble variance at sample 1000 (500 realizations):")
for name, v in ends.items():
    print(f"  {name:<8} {np.var(v, ddof=1):10.3f}")

mix = compose_error([ProcessSpec.white(1e-2), ProcessSpec.rrw(1e-6), ProcessSpec.bias(0.05)], n, seed)
print(f"\nComposite error '{mix.label}': mean {mix.values.mean():.4f}, std {mix.values.std():.4f}")



def draw(ax):
    for s in (white, rrw, flicker):
        ax.plot(s.values, label=s.label, lw=0.7)
    ax.legend()


maybe_plot("01_error_processes", draw)

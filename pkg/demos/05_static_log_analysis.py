"""Zero-input gyro log: Allan parameters, confidence bounds and angle drift.

A one-hour, 100 Hz synthetic recording is written as CSV, ingested, and
analyzed with direct averaging and software carouseling (N = 200, T = 2 s).
Pass a path to analyze your own t,gx,gy,gz log instead.
"""

import sys
import tempfile
from pathlib import Path

import numpy as np
from _plot import maybe_plot

from gyrocarousel import ingest, write_log
from gyrocarousel.experiments import REFERENCE_GYRO_PARAMS, analyze_static, simulate_static_log

args = [a for a in sys.argv[1:] if not a.startswith("--")]
if args:
    path = Path(args[0])
else:
    log = simulate_static_log(*REFERENCE_GYRO_PARAMS, 3600.0, 100.0, seed=3, bias=(2e-3, -1e-3))
    path = write_log(Path(tempfile.mkdtemp()) / "static.csv", log.t, log.gx, log.gy, log.gz)
log = ingest(path)
print(f"ingested {len(log)} samples at {log.sample_rate:g} Hz from {path}")

a = analyze_static(log, samples_per_rev=200)
for name, p in zip("xy", a.params):
    print(f"  {name} gyro: white {p.white_variance_at_1s:.3e} (rad/s)^2 at 1 s, RRW {p.rrw_variance:.3e} (rad/s)^2/s")
print("fraction outside the predicted 2-sigma bounds:", {k: round(v, 4) for k, v in a.exceedance.items()})
print("terminal angle error (deg):", {k: round(float(np.rad2deg(v.values[-1])), 2) for k, v in a.angles.items()})


def draw(ax):
    t = a.config.period * np.arange(1, len(a.carouseled) + 1)
    for key, series in a.angles.items():
        ax.plot(t, np.rad2deg(series.values), label=key)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("angle error (deg)")
    ax.legend()


maybe_plot("05_angle_error", draw)

"""Batch command line front-end.

Subcommands: ``gen-noise``, ``simulate``, ``allan``, ``predict``,
``ingest-check`` and ``analyze-static``. Each writes CSV tables plus a JSON
sidecar (keys ``seed``, ``prng``, ``config``, ``version``, ``results``) at
the ``--out`` prefix, or a single JSON file with ``--format json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .allan import GyroErrorParams, allan_variance, predict_interval
from .carousel import CarouselConfig
from .constant_avar import gen_R, gen_S
from .experiments import EXPERIMENTS, ExperimentConfig, analyze_static, build_report, static_report
from .logs import HEADER, LogFormatError, ingest
from .noise import gen_bias, gen_flicker, gen_rrw, gen_white
from .reports import Report
from .series import InvalidParameterError, SampleSeries, Seed

log = logging.getLogger("gyrocarousel")

EPILOGS = {
    "gen-noise": "CSV columns: k (sample index, 1-based), t (s), value.",
    "simulate": (
        "CSV columns by experiment:\n"
        "  rrw-variance, flicker-variance: bin, averaged_var, averaged_stderr, carouseled_var,\n"
        "    carouseled_stderr, predicted_averaged, predicted_carouseled[, predicted_carouseled_asymptotic]\n"
        "  flicker-gain: dimension, ones, s, c\n"
        "  const-avar-check: tau, mean_2avar, std_2avar, deterministic_avar\n"
        "  static-analysis: see analyze-static"
    ),
    "allan": "CSV columns: tau (s), then avar_<axis> and bins_<axis> for every analyzed axis.",
    "predict": "CSV columns: bin, t (s), variance_<mode>, two_sigma_<mode> for mode in averaged_x, averaged_y, carouseled.",
    "ingest-check": "Prints a one-line summary; exit status 2 when the log is rejected.",
    "analyze-static": (
        "Writes <out>_rates.csv (bin, t, averaged_x, averaged_y, carouseled, two_sigma_*),\n"
        "<out>_angles.csv (bin, t, angle_*_rad, angle_*_deg) and <out>_allan.csv\n"
        "(tau, avar_x, bins_x, avar_y, bins_y). Carouseling is applied virtually to the\n"
        "recorded samples, which is valid only for zero-input (static) logs."
    ),
}


def _common(p: argparse.ArgumentParser, out_required: bool = True) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed (64-bit unsigned)")
    p.add_argument("--stream", type=int, default=0, help="seed stream index")
    p.add_argument("--out", required=out_required, help="output path prefix")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gyrocarousel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, epilog=EPILOGS[name], formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("gen-noise", "generate one error-process realization")
    p.add_argument("--kind", required=True, choices=("white", "rrw", "flicker", "bias", "const-avar"))
    p.add_argument("-n", "--samples", type=int, default=1024)
    p.add_argument("--variance", type=float, default=1.0)
    p.add_argument("--d", type=float, default=0.5, help="fractional order for flicker")
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--levels", type=int, default=10, help="const-avar: sequence length 2**levels")
    p.add_argument("--stochastic", action="store_true", help="const-avar: random level draws")
    p.add_argument("--dt", type=float, default=1.0, help="sample interval (s)")
    _common(p)

    p = add("simulate", "run a Monte Carlo experiment")
    p.add_argument("--config", help="JSON ExperimentConfig file")
    p.add_argument("--experiment", choices=EXPERIMENTS)
    for flag, typ in (
        ("realizations", int),
        ("samples-per-rev", int),
        ("period", float),
        ("bins", int),
        ("variance", float),
        ("d", float),
        ("levels", int),
        ("dimension", int),
        ("workers", int),
    ):
        p.add_argument(f"--{flag}", type=typ)
    _common(p, out_required=False)

    p = add("allan", "non-overlapping Allan variance of a log or series CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--axes", default="gx,gy,gz")
    p.add_argument("--units", choices=("rad", "deg"), default="rad")
    p.add_argument("--warmup", type=float, default=0.0, help="seconds excluded at the start")
    _common(p)

    p = add("predict", "predicted bin variances and 2-sigma bounds from error parameters")
    p.add_argument("--params", help="JSON file with 'x' and 'y' GyroErrorParams objects")
    for axis in ("x", "y"):
        p.add_argument(f"--white-{axis}", type=float, help=f"{axis} gyro white Allan variance at 1 s")
        p.add_argument(f"--rrw-{axis}", type=float, help=f"{axis} gyro RRW intensity, (rad/s)^2/s")
    p.add_argument("-N", "--samples-per-rev", type=int, default=200)
    p.add_argument("--period", type=float, default=2.0)
    p.add_argument("--bins", type=int, default=1800)
    _common(p)

    p = add("ingest-check", "validate a t,gx,gy,gz log")
    p.add_argument("--input", required=True)
    p.add_argument("--units", choices=("rad", "deg"), default="rad")
    p.add_argument("--sample-rate", type=float)

    p = add("analyze-static", "averaged vs. carouseled analysis of a zero-input log")
    p.add_argument("--input", required=True)
    p.add_argument("--units", choices=("rad", "deg"), default="rad")
    p.add_argument("--axes", default="gx,gy")
    p.add_argument("-N", "--samples-per-rev", type=int, default=200)
    p.add_argument("--warmup", type=float, default=0.0, help="seconds excluded from Allan analysis")
    p.add_argument("--tau-white", type=float, default=1.0)
    p.add_argument("--tau-rrw", type=float)
    _common(p)
    return parser


def _seed(args) -> Seed:
    return Seed(0 if args.seed is None else args.seed, args.stream)


def _write(report: Report, args) -> None:
    for path in report.write(args.out, args.format):
        print(path)


def cmd_gen_noise(args) -> None:
    seed = _seed(args)
    if args.kind == "white":
        series = gen_white(args.samples, args.variance, seed, args.dt)
    elif args.kind == "rrw":
        series = gen_rrw(args.samples, args.variance, seed, args.dt)
    elif args.kind == "flicker":
        series = gen_flicker(args.samples, args.variance, args.d, seed, args.dt)
    elif args.kind == "bias":
        series = gen_bias(args.samples, args.bias, args.dt)
    else:
        seq = gen_R(args.levels, seed) if args.stochastic else gen_S(args.levels)
        series = SampleSeries(seq.values, args.dt, "const-avar")
    k = np.arange(1, len(series) + 1)
    config = {key: value for key, value in vars(args).items() if key not in ("func", "verbose")}
    report = Report("gen-noise", config, seed.to_dict(), {"": {"k": k, "t": series.times, "value": series.values}})
    _write(report, args)


def _config_from_args(args) -> ExperimentConfig:
    data = ExperimentConfig.from_file(args.config).to_dict() if args.config else {}
    if args.experiment:
        data["experiment"] = args.experiment
    if "experiment" not in data:
        raise InvalidParameterError("give --experiment or a --config file")
    for key in ("realizations", "samples_per_rev", "period", "bins", "variance", "d", "levels", "dimension", "workers"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.seed is not None:
        data["seed"], data["stream"] = args.seed, args.stream
    if args.out:
        data["output"] = args.out
    if args.format != "csv" or "format" not in data:
        data["format"] = args.format
    return ExperimentConfig.from_dict(data)


def cmd_simulate(args) -> None:
    config = _config_from_args(args)
    if not config.output:
        raise InvalidParameterError("give --out or set 'output' in the config file")
    report = build_report(config)
    for path in report.write(config.output, config.format):
        print(path)


def _read_series_csv(path: Path) -> SampleSeries:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    t, values = data[:, 1], data[:, 2]
    dt = float(np.median(np.diff(t))) if t.size > 1 else 1.0
    return SampleSeries(values, dt, path.stem)


def cmd_allan(args) -> None:
    path = Path(args.input)
    with path.open(encoding="utf-8") as fh:
        header = tuple(c.strip() for c in fh.readline().strip().split(","))
    if header == HEADER:
        gyro_log = ingest(path, args.units)
        series = {axis: gyro_log.axis(axis) for axis in args.axes.split(",")}
    elif header == ("k", "t", "value"):
        series = {"value": _read_series_csv(path)}
    else:
        raise LogFormatError(f"{path}:1: expected a t,gx,gy,gz log or a k,t,value series")
    table = {}
    for name, s in series.items():
        skip = int(round(args.warmup / s.sample_interval))
        curve = allan_variance(SampleSeries(s.values[skip:], s.sample_interval, name))
        table.setdefault("tau", curve.tau)
        table[f"avar_{name}"] = curve.avar
        table[f"bins_{name}"] = curve.bins
    config = {"input": str(path), "axes": list(series), "units": args.units, "warmup": args.warmup}
    _write(Report("allan", config, _seed(args).to_dict(), {"": table}), args)


def _params_from_args(args) -> tuple[GyroErrorParams, GyroErrorParams]:
    if args.params:
        data = json.loads(Path(args.params).read_text(encoding="utf-8"))
        return GyroErrorParams.from_dict(data["x"]), GyroErrorParams.from_dict(data["y"])
    out = []
    for axis in ("x", "y"):
        white, rrw = getattr(args, f"white_{axis}"), getattr(args, f"rrw_{axis}")
        if white is None or rrw is None:
            raise InvalidParameterError(f"give --params or both --white-{axis} and --rrw-{axis}")
        out.append(GyroErrorParams(white, rrw))
    return tuple(out)


def cmd_predict(args) -> None:
    params = _params_from_args(args)
    config = CarouselConfig(args.samples_per_rev, args.period)
    table = {"bin": np.arange(1, args.bins + 1), "t": config.period * np.arange(1, args.bins + 1)}
    for name, mode, gyro in (("averaged_x", "averaged", 0), ("averaged_y", "averaged", 1), ("carouseled", "carouseled", 0)):
        pred = predict_interval(params, config, args.bins, mode, gyro)
        table[f"variance_{name}"] = pred.per_bin_variance
        table[f"two_sigma_{name}"] = pred.two_sigma
    echo = {
        "x": params[0].to_dict(),
        "y": params[1].to_dict(),
        "samples_per_rev": config.samples_per_rev,
        "period": config.period,
        "bins": args.bins,
    }
    _write(Report("predict", echo, _seed(args).to_dict(), {"": table}), args)


def cmd_ingest_check(args) -> int:
    try:
        gyro_log = ingest(args.input, args.units, args.sample_rate)
    except LogFormatError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return 2
    print(
        f"ok: {len(gyro_log)} samples at {gyro_log.sample_rate:.6g} Hz, "
        f"{len(gyro_log.gap_lines)} gaps, {len(gyro_log.rejected_lines)} rejected rows"
    )
    return 0


def cmd_analyze_static(args) -> None:
    gyro_log = ingest(args.input, args.units)
    axes = tuple(args.axes.split(","))
    if len(axes) != 2:
        raise InvalidParameterError("--axes needs exactly two axis names")
    config = ExperimentConfig(
        "static-analysis",
        samples_per_rev=args.samples_per_rev,
        period=args.samples_per_rev / gyro_log.sample_rate,
        log_path=str(args.input),
        units=args.units,
        axes=axes,
        warmup_skip=args.warmup,
        tau_white=args.tau_white,
        tau_rrw=args.tau_rrw,
        output=args.out,
        format=args.format,
        seed=0 if args.seed is None else args.seed,
        stream=args.stream,
    )
    analysis = analyze_static(gyro_log, axes, args.samples_per_rev, args.warmup, args.tau_white, args.tau_rrw)
    _write(static_report(analysis, config, gyro_log), args)


COMMANDS = {
    "gen-noise": cmd_gen_noise,
    "simulate": cmd_simulate,
    "allan": cmd_allan,
    "predict": cmd_predict,
    "ingest-check": cmd_ingest_check,
    "analyze-static": cmd_analyze_static,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args) or 0
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

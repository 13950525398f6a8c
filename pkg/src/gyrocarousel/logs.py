"""Reading and writing recorded three-axis gyro logs.

The on-disk format is UTF-8 CSV with the header ``t,gx,gy,gz``: time in
seconds and angular rates in rad/s (or deg/s when ingested with
``units="deg"``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .series import InvalidParameterError, SampleSeries

log = logging.getLogger(__name__)

HEADER = ("t", "gx", "gy", "gz")
AXES = HEADER[1:]
#: Intervals longer than this multiple of the nominal one are flagged as gaps.
GAP_FACTOR = 1.5
#: Relative disagreement tolerated between declared and inferred sample rates.
RATE_TOLERANCE = 0.01


class LogFormatError(InvalidParameterError):
    """A gyro log that cannot be accepted; the message names the offending line."""


@dataclass(frozen=True)
class GyroLog:
    """Validated gyro recording.

    ``gap_lines`` and ``rejected_lines`` are 1-based line numbers in the
    source file (the header is line 1).
    """

    t: np.ndarray
    gx: np.ndarray
    gy: np.ndarray
    gz: np.ndarray
    sample_rate: float
    gap_lines: tuple = field(default=())
    rejected_lines: tuple = field(default=())
    source: str = ""

    def __len__(self):
        return self.t.size

    @property
    def sample_interval(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def duration(self) -> float:
        return len(self) * self.sample_interval

    def axis(self, name: str) -> SampleSeries:
        if name not in AXES:
            raise InvalidParameterError(f"unknown axis {name!r}; expected one of {AXES}")
        return SampleSeries(getattr(self, name), self.sample_interval, name)


def _parse_body(path: Path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, encoding="utf-8")
    except ValueError as exc:
        raise LogFormatError(f"{path}: unparsable row ({exc})") from exc
    if data.size == 0:
        raise LogFormatError(f"{path}: no data rows")
    if data.shape[1] != len(HEADER):
        raise LogFormatError(f"{path}: expected {len(HEADER)} columns, found {data.shape[1]}")
    return data


def ingest(path, units: str = "rad", sample_rate: float | None = None) -> GyroLog:
    """Load and validate a ``t,gx,gy,gz`` CSV log.

    Rows with non-finite values are dropped and their line numbers kept in
    :attr:`GyroLog.rejected_lines`. Raises :class:`LogFormatError` for a
    wrong header, non-increasing time stamps, or a declared ``sample_rate``
    that disagrees with the time stamps.
    """
    path = Path(path)
    if units not in ("rad", "deg"):
        raise InvalidParameterError(f"units must be 'rad' or 'deg', got {units!r}")
    with path.open(encoding="utf-8") as fh:
        header = tuple(col.strip().lower() for col in fh.readline().strip().split(","))
    if header != HEADER:
        raise LogFormatError(f"{path}:1: malformed header {','.join(header)!r}; expected 't,gx,gy,gz'")
    data = _parse_body(path)
    line_numbers = np.arange(2, data.shape[0] + 2)

    finite = np.all(np.isfinite(data), axis=1)
    rejected = tuple(line_numbers[~finite].tolist())
    if rejected:
        log.warning("%s: dropped %d rows with non-finite values (first at line %d)", path, len(rejected), rejected[0])
    data, line_numbers = data[finite], line_numbers[finite]
    if data.shape[0] == 0:
        raise LogFormatError(f"{path}: no finite data rows")

    t = data[:, 0]
    steps = np.diff(t)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        line = int(line_numbers[bad[0] + 1])
        raise LogFormatError(f"{path}:{line}: time stamp {t[bad[0] + 1]!r} does not increase")

    if steps.size:
        inferred = 1.0 / float(np.median(steps))
    elif sample_rate is None:
        raise LogFormatError(f"{path}: a single row gives no sample rate; declare one")
    else:
        inferred = float(sample_rate)
    if sample_rate is not None:
        if abs(inferred / sample_rate - 1.0) > RATE_TOLERANCE:
            raise LogFormatError(
                f"{path}: declared sample rate {sample_rate} Hz disagrees with {inferred:.6g} Hz "
                "inferred from the time stamps (are they in seconds?)"
            )
        inferred = float(sample_rate)
    gaps = tuple(line_numbers[1:][steps > GAP_FACTOR / inferred].tolist())
    if gaps:
        log.warning("%s: %d gaps longer than %.1fx the sample interval", path, len(gaps), GAP_FACTOR)

    rates = data[:, 1:]
    if units == "deg":
        rates = np.deg2rad(rates)
    return GyroLog(t.copy(), *(rates[:, k].copy() for k in range(3)), inferred, gaps, rejected, str(path))


def write_log(path, t, gx, gy, gz) -> Path:
    """Write a log in the ingestible CSV format (rad/s)."""
    path = Path(path)
    table = np.column_stack([t, gx, gy, gz])
    np.savetxt(path, table, delimiter=",", header=",".join(HEADER), comments="", fmt="%.17g", encoding="utf-8")
    return path

"""Deterministic CSV + JSON report files.

Every table becomes ``<prefix>[_<table>].csv`` (one row per bin or tau) and
the scalars plus provenance go to ``<prefix>.json`` with keys ``seed``,
``prng``, ``config``, ``version`` and ``results``. With ``fmt="json"`` the
tables are embedded in the JSON file instead. Floats are written with
``repr`` so reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .series import PRNG_NAME


def _clean(value):
    """JSON-safe, deterministic representation of report values."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    return repr(value) if math.isfinite(value) else "nan"


@dataclass
class Report:
    """Tables (column name -> 1-D array) and scalar results with provenance."""

    experiment: str
    config: dict
    seed: dict
    tables: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": _clean(self.seed),
            "prng": PRNG_NAME,
            "config": _clean(self.config),
            "version": __version__,
            "results": _clean(self.results),
        }

    def write(self, prefix, fmt: str = "csv") -> list[Path]:
        prefix = Path(prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        written = []
        meta = self.sidecar()
        if fmt == "csv":
            for name, table in self.tables.items():
                path = prefix.with_name(prefix.name + (f"_{name}" if name else "") + ".csv")
                write_table(path, table)
                written.append(path)
        elif fmt == "json":
            meta["tables"] = {name: _clean(dict(table)) for name, table in self.tables.items()}
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        path = prefix.with_name(prefix.name + ".json")
        path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)
        return written


def write_table(path, table: dict) -> Path:
    columns = list(table)
    arrays = [np.asarray(table[c]) for c in columns]
    lengths = {a.size for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns of {path} differ in length: {lengths}")
    lines = [",".join(columns)]
    for row in zip(*arrays):
        lines.append(",".join(_cell(v) for v in row))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

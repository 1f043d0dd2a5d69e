"""Deterministic JSON / CSV output for verification runs."""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

_FLOAT_TAG = "\x00f:"
_TAG_RE = re.compile(r'"\\u0000f:([^"]*)"')


@dataclass
class Check:
    """One verified quantity. mode 'below': value < tol passes; 'above': value > tol; 'equal': value == tol."""

    name: str
    value: Any
    tol: float
    mode: str = "below"
    witness: Any = None
    info: Any = None

    @property
    def passed(self) -> bool:
        v = self.value
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        if self.mode == "below":
            return v < self.tol
        if self.mode == "above":
            return v > self.tol
        return v == self.tol

    def as_dict(self) -> dict:
        d = {"name": self.name, "value": self.value, "tol": self.tol, "mode": self.mode, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.info is not None:
            d["info"] = self.info
        return d


@dataclass
class SuiteResult:
    suite: str
    params: dict
    checks: list
    seed: int
    backend: str
    wall_time: float | None = None
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.as_dict() for c in self.checks],
            "passed": self.passed,
            "wall_time": self.wall_time,
            "seed": self.seed,
            "backend": self.backend,
        }


def _float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return _FLOAT_TAG + format(x, ".17g")


def to_jsonable(obj):
    """Plain containers with floats tagged for fixed-width formatting; complex becomes [re, im]."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(float(obj.real)), _float(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Sorted keys, floats at 17 significant digits, complex as [re, im]."""
    text = json.dumps(to_jsonable(obj), sort_keys=True, indent=1)
    return _TAG_RE.sub(lambda m: m.group(1), text) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("qonsager").joinpath("report.schema.json").read_text())


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(json.loads(dumps(report)), load_schema())


def write_report(result: SuiteResult, out_dir: Path, csv_tables: bool = False) -> list[Path]:
    """Write <suite>.json (validated) and, if asked, one CSV per table plus <suite>.checks.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = result.as_dict()
    written = []
    if csv_tables:
        for name, rows in sorted(result.tables.items()):
            p = out_dir / f"{result.suite}.{name}.csv"
            write_csv(p, rows)
            written.append(p)
        p = out_dir / f"{result.suite}.checks.csv"
        write_csv(p, [{"name": c.name, "value": c.value, "tol": c.tol, "mode": c.mode, "passed": c.passed}
                      for c in result.checks])
        written.append(p)
    report["artifacts"] = sorted(p.name for p in written)
    validate_report(report)
    p = out_dir / f"{result.suite}.json"
    p.write_text(dumps(report))
    return [p] + written


def _cell(v):
    if isinstance(v, (complex, np.complexfloating)):
        return f"{format(float(v.real), '.17g')}{format(float(v.imag), '+.17g')}j"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (tuple, list)):
        return " ".join(str(x) for x in v)
    return v


def write_csv(path: Path, rows) -> None:
    """rows: list of dicts (header from the first row) or a 2-D array."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if isinstance(rows, np.ndarray):
            for r in rows:
                w.writerow([_cell(v) for v in r])
            return
        rows = list(rows)
        if not rows:
            return
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r[k]) for k in keys])

"""Report documents and their JSON / CSV serializations.

Everything except the ``timings`` block is a deterministic function of the
run configuration and seed.
"""
import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Assertion:
    name: str
    value: float
    threshold: float
    op: str  # "<=" or ">="
    criterion: int

    @property
    def passed(self):
        if self.op == "<=":
            return self.value <= self.threshold
        return self.value >= self.threshold

    def to_dict(self):
        return {"name": self.name, "criterion": self.criterion, "value": self.value,
                "op": self.op, "threshold": self.threshold, "passed": self.passed}


@dataclass
class Report:
    subcommand: str
    params: dict
    results: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    csv_header: list = field(default_factory=list)
    csv_rows: list = field(default_factory=list)

    def check(self, name, value, threshold, op="<=", criterion=0):
        a = Assertion(name, float(value), float(threshold), op, criterion)
        self.assertions.append(a)
        return a.passed

    @property
    def all_passed(self):
        return all(a.passed for a in self.assertions)

    def to_dict(self, timings=True):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "subcommand": self.subcommand,
            "params": self.params,
            "results": self.results,
            "residuals": self.residuals,
            "assertions": [a.to_dict() for a in self.assertions],
        }
        if timings:
            doc["timings"] = self.timings
        return jsonable(doc)


def jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def to_json(report, timings=True):
    return json.dumps(report.to_dict(timings), indent=2, sort_keys=True, allow_nan=False) + "\n"


def to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.csv_header)
    for row in report.csv_rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def emit(report, fmt="json", path=None, timings=True):
    """Serialize ``report``; write to ``path`` unless it is None or ``-``."""
    if fmt == "json":
        text = to_json(report, timings)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path in (None, "-"):
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def matrix_records(mat, tol=0.0):
    """(row, col, re, im) rows for entries with modulus above ``tol``."""
    mat = np.asarray(mat)
    rows = []
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            v = mat[i, j]
            if abs(v) > tol or tol == 0.0:
                rows.append([i, j, float(v.real), float(v.imag)])
    return rows

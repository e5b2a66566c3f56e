"""JSON / CSV serialization of experiment reports.

JSON output is a single object holding ``schema_version`` and every field of
:class:`~whsketch.evaluator.ErrorReport`. CSV output is a header row with the
same names in the same order followed by one data row per report. Floats are
written with ``repr``, the shortest decimal string that parses back to the
identical double. NaN and infinities become ``null`` in JSON and an empty
cell in CSV.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from contextlib import contextmanager

from .evaluator import ErrorReport

SCHEMA_VERSION = 1
AMPLIFY_CSV_FIELDS = ["schema_version", "iteration", "residual_sq", "relative_residual_sq"]


def report_fields() -> list[str]:
    """Column order shared by the JSON object and the CSV header."""
    return ["schema_version"] + ErrorReport.field_names()


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _cell(value) -> str:
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_row(report: ErrorReport) -> dict:
    return {"schema_version": SCHEMA_VERSION, **report.to_dict()}


@contextmanager
def _open(path):
    # None or "-" means stdout
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_json(obj, path) -> None:
    with _open(path) as fh:
        fh.write(json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n")


def write_csv(rows: list[dict], fieldnames: list[str], path) -> None:
    with _open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_cell(row.get(name)) for name in fieldnames])


def write_report(report: ErrorReport | list[ErrorReport], fmt: str, path) -> None:
    """Write one report (``run``) or several (``sweep``) as JSON or CSV.

    A list is written as ``{"schema_version": 1, "reports": [...]}`` in JSON,
    and as one CSV row per report.
    """
    reports = report if isinstance(report, list) else [report]
    rows = [report_row(r) for r in reports]
    if fmt == "json":
        if isinstance(report, list):
            write_json({"schema_version": SCHEMA_VERSION, "reports": rows}, path)
        else:
            write_json(rows[0], path)
    elif fmt == "csv":
        write_csv(rows, report_fields(), path)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'json' or 'csv'")


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))

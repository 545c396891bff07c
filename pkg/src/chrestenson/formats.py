"""CSV and JSON encodings of step functions, spectra and flat reports.

CSV files are sectioned: a header line and a value line for the metadata,
then a header line ``index,re,im`` followed by one row per entry.  Floats in
CSV carry 17 significant digits; JSON uses Python's shortest round-trip repr.
Both reproduce doubles bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .transform import Spectrum
from .walsh import StepFunction


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _plain(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


def _complex_rows(values):
    return [(i, v.real, v.imag) for i, v in enumerate(values)]


def _write_csv(meta: dict, rows, row_header=("index", "re", "im")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(meta))
    w.writerow([fmt(v) for v in meta.values()])
    w.writerow(list(row_header))
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def step_function_to_csv(f: StepFunction) -> str:
    return _write_csv({"order": f.order, "resolution": f.resolution}, _complex_rows(f.values))


def spectrum_to_csv(S: Spectrum) -> str:
    return _write_csv({"order": S.order, "length": len(S)}, _complex_rows(S.coefficients))


def _complex_json(values):
    return [{"index": i, "re": float(v.real), "im": float(v.imag)} for i, v in enumerate(values)]


def step_function_to_json(f: StepFunction) -> str:
    doc = {"order": f.order, "resolution": f.resolution, "values": _complex_json(f.values)}
    return json.dumps(doc, indent=1) + "\n"


def spectrum_to_json(S: Spectrum) -> str:
    doc = {"order": S.order, "length": len(S), "coefficients": _complex_json(S.coefficients)}
    return json.dumps(doc, indent=1) + "\n"


def _read_sections(text: str):
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 3:
        raise ValueError("truncated CSV: expected metadata header, metadata row and column header")
    meta = dict(zip(rows[0], rows[1]))
    if rows[2] != ["index", "re", "im"]:
        raise ValueError(f"unexpected column header {rows[2]}")
    body = rows[3:]
    return meta, body


def _complex_from_rows(body, length):
    values = np.zeros(length, dtype=np.complex128)
    seen = np.zeros(length, dtype=bool)
    for row in body:
        if len(row) != 3:
            raise ValueError(f"malformed row {row}")
        i = int(row[0])
        if not 0 <= i < length:
            raise ValueError(f"row index {i} out of range [0, {length})")
        values[i] = complex(float(row[1]), float(row[2]))
        seen[i] = True
    if not seen.all():
        raise ValueError("missing rows")
    return values


def _complex_from_json(entries, length):
    rows = [(e["index"], e["re"], e["im"]) for e in entries]
    return _complex_from_rows(rows, length)


def _parse(text: str):
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json", json.loads(stripped)
    return "csv", _read_sections(text)


def read_step_function(text: str) -> StepFunction:
    kind, doc = _parse(text)
    try:
        if kind == "json":
            a, N = int(doc["order"]), int(doc["resolution"])
            return StepFunction(a, N, _complex_from_json(doc["values"], a**N))
        meta, body = doc
        a, N = int(meta["order"]), int(meta["resolution"])
    except KeyError as exc:
        raise ValueError(f"missing field {exc} in step function file") from None
    return StepFunction(a, N, _complex_from_rows(body, a**N))


def read_spectrum(text: str) -> Spectrum:
    kind, doc = _parse(text)
    try:
        if kind == "json":
            a, L = int(doc["order"]), int(doc["length"])
            return Spectrum(a, _complex_from_json(doc["coefficients"], L))
        meta, body = doc
        a, L = int(meta["order"]), int(meta["length"])
    except KeyError as exc:
        raise ValueError(f"missing field {exc} in spectrum file") from None
    return Spectrum(a, _complex_from_rows(body, L))


def table_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def table_to_json(meta: dict, key: str, rows) -> str:
    doc = {k: _plain(v) for k, v in meta.items()}
    doc[key] = [{k: _json_number(_plain(v)) for k, v in r.items()} for r in rows]
    return json.dumps(doc, indent=1) + "\n"


def _json_number(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def record_to_json(record: dict) -> str:
    return json.dumps({k: _json_number(_plain(v)) for k, v in record.items()}, indent=1) + "\n"

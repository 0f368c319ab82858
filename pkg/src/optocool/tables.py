"""CSV / JSON emission of result records.

Floats are written with 17 significant digits in scientific notation, which
round-trips every IEEE double exactly and does not depend on the locale.
"""

import csv
import io
import json
import math

import numpy as np


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".16e")
    return str(value)


def parse_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_csv(columns, rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    write_csv(columns, rows, buf)
    return buf.getvalue()


def read_csv(text):
    """Inverse of :func:`to_csv`: (columns, list of row lists)."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    return columns, [[parse_value(v) for v in row] for row in reader]


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no inf/nan literals; keep them as strings
        return value if math.isfinite(value) else format_value(value)
    return value


def to_json(columns, rows) -> str:
    records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
    return json.dumps({"columns": list(columns), "records": records}, indent=1)


def read_json(text):
    data = json.loads(text)
    columns = data["columns"]
    rows = []
    for rec in data["records"]:
        row = []
        for c in columns:
            v = rec[c]
            if isinstance(v, str) and v in ("inf", "-inf", "nan"):
                v = float(v)
            row.append(v)
        rows.append(row)
    return columns, rows

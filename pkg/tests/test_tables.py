import math

import numpy as np

from optocool import tables


def test_csv_round_trip_is_exact():
    rng = np.random.default_rng(1)
    vals = rng.normal(size=50) * 10.0 ** rng.integers(-300, 300, size=50)
    rows = [[float(v), i, bool(i % 2), "x,y"] for i, v in enumerate(vals)]
    rows.append([math.inf, -1, False, ""])
    cols, back = tables.read_csv(tables.to_csv(["v", "i", "flag", "note"], rows))
    assert cols == ["v", "i", "flag", "note"]
    for a, b in zip(rows, back):
        assert a[0] == b[0] and a[1:] == b[1:]


def test_nan_and_format():
    assert tables.format_value(float("nan")) == "nan"
    assert tables.format_value(-math.inf) == "-inf"
    assert tables.format_value(np.float64(0.1)) == "1.0000000000000001e-01"
    assert tables.format_value(np.True_) == "true"
    assert tables.format_value(np.int64(3)) == "3"


def test_json_round_trip():
    rows = [[0.1, math.inf, True, 4], [math.nan, 2.5, False, 0]]
    cols, back = tables.read_json(tables.to_json(["a", "b", "c", "d"], rows))
    assert back[0] == rows[0]
    assert math.isnan(back[1][0]) and back[1][1:] == rows[1][1:]

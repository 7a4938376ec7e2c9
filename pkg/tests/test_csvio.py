import math

import pytest

from spectator.csvio import CsvTable, format_value, read_columns


def test_format_round_trips_doubles():
    for v in (0.1, 1 / 3, 2.0 ** -50, 6.02214076e23, -0.0):
        assert float(format_value(v)) == v
    assert format_value(True) == "1" and format_value(math.nan) == "nan"
    assert format_value("name") == "name"


def test_write_and_read(tmp_path):
    path = tmp_path / "t.csv"
    CsvTable(("x", "y"), [(1.0, 2.5), (3.0, 1 / 3)]).write(path)
    assert path.read_text().splitlines()[0] == "x,y"
    xs, ys = read_columns(path)
    assert xs == [1.0, 3.0] and ys[1] == 1 / 3
    assert not list(tmp_path.glob("*.tmp*"))


def test_read_rejects_ragged(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(ValueError):
        read_columns(path)

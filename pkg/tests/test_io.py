import json

import numpy as np
import pytest

from ctwalk import TimeGrid, build_rate_matrix, evolve_master, path_graph
from ctwalk.io import (
    config_line,
    fmt,
    write_columns_csv,
    write_json,
    write_jsonl,
    write_probability_series_csv,
)


def test_floats_round_trip_exactly():
    for x in (1 / 3, np.pi, 1e-300, -2.5, 0.1 + 0.2):
        assert float(fmt(x)) == x


def test_config_line_is_sorted_and_prefixed():
    line = config_line({"b": 2, "a": 1})
    assert line == "# config: a=1 b=2"


def test_columns_csv_layout(tmp_path):
    path = tmp_path / "series.csv"
    write_columns_csv(path, ["t", "x"], [np.array([0.0, 0.5]), np.array([1.0, 2.0])],
                      {"N": 9})
    lines = path.read_text().splitlines()
    assert lines[0] == "# config: N=9"
    assert lines[1] == "t,x"
    assert lines[2].split(",") == ["0", "1"]
    assert len(lines) == 4


def test_columns_csv_rejects_ragged(tmp_path):
    with pytest.raises(ValueError):
        write_columns_csv(tmp_path / "bad.csv", ["a", "b"],
                          [np.zeros(3), np.zeros(2)], {})


def test_probability_series_header(tmp_path):
    rm = build_rate_matrix(path_graph(3))
    series = evolve_master(rm, 1, TimeGrid(0.5, 3))
    path = tmp_path / "p.csv"
    write_probability_series_csv(path, series, {"walk": "classical"})
    lines = path.read_text().splitlines()
    assert lines[1] == "t,p1,p2,p3"
    first = [float(x) for x in lines[2].split(",")]
    assert first == pytest.approx([0.0, 1.0, 0.0, 0.0], abs=1e-12)


def test_json_embeds_config(tmp_path):
    path = tmp_path / "out.json"
    write_json(path, {"tau": 1.5}, {"N": 9})
    doc = json.loads(path.read_text())
    assert doc["config"] == {"N": 9}
    assert doc["tau"] == 1.5


def test_jsonl_one_record_per_line(tmp_path):
    path = tmp_path / "rows.jsonl"
    write_jsonl(path, [{"a": 1}, {"b": 2}])
    lines = path.read_text().splitlines()
    assert [json.loads(ln) for ln in lines] == [{"a": 1}, {"b": 2}]

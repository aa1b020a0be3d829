import json

import numpy as np
import pytest

from graphamp.serialize import csv_lines, dumps_json, format_value


def test_float_seventeen_significant_digits():
    assert format_value(1.0 / 3.0) == "0.33333333333333331"
    assert format_value(2.0) == "2"
    assert format_value(np.float64(0.1)) == "0.10000000000000001"


def test_round_trip_preserves_doubles():
    for x in [1 / 3, 1e-300, 123456.789, -0.0001, 2**-52]:
        assert float(format_value(x)) == x


def test_dumps_json_is_valid_and_ordered():
    doc = {"b": 1, "a": [1.5, True, None, "x,y"], "nested": {"z": np.float64(0.25)}}
    text = dumps_json(doc)
    assert text.endswith("\n")
    parsed = json.loads(text)
    assert parsed == {"b": 1, "a": [1.5, True, None, "x,y"], "nested": {"z": 0.25}}
    assert text.index('"b"') < text.index('"a"')  # insertion order kept


def test_dumps_json_numpy_arrays():
    assert json.loads(dumps_json({"v": np.array([1.0, 2.0])})) == {"v": [1.0, 2.0]}


def test_dumps_deterministic():
    doc = {"x": 0.1 + 0.2, "y": [np.int64(3)]}
    assert dumps_json(doc) == dumps_json(doc)


def test_csv_quoting_and_preamble():
    text = csv_lines(("a", "b"), [["x,1", 2.0], ["plain", -1]], preamble={"seed": 7})
    lines = text.split("\n")
    assert lines[0] == "# seed=7"
    assert lines[1] == "a,b"
    assert lines[2] == '"x,1",2'
    assert lines[3] == "plain,-1"
    assert text.endswith("\n")
    assert "\r" not in text


def test_rejects_unknown_scalar():
    with pytest.raises(TypeError):
        dumps_json({"x": object()})

import json

import numpy as np
import pytest

from kdscope.errors import ParseError
from kdscope.serialize import (
    format_float,
    read_matrix,
    read_state,
    write_matrix,
    write_state,
)


def test_format_float_round_trips_exactly():
    rng = np.random.default_rng(0)
    for x in rng.standard_normal(200) * 10.0 ** rng.integers(-12, 12, 200):
        assert float(format_float(x)) == x


def test_format_float_digit_count():
    # scientific notation with 17 significant digits
    assert format_float(0.5) == "5.0000000000000000e-01"


def test_matrix_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    u = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = tmp_path / "m.json"
    write_matrix(path, u, meta={"note": "test"})
    d, loaded = read_matrix(path)
    assert d == 3
    assert np.array_equal(loaded, u)


def test_matrix_document_is_valid_json(tmp_path):
    u = np.eye(2, dtype=complex)
    path = tmp_path / "m.json"
    write_matrix(path, u)
    doc = json.loads(path.read_text())
    assert doc["d"] == 2
    assert doc["rows"][0][0] == [1.0, 0.0]


def test_state_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    amps = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    path = tmp_path / "s.json"
    write_state(path, amps)
    d, loaded = read_state(path)
    assert d == 5
    assert np.array_equal(loaded, amps)


@pytest.mark.parametrize(
    "text",
    [
        '{"rows": [[[1,0]]]}',
        '{"d": 2, "rows": [[[1,0],[0,0]]]}',
        '{"d": 1, "rows": [[[1,0,5]]]}',
        '{"d": 1, "rows": [[["x",0]]]}',
        "[1, 2, 3]",
    ],
)
def test_malformed_matrix_rejected(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(ParseError):
        read_matrix(path)


@pytest.mark.parametrize(
    "text",
    ['{"d": 2, "amps": [[1,0]]}', '{"amps": [[1,0]]}', '{"d": 1, "amps": [1]}'],
)
def test_malformed_state_rejected(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(ParseError):
        read_state(path)


def test_missing_file():
    with pytest.raises(ParseError):
        read_matrix("/nonexistent/path.json")

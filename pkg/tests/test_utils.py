"""Tests for log-scale arithmetic, artifact writers, parallel map and configuration."""

import io
import math

import numpy as np
import pytest

from config import get_config, get_settings, print_config
from utils.log_complex import LogComplex, wrap_phase
from utils.parallel import ordered_map
from utils.serialization import (
    complex_pairs,
    dumps_json,
    format_float,
    pairs_to_complex,
    rows_to_csv,
    write_artifact,
)


class TestLogComplex:
    @pytest.mark.parametrize(
        "theta, expected",
        [
            (math.pi / 2, math.pi / 2),
            (3 * math.pi, math.pi),
            (-math.pi, math.pi),
            (-3 * math.pi / 2, math.pi / 2),
        ],
    )
    def test_wrap_phase(self, theta, expected):
        assert wrap_phase(theta) == pytest.approx(expected)

    def test_product_matches_direct(self):
        value = LogComplex.product([2.0, 3j, -1.0])
        assert value.to_complex() == pytest.approx(-6j)

    def test_product_with_zero_factor(self):
        assert LogComplex.product([1.0, 0.0, 5.0]).is_zero

    def test_large_product_stays_finite_in_log_scale(self):
        value = LogComplex.product(np.full(1000, 10.0))
        assert value.log_mag == pytest.approx(1000 * math.log(10.0))
        assert value.magnitude == math.inf

    def test_arithmetic(self):
        i = LogComplex.from_complex(1j)
        assert (i ** 2).to_complex() == pytest.approx(-1.0)
        assert (-i).to_complex() == pytest.approx(-1j)
        assert (i * LogComplex.from_complex(2.0)).to_complex() == pytest.approx(2j)
        assert (i / 2.0).to_complex() == pytest.approx(0.5j)
        assert i.signed(-1).to_complex() == pytest.approx(-1j)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            LogComplex.one() / LogComplex.zero()


class TestSerialization:
    def test_float_format_is_round_trip_exact(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert float(format_float(math.pi)) == math.pi

    def test_json_sorted_keys_complex_and_nan(self):
        text = dumps_json({"b": 1, "a": [1 + 2j, float("nan")]})
        assert text == '{"a": [[1, 2], "nan"], "b": 1}\n'

    def test_json_numpy_values(self):
        text = dumps_json({"x": np.float64(0.5), "n": np.int64(3), "ok": np.bool_(True)})
        assert text == '{"n": 3, "ok": true, "x": 0.5}\n'

    def test_csv_header_and_cells(self):
        rows = [{"m": 1, "x": 0.5, "ok": True}, {"m": 2, "x": None, "ok": False}]
        assert rows_to_csv(rows) == "m,ok,x\n1,true,0.5\n2,false,\n"

    def test_csv_column_order(self):
        assert rows_to_csv([{"a": 1, "b": 2}], columns=["b", "a"]) == "b,a\n2,1\n"

    def test_write_artifact_to_file(self, tmp_path):
        target = tmp_path / "nested" / "table.csv"
        write_artifact("a\n1\n", target)
        assert target.read_text() == "a\n1\n"

    def test_write_artifact_to_stream(self):
        stream = io.StringIO()
        write_artifact("payload", stream=stream)
        assert stream.getvalue() == "payload"

    def test_complex_pairs(self):
        values = np.array([1 + 2j, -3j])
        np.testing.assert_allclose(pairs_to_complex(complex_pairs(values)), values)


def test_ordered_map_keeps_order():
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, threads=4) == [x * x for x in items]


def test_config_sections():
    config = get_config()
    for section in ("numerics", "sampling", "fekete", "zeros", "laplace", "cli"):
        assert section in config
    assert config["numerics"]["separation_guard"] == pytest.approx(1e-10)
    assert get_settings().THREADS >= 1


def test_print_config_writes_to_stream():
    stream = io.StringIO()
    print_config(stream)
    assert "[NUMERICS]" in stream.getvalue()


def test_settings_follow_cli_section(mocker):
    mocker.patch.dict("config.CLI_CONFIG", {"threads": 0})
    assert get_settings().THREADS == 1
    mocker.patch.dict("config.CLI_CONFIG", {"threads": 4})
    assert get_settings().THREADS == 4
    assert not hasattr(get_settings(), "TOL")

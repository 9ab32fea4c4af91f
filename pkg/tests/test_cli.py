"""Tests for the command-line entry point."""

import io
import json
import math

import pytest

from cli.main import main, parse_m_range
from errors import ConfigError, NonConvergent


def run_cli(*argv):
    stdout = io.StringIO()
    code = main(list(argv), stdout=stdout)
    return code, stdout.getvalue()


class TestMRange:
    @pytest.mark.parametrize(
        "text, expected",
        [("4", [4]), ("4,8,12", [4, 8, 12]), ("2:5", [2, 3, 4, 5])],
    )
    def test_forms(self, text, expected):
        assert parse_m_range(text) == expected

    @pytest.mark.parametrize("text", ["", "a", "0", "3:x"])
    def test_bad(self, text):
        with pytest.raises(ConfigError):
            parse_m_range(text)


class TestSubcommands:
    def test_fekete_csv(self):
        code, out = run_cli("fekete", "--set", "circle:1", "--m", "4", "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        header = lines[0].split(",")
        assert {"m", "point_index", "re", "im", "logdet"} <= set(header)
        assert len(lines) == 5
        logdet = float(lines[1].split(",")[header.index("logdet")])
        assert logdet == pytest.approx(math.log(16.0))

    def test_fekete_searches_each_m_once(self, mocker):
        import engine.capacity

        spy = mocker.spy(engine.capacity, "fekete_search_detailed")
        code, out = run_cli("fekete", "--set", "segment:-1,1", "--m", "4,6")
        assert code == 0
        assert sorted(call.args[1] for call in spy.call_args_list) == [3, 4, 5, 6]
        rows = json.loads(out)["rows"]
        assert {row["m"] for row in rows} == {4, 6}
        assert all(row["tau_low"] <= row["tau_high"] for row in rows)

    def test_dirac_example_json(self):
        code, out = run_cli("laplace", "--experiment", "dirac-example", "--m-max", "12")
        assert code == 0
        payload = json.loads(out)
        assert payload["status"] == "success"
        assert payload["experiment"] == "dirac-example"
        for row in payload["rows"]:
            if row["m"] % 2 == 0:
                assert row["lambda"] == pytest.approx(1.0, abs=1e-10)

    def test_interp_rows_hold(self):
        code, out = run_cli("interp", "--g", "geometric:2", "--m", "8", "--set", "disk:1", "--trials", "5")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 5
        assert all(row["holds"] and row["agrees"] for row in rows)

    def test_bounds(self):
        code, out = run_cli("bounds", "--m", "3,6", "--trials", "2")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert all(row["witness_in_bracket"] and row["extremal_ok"] for row in rows)

    def test_zeros(self):
        code, out = run_cli("zeros", "--set", "circle:1", "--m", "5")
        assert code == 0
        assert json.loads(out)["rows"][0]["count"] == 4

    def test_capacity(self):
        code, out = run_cli("capacity", "--set", "circle:1", "--m-max", "10")
        assert code == 0
        assert [row["m"] for row in json.loads(out)["rows"]] == list(range(2, 11))

    def test_chi_r(self):
        code, out = run_cli("laplace", "--experiment", "chi-r", "--r-list", "0.5", "--m", "32")
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["r"] == 0.5 and row["converged"]


class TestErrors:
    def test_bad_set(self):
        code, out = run_cli("fekete", "--set", "blob:1")
        assert code == 2
        payload = json.loads(out)
        assert payload == {
            "status": "error",
            "error": "ConfigError",
            "reason": "bad_set",
            "message": payload["message"],
        }

    def test_unknown_function(self):
        code, out = run_cli("capacity", "--F", "sinc")
        assert code == 2
        assert json.loads(out)["reason"] == "unknown_function"

    def test_numerical_error(self):
        code, out = run_cli("interp", "--g", "geometric:2", "--r", "3", "--m", "4", "--trials", "1")
        assert code == 3
        assert json.loads(out)["error"] == "DomainError"

    def test_engine_failure(self, mocker):
        mocker.patch("cli.main.nm_experiment", side_effect=NonConvergent("refinement exhausted"))
        code, out = run_cli("zeros")
        assert code == 3
        assert json.loads(out)["reason"] == "non_convergent"

    def test_unexpected_failure(self, mocker):
        mocker.patch("cli.main.dirac_example", side_effect=RuntimeError("boom"))
        code, out = run_cli("laplace")
        assert code == 1
        assert json.loads(out)["reason"] == "internal_error"

    def test_invalid_choice_exits(self):
        with pytest.raises(SystemExit) as info:
            main(["laplace", "--experiment", "nope"], stdout=io.StringIO())
        assert info.value.code == 2


class TestConfigFile:
    def test_overrides_flags(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"m_range": "6", "format": "csv"}))
        code, out = run_cli("fekete", "--set", "circle:1", "--m", "4", "--config", str(path))
        assert code == 0
        assert len(out.strip().split("\n")) == 7

    def test_bad_config_value(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"tol": -1}))
        code, out = run_cli("fekete", "--config", str(path))
        assert code == 2
        assert json.loads(out)["reason"] == "bad_config"

    def test_missing_config(self, tmp_path):
        code, out = run_cli("fekete", "--config", str(tmp_path / "none.json"))
        assert code == 2
        assert json.loads(out)["reason"] == "file_not_found"

    def test_output_file(self, tmp_path):
        target = tmp_path / "out" / "table.json"
        code, out = run_cli("laplace", "--m-max", "4", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["status"] == "success"

    def test_show_config(self, capsys):
        code, _ = run_cli("laplace", "--m-max", "2", "--show-config")
        assert code == 0
        assert "[NUMERICS]" in capsys.readouterr().err

    def test_custom_function(self, tmp_path, registry):
        path = tmp_path / "ones.json"
        path.write_text(json.dumps([[1, 0]] * 400))
        code, out = run_cli("capacity", "--set", "circle:1", "--m-max", "5", "--custom-F", str(path))
        assert code == 0
        assert json.loads(out)["rows"][0]["gamma_e2M"] == pytest.approx(math.exp(2.0))


def test_repeated_runs_are_byte_identical():
    argv = ("interp", "--m", "4,8", "--trials", "3", "--seed", "7")
    assert run_cli(*argv) == run_cli(*argv)

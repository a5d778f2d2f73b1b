"""CLI subcommands, exercised in process through main(argv)."""

import csv
import json
import math

import pytest

from illposed import REPORT_HEADER
from illposed.cli import main

CONFIG = {
    "problem": {"kind": "fredholm", "n": 16, "truth": "hat"},
    "deltas": [1e-2],
    "seeds": [0, 1],
    "methods": [
        {"method": "tikhonov", "rule": "morozov:1.5"},
        {"method": "landweber", "stop": "discrepancy:1.5"},
    ],
}


def _parse_csv(text):
    return list(csv.reader(text.strip().splitlines()))


class TestSolve:
    @pytest.mark.parametrize(
        "argv",
        [
            ["--method", "tikhonov", "--rule", "morozov:1.5"],
            ["--method", "quasi", "--radius", "0.4"],
            ["--method", "landweber", "--stop", "discrepancy:1.5"],
            ["--method", "dsm", "--stop", "root:0.5"],
        ],
        ids=lambda a: a[1],
    )
    def test_each_method_prints_one_row(self, capsys, argv):
        rc = main(["solve", "--n", "16", "--delta", "1e-2", *argv])
        assert rc == 0
        rows = _parse_csv(capsys.readouterr().out)
        assert rows[0] == list(REPORT_HEADER)
        assert len(rows) == 2
        assert rows[1][0] == argv[1]
        assert rows[1][-1] == "ok"

    def test_landweber_trace_file(self, capsys, tmp_path):
        path = tmp_path / "trace.csv"
        rc = main(
            ["solve", "--method", "landweber", "--n", "16", "--delta", "1e-2",
             "--stop", "fixed:4", "--trace", str(path)]
        )
        assert rc == 0
        capsys.readouterr()
        rows = _parse_csv(path.read_text(encoding="utf-8"))
        assert rows[0] == ["n", "residual", "error"]
        assert len(rows) == 6
        assert [r[0] for r in rows[1:]] == ["0", "1", "2", "3", "4"]

    def test_dsm_trace_file(self, capsys, tmp_path):
        path = tmp_path / "trace.csv"
        rc = main(
            ["solve", "--method", "dsm", "--n", "16", "--delta", "1e-2",
             "--stop", "time:2", "--trace", str(path)]
        )
        assert rc == 0
        capsys.readouterr()
        rows = _parse_csv(path.read_text(encoding="utf-8"))
        assert rows[0] == ["t", "epsilon", "residual", "error"]
        assert float(rows[-1][0]) == pytest.approx(2.0)

    def test_trace_rejected_for_direct_methods(self, capsys, tmp_path):
        rc = main(
            ["solve", "--method", "tikhonov", "--trace", str(tmp_path / "t.csv")]
        )
        assert rc == 2
        assert "landweber or dsm" in capsys.readouterr().err

    def test_unknown_method_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["solve", "--method", "newton"])
        assert excinfo.value.code == 2


class TestSweep:
    def test_writes_report_file(self, capsys, tmp_path):
        config_path = tmp_path / "sweep.json"
        config_path.write_text(json.dumps(CONFIG), encoding="utf-8")
        out_path = tmp_path / "report.csv"
        rc = main(["sweep", "--config", str(config_path), "--out", str(out_path)])
        assert rc == 0
        assert "4 rows" in capsys.readouterr().out
        rows = _parse_csv(out_path.read_text(encoding="utf-8"))
        assert len(rows) == 5

    def test_stdout_when_no_out(self, capsys, tmp_path):
        config_path = tmp_path / "sweep.json"
        config_path.write_text(json.dumps(CONFIG), encoding="utf-8")
        rc = main(["sweep", "--config", str(config_path)])
        assert rc == 0
        rows = _parse_csv(capsys.readouterr().out)
        assert rows[0] == list(REPORT_HEADER)
        assert len(rows) == 5

    def test_seed_override_restricts_rows(self, capsys, tmp_path):
        config_path = tmp_path / "sweep.json"
        config_path.write_text(json.dumps(CONFIG), encoding="utf-8")
        rc = main(["sweep", "--config", str(config_path), "--seed", "1"])
        assert rc == 0
        rows = _parse_csv(capsys.readouterr().out)
        assert len(rows) == 3
        assert all(r[3] == "1" for r in rows[1:])

    def test_bad_config_reports_error(self, capsys, tmp_path):
        config_path = tmp_path / "sweep.json"
        config_path.write_text("{\"deltas\": []}", encoding="utf-8")
        rc = main(["sweep", "--config", str(config_path)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestDiff:
    def test_errors_stay_under_bound(self, capsys):
        rc = main(["diff"])
        assert rc == 0
        rows = _parse_csv(capsys.readouterr().out)
        assert rows[0][0] == "delta"
        assert len(rows) == 5
        for row in rows[1:]:
            delta, _, max_error, bound, _ = map(float, row)
            assert max_error <= bound
            assert bound == pytest.approx(math.sqrt(2.0 * delta), rel=1e-12)

    def test_bad_delta_list_rejected(self, capsys):
        rc = main(["diff", "--deltas", "abc"])
        assert rc == 2
        assert "cannot parse" in capsys.readouterr().err


class TestLaplaceDemo:
    def test_stdout_table(self, capsys):
        rc = main(["laplace-demo", "--nmax", "10"])
        assert rc == 0
        rows = _parse_csv(capsys.readouterr().out)
        assert len(rows) == 11
        assert float(rows[10][3]) == pytest.approx(math.sinh(10.0) / 1000.0, rel=1e-10)

    def test_csv_file_output(self, capsys, tmp_path):
        path = tmp_path / "table.csv"
        rc = main(["laplace-demo", "--nmax", "4", "--out", str(path)])
        assert rc == 0
        rows = _parse_csv(path.read_text(encoding="utf-8"))
        assert rows[0][0] == "n"
        assert len(rows) == 5


class TestSelftest:
    def test_all_checks_pass(self, capsys):
        rc = main(["selftest"])
        out = capsys.readouterr().out
        assert rc == 0
        assert out.count("PASS") == 10
        assert "FAIL" not in out
        assert "10/10" in out

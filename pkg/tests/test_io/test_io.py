"""Tests for report rendering and the sqlite store."""
import json

import numpy as np
import pytest

from geodist.exceptions import OutputError, ValidationError
from geodist.io import Database, emit, load_yaml, logger, progress_bar
from geodist.io.io import format_report_csv, format_table_csv
from geodist.io.logging import log_filename, logging_config
from geodist.report import EstimateReport, TableReport, TermRecord


def _report(**kwargs):
    return EstimateReport(
        quantity="finite-density",
        value=0.125 + 1e-9j,
        terms=[TermRecord(1, 1, 0.1 + 0j), TermRecord(1, 2, 0.025 + 1e-9j)],
        config={"M": 2, "N": 2},
        runtime_ms=12.5,
        **kwargs,
    )


def test_report_csv_layout():
    text = format_report_csv(_report(), version="1.0")
    lines = text.splitlines()
    assert lines[0] == "# geodist 1.0"
    assert lines[1] == '# config: {"M": 2, "N": 2}'
    assert lines[2] == "quantity,value_re,value_im,stderr,k1,k2,term_abs,runtime_ms,seed"
    assert lines[3] == "finite-density,0.125,1.0000000000000001e-09,,,,,,"
    assert lines[4].startswith("term,0.10000000000000001,0,,1,1,")
    assert len(lines) == 6


def test_report_csv_with_timing_and_diagnostic():
    text = format_report_csv(_report(diagnostic="imag_residue"), version="1.0", timing=True)
    assert "# diagnostic: imag_residue" in text
    assert ",12.5," in text.splitlines()[4]


def test_table_csv():
    table = TableReport(quantity="verify", columns=("identity", "lhs", "rel_diff"))
    table.append({"identity": "sab", "lhs": 2 - 1j, "rel_diff": 0.0, "ignored": 1})
    lines = format_table_csv(table, version="1.0").splitlines()
    assert lines[-2:] == ["identity,lhs,rel_diff", "sab,2-1j,0"]


def test_json_report_round_trip(capsys):
    emit(_report(seed=4), fmt="json", version="1.0")
    d = json.loads(capsys.readouterr().out)
    assert d["runtime_ms"] is None
    assert d["version"] == "1.0"
    report = EstimateReport.from_dict(d)
    assert report.value == _report().value
    assert [(t.k1, t.k2) for t in report.terms] == [(1, 1), (1, 2)]
    assert report.seed == 4


def test_complex_cells_of_json_tables(capsys):
    table = TableReport(quantity="verify", columns=("lhs",))
    table.append({"lhs": 1 + 2j})
    emit(table, fmt="json")
    assert json.loads(capsys.readouterr().out)["rows"] == [{"lhs": {"re": 1.0, "im": 2.0}}]


def test_unknown_format():
    with pytest.raises(ValidationError):
        emit(_report(), fmt="xml")


def test_unwritable_path(tmp_path):
    with pytest.raises(OutputError) as excinfo:
        emit(_report(), path=tmp_path / "no" / "such" / "file.csv", fmt="csv")
    assert excinfo.value.exit_code == 4


@pytest.mark.parametrize(
    ("value", "expected"),
    [(1.0, True), (1.0 + 5e-5j, True), (1.0 + 2e-4j, False), (-1e-3 + 1e-3j, False)],
)
def test_realness(value, expected):
    report = EstimateReport(quantity="tail", value=value)
    assert report.check_realness() is expected
    assert (report.diagnostic == "imag_residue") is not expected


def test_database(tmp_path):
    fname = str(tmp_path / "db" / "sweep.db")
    row = {"point": 0, "s": np.float64(0.5), "value": 1 - 1j, "diagnostic": None}
    with Database(fname) as db:
        db.create_table("sweep", row)
        db.insert_record("sweep", row)
        db.insert_record("sweep", {**row, "point": 1, "s": 1.5})
    with Database(fname) as db:
        assert db.fetch("sweep", "point, s, value") == [(0, 0.5, "1-1j"), (1, 1.5, "1-1j")]
        assert db.fetch("sweep", "point", "s > ?", (1.0,)) == [(1,)]


def test_dropped_table_can_change_its_columns(tmp_path):
    fname = str(tmp_path / "sweep.db")
    with Database(fname) as db:
        db.create_table("sweep", {"point": 0, "s": 0.5})
        db.insert_record("sweep", {"point": 0, "s": 0.5})
        db.drop_table("sweep")
        db.create_table("sweep", {"point": 0, "gamma": 0.25})
        db.insert_record("sweep", {"point": 3, "gamma": 0.25})
        assert db.fetch("sweep") == [(3, 0.25)]


def test_load_yaml(tmp_path):
    fname = tmp_path / "grid.yaml"
    fname.write_text("quantity: tw\ngrid:\n  oracle:\n    s: [0.0, 1.0]\n")
    assert load_yaml(fname) == {"quantity": "tw", "grid": {"oracle": {"s": [0.0, 1.0]}}}


def test_progress_bar(capsys):
    progress_bar(2, 2, mark_count=10, left_msg="tw", right_msg="2/2")
    err = capsys.readouterr().err
    assert "100.0%" in err
    assert err.endswith("\n")


def test_log_file_location(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path))
    assert log_filename() == str(tmp_path / "geodist" / "geodist.log")
    assert (tmp_path / "geodist").is_dir()


def test_package_logger():
    config = logging_config("geodist-test.log")
    assert config["handlers"]["file"]["filename"] == "geodist-test.log"
    assert logger.name == "geodist"

"""Command-line runs through `geodist.run`, checking exit codes and written reports."""
import csv
import json
import math

import pytest
import yaml

from geodist import run
from geodist.base import Manager
from geodist.exceptions import DiagnosticError
from geodist.io import Database
from geodist.report import EstimateReport


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def _csv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


def test_no_arguments_is_a_usage_error(capsys):
    """An empty command line prints the help and fails."""
    assert run([]) == 2
    assert "usage" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["--not-a-flag"],
        ["tw", "--s", "zero"],
        ["simulate", "--dist", "normal"],
        ["exact"],
    ],
)
def test_bad_command_lines(argv):
    """argparse rejections are reported with exit code 2."""
    assert run(argv) == 2


def test_show_log_name(capsys):
    assert run(["--show-log-name"]) == 0
    assert "LOG FILENAME" in capsys.readouterr().out


def test_tw_report(capsys):
    """F_GUE(0) lies between 0.96 and 0.98."""
    assert run(["tw", "--s", "0"]) == 0
    report = _json(capsys)
    assert report["quantity"] == "fgue"
    assert 0.96 < report["value_re"] < 0.98
    assert report["runtime_ms"] is None
    assert "version" in report


def test_timing_is_reported_on_request(capsys):
    assert run(["tw", "--s", "1", "--timing"]) == 0
    assert _json(capsys)["runtime_ms"] >= 0.0


def test_forced_step_density(capsys):
    """On a single row the density at s1 = s2 = 1 equals exp(-2)."""
    argv = ["exact", "finite-density", "--M", "2", "--N", "1", "--s1", "1", "--s2", "1"]
    assert run(argv + ["--format", "csv"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert rows[0]["quantity"] == "finite-density"
    assert float(rows[0]["value_re"]) == pytest.approx(math.exp(-2.0), rel=1e-6)
    assert [(row["k1"], row["k2"]) for row in rows[1:]] == [("1", "1")]


def test_probability_of_event_a(capsys):
    """Two geometric weights of a single row must equal x and y."""
    q, x, y = 0.5, 1, 2
    argv = ["exact", "probability-a", "--M", "2", "--N", "1", "--q", str(q)]
    assert run(argv + ["--x", str(x), "--y", str(y)]) == 0
    assert _json(capsys)["value_re"] == pytest.approx((1 - q) ** 2 * q ** (x + y), rel=1e-8)


def test_non_integer_event_a_level():
    argv = ["exact", "probability-a", "--M", "2", "--N", "1", "--x", "0.5"]
    assert run(argv) == 2


def test_inadmissible_point():
    """r must leave room for the step inside the grid."""
    assert run(["exact", "geodesic-prob", "--m", "2", "--M", "2", "--N", "1"]) == 2


def test_simulated_step_of_a_square(capsys):
    """By symmetry the first step of a 2x2 geodesic goes right half of the time."""
    argv = ["simulate", "--event", "tail", "--t1", "0", "--t2", "0", "--samples", "20000"]
    assert run(argv + ["--seed", "3"]) == 0
    report = _json(capsys)
    assert report["quantity"] == "mc-tail"
    assert report["seed"] == 3
    assert report["value_re"] == pytest.approx(0.5, abs=4 * report["stderr"])


def test_simulated_visits(capsys):
    """Every exponential geodesic crosses each antidiagonal exactly once."""
    argv = ["simulate", "--event", "visits", "--M", "3", "--N", "2", "--samples", "500"]
    assert run(argv + ["--format", "csv"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 6
    by_level = {}
    for row in rows:
        level = int(row["i"]) + int(row["j"])
        by_level[level] = by_level.get(level, 0.0) + float(row["value"])
    for total in by_level.values():
        assert total == pytest.approx(1.0, abs=1e-12)


def test_verify_writes_one_row_per_trial(capsys):
    assert run(["verify", "--which", "sab", "--trials", "5", "--size", "2", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# geodist ")
    rows = _csv_rows(out)
    assert len(rows) == 5
    assert all(float(row["rel_diff"]) < 1e-9 for row in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--which", "cpq", "--trials", "8", "--size", "3", "--seed", "11"],
        ["simulate", "--M", "3", "--N", "3", "--samples", "3000", "--seed", "5"],
    ],
)
def test_output_does_not_depend_on_threads(capsys, argv):
    """Seeds are tied to trials and chunks, never to workers."""
    outputs = []
    for threads in ("1", "4"):
        assert run(argv + ["--threads", threads, "--format", "csv"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_threads_from_the_environment(monkeypatch, capsys):
    monkeypatch.setenv("GEODIST_THREADS", "3")
    assert run(["tw", "--s", "0"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("GEODIST_THREADS", "many")
    assert run(["tw", "--s", "0"]) == 2


def test_output_file(tmp_path):
    out = tmp_path / "fgue.json"
    assert run(["tw", "--s", "-1", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["quantity"] == "fgue"


def test_unwritable_output(tmp_path):
    out = tmp_path / "missing" / "fgue.json"
    assert run(["tw", "-o", str(out)]) == 4


def test_configuration_file(tmp_path, capsys):
    """Options come from the file unless a flag is given."""
    fname = tmp_path / "run.yaml"
    fname.write_text(yaml.safe_dump({"s": 2.0, "quadrature": {"fredholm": {"order": 40}}}))

    assert run(["-C", str(fname), "tw"]) == 0
    report = _json(capsys)
    assert report["config"] == {"s": 2.0, "order": 40, "scale": 4.0}

    assert run(["-C", str(fname), "tw", "--s", "1"]) == 0
    assert _json(capsys)["config"]["s"] == 1.0


@pytest.mark.parametrize(
    "content",
    [{"not_an_option": 1}, {"quadrature": {"limit": {"panels": 3}}}, [1, 2, 3]],
)
def test_bad_configuration_file(tmp_path, content):
    fname = tmp_path / "bad.yaml"
    fname.write_text(yaml.safe_dump(content))
    assert run(["-C", str(fname), "tw"]) == 2


def test_missing_configuration_file(tmp_path):
    assert run(["-C", str(tmp_path / "nowhere.yaml"), "tw"]) == 2


def test_failing_diagnostic_sets_exit_code_3(capsys):
    """A written report with a failed check turns into a numerical failure."""
    core = Manager(["tw"])
    report = EstimateReport(quantity="fgue", value=1 + 1j, diagnostic="imag_residue")
    with pytest.raises(DiagnosticError) as excinfo:
        core.write(report)
    assert excinfo.value.exit_code == 3
    assert _json(capsys)["diagnostic"] == "imag_residue"


def test_corollary_bins(capsys):
    argv = ["corollary-mc", "--N", "12", "--samples", "400", "--bins", "-1", "0", "1"]
    assert run(argv + ["--format", "csv"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert [(float(r["x_lo"]), float(r["x_hi"])) for r in rows] == [(-1.0, 0.0), (0.0, 1.0)]
    assert all(0.0 <= float(r["probability"]) <= 1.0 for r in rows)


def test_corollary_needs_two_edges():
    assert run(["corollary-mc", "--N", "4", "--samples", "10", "--bins", "0"]) == 2


def test_sweep_with_database(tmp_path, capsys):
    grid = tmp_path / "grid.yaml"
    grid.write_text(
        yaml.safe_dump(
            {
                "quantity": "tw",
                "grid": {"oracle": {"s": [-2.0, 0.0, 2.0, 6.0]}},
                "conditions": ["s > 5"],
            }
        )
    )
    database = tmp_path / "sweep.db"

    assert run(["sweep", str(grid), "--database", str(database)]) == 0
    report = _json(capsys)
    values = [row["value_re"] for row in report["rows"]]
    assert [row["s"] for row in report["rows"]] == [-2.0, 0.0, 2.0]
    assert values == sorted(values)

    with Database(str(database)) as db:
        stored = db.fetch("sweep", "s, value_re")
    assert [s for s, _ in stored] == [-2.0, 0.0, 2.0]
    assert [v for _, v in stored] == pytest.approx(values, rel=1e-15)


def test_sweep_replaces_a_stored_sweep(tmp_path, capsys):
    """Rerunning into the same database keeps only the rows of the last run."""
    database = tmp_path / "sweep.db"
    for values in ([-2.0, 0.0, 2.0], [1.0]):
        grid = tmp_path / "grid.yaml"
        grid.write_text(yaml.safe_dump({"quantity": "tw", "grid": {"oracle": {"s": values}}}))
        assert run(["sweep", str(grid), "--database", str(database)]) == 0
        capsys.readouterr()

    with Database(str(database)) as db:
        assert db.fetch("sweep", "point, s") == [(0, 1.0)]


@pytest.mark.parametrize(
    "content",
    [
        {"quantity": "corollary-mc", "grid": {"a": {"N": [4]}}},
        {"quantity": "tw", "grid": {"oracle": {"gamma": [0.5]}}},
        {"quantity": "tw", "grid": {"oracle": {"s": [0.0]}}, "conditions": ["s >= -1"]},
        {"quantity": "tw", "grid": {"oracle": {"s": [0.0]}}, "conditions": ["s is large"]},
    ],
)
def test_bad_sweep_grids(tmp_path, content):
    grid = tmp_path / "grid.yaml"
    grid.write_text(yaml.safe_dump(content))
    assert run(["sweep", str(grid)]) == 2


def test_sweep_of_a_missing_file(tmp_path):
    assert run(["sweep", str(tmp_path / "grid.yaml")]) == 2

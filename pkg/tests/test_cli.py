import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from primeloc import SCHEMA_VERSION, cli

SIG = "1,0,0,0,1,0,0,-1,0,-1"


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_report(capsys):
    code, out, _ = _run(["count", "--d", "2", "--n", "3", "--B", "100", "--form", SIG], capsys)
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, cli.load_schema())
    assert rep["schema_version"] == SCHEMA_VERSION and rep["command"] == "count"
    assert rep["config"]["seed"] == 0 and rep["config"]["B"] == 100.0
    assert rep["results"]["solutions"] == 12


def test_sigma_stats_rational_serialisation(capsys):
    code, out, _ = _run(["sigma-stats", "--p", "3", "--N", "4"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["mean"] == {"num": 39, "den": 40} and res["equal"] is True


def test_lattice_infinity_serialisation(capsys):
    code, out, _ = _run(["lattice", "--basis", "[[1, 0], [0, 5]]"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["successive_minima"] == [1.0, 5.0] and res["det_sq"] == 25
    code, out, _ = _run(["lattice", "--basis", "[[6, 10]]"], capsys)
    assert json.loads(out)["results"]["frak_c"]["sup"] == {"extended": "+inf"}


def test_to_jsonable():
    from fractions import Fraction

    from primeloc.arith import INF

    assert cli._to_jsonable({"a": INF, "b": Fraction(1, 3), "c": float("nan"), "d": (1, 2)}) == {
        "a": {"extended": "+inf"},
        "b": {"num": 1, "den": 3},
        "c": None,
        "d": [1, 2],
    }


def test_variance_csv(capsys, tmp_path):
    path = tmp_path / "v.csv"
    code, _, _ = _run(
        ["variance", "--d", "2", "--n", "3", "--A", "4", "--B", "60", "--samples", "5", "--format", "csv", "--out", str(path)],
        capsys,
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert tuple(rows[0]) == cli.VARIANCE_CSV_COLUMNS and len(rows) == 6


def test_key_value_csv(capsys):
    code, out, _ = _run(["e-prime", "--d", "2", "--n", "3", "--B", "40", "--format", "csv"], capsys)
    rows = dict(list(csv.reader(io.StringIO(out)))[1:])
    assert code == 0 and rows["command"] == "e-prime" and float(rows["results.E_prime"]) > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--d", "2", "--n", "3", "--B", "100", "--form", "1,x"],
        ["count", "--d", "2", "--n", "3", "--B", "100", "--form", "1,2"],
        ["count", "--d", "3", "--n", "2", "--B", "100", "--form", SIG],
        ["count", "--d", "2", "--n", "3", "--B", "100", "--form", "2,0,0,0,2,0,0,-2,0,-2"],
        ["tau", "--d", "2", "--n", "2", "--form", "1,0,0,1,0,-1"],
        ["lattice"],
        ["sigma-stats", "--p", "3"],
        ["density", "--d", "2"],
        ["nonsense"],
    ],
)
def test_invalid_input_exits_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code, _, _ = _run(argv, capsys)
        raise SystemExit(code)
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--d", "2", "--n", "3", "--B", "1e6", "--form", SIG, "--sieve-limit", "100"],
        ["e-prime", "--d", "2", "--n", "3", "--B", "3000", "--enum-budget", "50"],
        ["density", "--d", "2", "--n", "3", "--A", "0.5", "--samples", "5"],
        ["lattice", "--c", "1,1,1,1,1", "--enum-budget", "1"],
    ],
)
def test_budget_exits_2(argv, capsys):
    code, out, err = _run(argv, capsys)
    assert code == 2 and out == "" and "budget" in err


def test_payload_ignores_wall_time():
    _, a, _ = cli.run(["lattice", "--c", "3,5,7"])
    _, b, _ = cli.run(["lattice", "--c", "3,5,7"])
    assert cli.payload(a) == cli.payload(b)
    assert "wall_time" not in json.loads(cli.payload(a))


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "primeloc.cli", "local-test", "--d", "2", "--n", "3", "--form", SIG, "--pmax", "7"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["results"]["profile"]["verdict"] == "PLocSoluble"

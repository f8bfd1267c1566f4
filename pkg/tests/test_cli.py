import csv
import io
import json
import subprocess
import sys

import pytest

from curvident import cli
from curvident import invariant_theory as it


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_below_critical_dimension(capsys):
    code, out, _ = run(["verify", "--pbar", "1", "--k", "1", "--dim", "2", "--trials", "3"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "curvident/1"
    assert doc["config"]["params"]["signature"] == [2, 0]
    assert doc["report"]["verdict"] == "identity_holds" and doc["prediction"] == "vanishes"


def test_verify_at_critical_dimension_lorentzian(capsys):
    code, out, _ = run(["verify", "--pbar", "0", "--k", "1", "--dim", "2", "--signature", "1,1",
                        "--trials", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["report"]["verdict"] == "nonvanishing"
    assert doc["report"]["constants"]["scalar_curvature"] == "2"


def test_verify_default_dim_is_largest_vanishing(capsys):
    code, out, _ = run(["verify", "--pbar", "0", "--k", "2", "--trials", "2"], capsys)
    assert code == 0 and json.loads(out)["config"]["params"]["dim"] == 3


@pytest.mark.parametrize("argv", [
    ["verify", "--pbar", "0", "--k", "0", "--dim", "2"],
    ["verify", "--pbar", "1", "--k", "0", "--dim", "2"],
    ["verify", "--pbar", "0", "--k", "1", "--dim", "7"],
    ["verify", "--pbar", "0", "--k", "1", "--dim", "3", "--signature", "1,1"],
    ["dim-table", "--m-max", "10"],
    ["dim-table", "--m-max", "5"],
    ["normal-dims", "--n-max", "9"],
])
def test_invalid_arguments_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--pbar", "1", "--k", "1", "--signature", "x"])
    assert exc.value.code == 2


def test_dim_table_csv(capsys):
    code, out, _ = run(["dim-table", "--m-max", "6", "--n-max", "3"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    table = {(int(r["m"]), int(r["n"])): int(r["dimension"]) for r in rows}
    assert table[(6, 3)] == 15 and table[(4, 2)] == 3 and len(rows) == 9


def test_reduce_check(capsys):
    code, out, _ = run(["reduce-check", "--m-max", "6", "--n-max", "6"], capsys)
    doc = json.loads(out)
    assert code == 0 and all(r["ok"] for r in doc["reports"])


def test_normal_dims(capsys):
    code, out, _ = run(["normal-dims", "--n-max", "4", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["consistent"]
    assert [r["dimension"] for r in doc["table"]] == [0, 1, 6, 20]


def test_kernel_matching_formula(capsys):
    code, out, _ = run(["kernel", "--pbar", "1", "--k", "1"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["dimensions"] == {"2": 1, "3": 0} and doc["membership"]["holds"]


def test_kernel_rank_failure_exit_3(monkeypatch, capsys):
    def boom(*a, **kw):
        raise it.RankNotStabilized("forced")
    monkeypatch.setattr(it, "kernel_dimension", boom)
    code, _, err = run(["kernel", "--pbar", "0", "--k", "1"], capsys)
    assert code == 3 and "forced" in err


def test_output_is_deterministic(tmp_path):
    target = tmp_path / "r.json"
    argv = ["verify", "--pbar", "1", "--k", "1", "--dim", "3", "--trials", "4", "--seed", "7",
            "--out", str(target)]
    assert cli.main(argv) == 0
    first = target.read_bytes()
    assert cli.main(argv) == 0
    assert target.read_bytes() == first
    assert json.loads(first)["config"]["out"] == str(target)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "curvident", "dim-table", "--m-max", "4",
                           "--n-max", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "m,n,dimension"

import csv
import io
import json
import subprocess
import sys

import pytest

from newformlab import cli
from newformlab.cli import EXIT_GUARD, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_dim_table_unramified(capsys):
    code, out, _ = run(capsys, "dim-table", "--family", "unram-ps", "--q", "3", "--m", "0..3", "--format", "json")
    assert code == EXIT_OK
    js = json.loads(out)
    assert js["all_match"] and js["conductor"] == 0
    assert [r["brute"] for r in js["rows"] if r["tower"] == "K"] == [1, 2, 4, 6]
    assert all(r["brute"] == r["formula"] for r in js["rows"])


def test_dim_table_u11_exceptional(capsys):
    code, out, _ = run(capsys, "dim-table", "--family", "u11-exceptional", "--q", "3", "--m", "0..2",
                       "--tower", "K", "--format", "csv")
    assert code == EXIT_OK
    assert [int(r["brute"]) for r in csv_rows(out)] == [0, 2, 3]


def test_dim_table_sc4_primed_tower(capsys):
    code, out, _ = run(capsys, "dim-table", "--family", "sc4", "--q", "3", "--m", "1..3", "--tower", "Kp",
                       "--format", "csv")
    assert code == EXIT_OK
    assert [int(r["brute"]) for r in csv_rows(out)] == [0, 1, 1]


def test_dim_table_markdown(capsys):
    code, out, _ = run(capsys, "dim-table", "--family", "steinberg", "--q", "3", "--m", "0..2", "--tower", "K")
    assert code == EXIT_OK
    assert "| pi | 2 | K | 3 | 3 | True |" in out


def test_conductor_ram_ps(capsys):
    code, out, _ = run(capsys, "conductor", "--family", "ram-ps", "--q", "5", "--cchi", "1", "--format", "json")
    assert code == EXIT_OK
    js = json.loads(out)
    assert js["brute_conductor"] == js["formula_conductor"] == 1
    assert js["achieving_is_chi_pm"] and len(js["rows"]) == 2
    assert js["newform_dim"] == 1


def test_packet_u11(capsys):
    code, out, _ = run(capsys, "packet", "--family", "u11-unram-ps", "--q", "3", "--m", "0..2", "--format", "csv")
    assert code == EXIT_OK
    rows = {(r["m"], r["tower"]): (int(r["1"]), int(r["2"])) for r in csv_rows(out)}
    assert rows[("0", "K")] == (1, 0) and rows[("0", "Kp")] == (0, 1)
    assert rows[("2", "K")] == (2, 1) and rows[("2", "Kp")] == (1, 2)


def test_packet_genericity_json(capsys):
    code, out, _ = run(capsys, "packet", "--family", "unram-packet", "--q", "3", "--m", "0..1", "--format", "json")
    assert code == EXIT_OK
    js = json.loads(out)
    assert js["match"]
    assert js["generic_for"] == {"1": ["1", "eps"], "2": ["pi", "eps*pi"]}


def test_packet_rejects_single(capsys):
    code, _, err = run(capsys, "packet", "--family", "unram-ps", "--q", "3")
    assert code == EXIT_USAGE and "not a packet" in err


def test_whittaker_trivial(capsys):
    code, out, _ = run(capsys, "whittaker", "--family", "unram-ps", "--q", "3", "--chi", "trivial", "--format", "csv")
    assert code == EXIT_OK
    assert csv_rows(out)[0]["value"] == "2/3"


def test_ring_info_and_chars(capsys):
    code, out, _ = run(capsys, "ring-info", "--q", "5", "--N", "3", "--format", "json")
    js = json.loads(out)
    assert code == EXIT_OK and [r["order"] for r in js["rows"]] == [4, 20, 100]
    code, out, _ = run(capsys, "chars", "--q", "3", "--m", "2", "--format", "csv")
    assert code == EXIT_OK and len(csv_rows(out)) == 6


def test_verify_q3(capsys):
    code, out, _ = run(capsys, "verify", "--q", "3", "--max-m", "2", "--format", "json")
    js = json.loads(out)
    assert code == EXIT_OK and js["failed"] == 0
    assert set(js["suites"]) == set(cli.SUITES)
    assert all(js["suites"][s] for s in cli.SUITES)


def test_verify_q5_formulas_and_ps(capsys):
    for suite in ("principal-series", "supercuspidal", "formulas"):
        code, out, _ = run(capsys, "verify", "--q", "5", "--max-m", "2", "--suite", suite, "--format", "json")
        assert code == EXIT_OK and json.loads(out)["failed"] == 0


# -- exit codes --------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["dim-table", "--q", "6"],
    ["dim-table", "--m", "3..1"],
    ["dim-table", "--family", "nope"],
    ["verify", "--suite", "nope"],
    ["whittaker", "--scaling", "zz"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_resource_guard(capsys):
    code, _, err = run(capsys, "dim-table", "--family", "unram-ps", "--q", "3", "--m", "0..3", "--N", "2")
    assert code == EXIT_GUARD and "precision" in err


def test_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "dim_formula", lambda d, m, t="K": 99)
    code, out, _ = run(capsys, "dim-table", "--family", "unram-ps", "--q", "3", "--m", "0..1", "--format", "json")
    assert code == EXIT_MISMATCH and not json.loads(out)["all_match"]


# -- configuration and determinism ---------------------------------------------

def test_config_round_trip():
    cfg = RunConfig(p=5, family="sc-ram", l=2, member="1", m_lo=1, m_hi=4, tower="Kp", chi2_trivial=True)
    assert RunConfig.from_canonical(cfg.canonical()) == cfg


def test_config_file_and_precedence(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("# sample\nq = 3\nfamily = steinberg\nm = 0..2\ntower = K\nformat = json\n")
    code, out, _ = run(capsys, "dim-table", "--config", str(path))
    assert code == EXIT_OK
    assert [r["brute"] for r in json.loads(out)["rows"]] == [0, 1, 3]
    code, out, _ = run(capsys, "dim-table", "--config", str(path), "--format", "csv")
    assert out.startswith("member,m,tower")
    path.write_text("colour = blue\n")
    assert run(capsys, "dim-table", "--config", str(path))[0] == EXIT_USAGE


def test_byte_identical_runs(capsys):
    argv = ["packet", "--family", "ram-packet", "--q", "5", "--m", "0..2", "--format", "json"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]


def test_entry_point_subprocess():
    argv = [sys.executable, "-m", "newformlab.cli", "dim-table", "--family", "steinberg", "--q", "3",
            "--m", "0..1", "--format", "csv"]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.splitlines()[0] == "member,m,tower,brute,formula,match"

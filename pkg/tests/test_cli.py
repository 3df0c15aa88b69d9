import json
import types

import pytest

from mirrorcp import GWTable, Q, TPoly
from mirrorcp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gw_csv_golden_plane(capsys):
    code, out, _ = run(capsys, "gw", "--n", "2", "--dmax", "5", "--format", "csv")
    assert code == 0
    assert out == (
        "d,m_2,N\n"
        "1,2,1\n"
        "2,5,1\n"
        "3,8,12\n"
        "4,11,620\n"
        "5,14,87304\n"
    )


def test_gw_csv_golden_line(capsys):
    code, out, _ = run(capsys, "gw", "--n", "1", "--dmax", "3", "--format", "csv")
    assert code == 0
    assert out == "d,N\n1,1\n"


def test_gw_csv_golden_three_space(capsys):
    code, out, _ = run(capsys, "gw", "--n", "3", "--dmax", "2", "--format", "csv")
    assert code == 0
    assert out == (
        "d,m_2,m_3,N\n"
        "1,0,2,1\n"
        "1,2,1,1\n"
        "1,4,0,2\n"
        "2,2,3,1\n"
        "2,4,2,4\n"
        "2,6,1,18\n"
        "2,8,0,92\n"
    )


def test_compute_json_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, err = run(
        capsys,
        "compute", "--n", "1", "--degree", "4", "--checks", "none", "--out", str(path),
    )
    assert code == 0
    assert out == ""
    report = json.loads(path.read_text())
    assert report["config"]["command"] == "compute"
    assert report["config"]["n"] == 1
    assert report["config"]["degree"] == 4
    assert report["gw"] == [{"d": 1, "m": [], "N": "1"}]
    # structural reports run regardless of the requested check groups
    assert {c["name"] for c in report["checks"]} == {
        "transversality",
        "normalization",
        "connection-image",
        "connection-residual",
        "tensor-symmetry",
        "potential-integration",
    }
    assert all(c["status"] == "pass" for c in report["checks"])
    assert report["timings_ms"] is None
    phi = report["phi_coefficients"]
    assert phi["2,1"] == "1/2"
    assert phi["0,3"] == "1/6"
    assert phi["0,5"] == "1/120"
    assert err.startswith("timings_ms ")
    json.loads(err.split(" ", 1)[1])


def test_verify_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code1, _, _ = run(capsys, "verify", "--seed", "7", "--out", str(a))
    code2, _, _ = run(capsys, "verify", "--seed", "7", "--out", str(b))
    assert code1 == 0 and code2 == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    names = [c["name"] for c in report["checks"]]
    assert "wdvv" in names and "stability" in names
    assert names.count("frame-invariance") == 3


def test_config_errors_exit_2(capsys):
    code, _, err = run(capsys, "compute", "--n", "2", "--degree", "2")
    assert code == 2 and "config error" in err
    code, _, err = run(
        capsys, "compute", "--n", "2", "--degree", "6", "--checks", "pf,bogus"
    )
    assert code == 2 and "bogus" in err
    code, _, err = run(capsys, "gw", "--n", "0", "--dmax", "1")
    assert code == 2
    code, _, err = run(capsys, "gw", "--n", "2", "--dmax", "11")
    assert code == 2 and "packed-exponent" in err


def test_window_overflow_exits_3(capsys):
    code, _, err = run(
        capsys,
        "compute", "--n", "2", "--degree", "6", "--checks", "none",
        "--window-top", "3",
    )
    assert code == 3 and "window error" in err
    code, _, err = run(
        capsys,
        "compute", "--n", "2", "--degree", "6", "--checks", "none",
        "--hbar-depth", "2",
    )
    assert code == 3 and "window error" in err


def test_check_failure_exits_1(capsys, monkeypatch):
    phi = TPoly.monomial((2, 1), Q(1, 2), 2, 5)
    fake = types.SimpleNamespace(
        gw=GWTable(1, 1, {(1, ()): Q(1)}),
        checks=[{"name": "wdvv", "status": "fail"}],
        potential=types.SimpleNamespace(phi=phi),
        timings={"total": 0.0},
    )
    monkeypatch.setattr("mirrorcp.cli.run_pipeline", lambda config: fake)
    code, out, _ = run(capsys, "compute", "--n", "1", "--degree", "4")
    assert code == 1
    report = json.loads(out)
    assert report["checks"][0]["status"] == "fail"

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from modlattice import cli
from modlattice.qseries import QSeries, extremal_theta


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_rank32(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "prove", "--rank", "32", "--json", str(path))
    assert code == 0 and "proven" in out
    cert = json.loads(path.read_text())
    assert cert["branches"][0]["closure"]["kind"] == "moment-mismatch"


@pytest.mark.parametrize("rank", ["20", "40", "16"])
def test_prove_unsupported_rank(capsys, tmp_path, rank):
    path = tmp_path / "cert.json"
    code, out, err = run(capsys, "prove", "--rank", rank, "--json", str(path))
    assert code == 2
    assert "usage:" in err and "not supported" in err
    assert not path.exists() and out == ""


def test_qexp_roundtrip(capsys):
    code, out, _ = run(capsys, "qexp", "--series", "extremal:48", "--order", "12")
    assert code == 0
    f = QSeries.from_text(out)
    assert f == extremal_theta(48, 12)
    assert f[8] == 9828000
    assert "8 9828000/1" in out.splitlines()


def test_qexp_unknown_series(capsys):
    code, _, err = run(capsys, "qexp", "--series", "eta:5")
    assert code == 2 and "qseries" in err


def test_zonal(capsys, tmp_path):
    path = tmp_path / "z.json"
    code, out, _ = run(capsys, "zonal", "--dim", "48", "--degree", "10", "--json", str(path))
    lines = out.split()
    assert code == 0 and len(lines) == 6 and lines[-1] == "-9/7364608"
    assert [Fraction(x) for x in json.loads(path.read_text())["coefficients"]][1] == Fraction(-45, 64)
    code, _, _ = run(capsys, "zonal", "--dim", "48", "--degree", "9")
    assert code == 2


def test_forms(capsys):
    code, out, _ = run(capsys, "forms", "--weight", "26", "--order", "20")
    assert code == 0 and out.count("O(q^20)") == 5
    code, _, err = run(capsys, "forms", "--weight", "7")
    assert code == 2 and "cusp_basis" in err


def test_config(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "config", "--rank", "36", "--s", "12", "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["verdict"]["s"] == 12 and "system" in data and "solution" in data
    code, out, _ = run(capsys, "config", "--rank", "24")
    assert code == 0 and "survivors [8]" in out
    code, _, _ = run(capsys, "config", "--rank", "24", "--order", "4")
    assert code == 2


def test_eigen_reports_precision(capsys, tmp_path):
    path = tmp_path / "e.json"
    code, out, _ = run(capsys, "eigen", "--order", "20", "--imax", "3", "--json", str(path))
    assert code == 0 and "precision used" in out
    data = json.loads(path.read_text())
    assert data["precision"]["pseudo"] == 49 and data["ok"]


def test_oracle_small_lattices(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "--lattice", "d4")
    assert code == 0 and "PASS modularity" in out
    code, out, _ = run(capsys, "oracle", "--lattice", "z4")
    assert code == 1 and "FAIL modularity" in out
    gram = tmp_path / "bad.gram"
    gram.write_text("2\n1 2\n2 1\n")
    code, _, err = run(capsys, "oracle", "--lattice", str(gram))
    assert code == 2 and "positive definite" in err
    code, _, err = run(capsys, "oracle", "--lattice", str(tmp_path / "missing.gram"))
    assert code == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["zonal", "--dim", "4", "--degree", "2", "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "modlattice", "zonal", "--dim", "24", "--degree", "4"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.split() == ["1/1", "-3/14", "3/728"]

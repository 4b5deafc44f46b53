import subprocess
import sys

import pytest

from latwalk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "--walk", "builtin:w3")
    assert code == 0
    assert "variance 0.66666666666666663" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("-1=0.5\n1=0.5\n")
    code, _, err = run(capsys, "validate", "--walk", str(bad))
    assert code == 1
    assert "error" in err
    code, _, _ = run(capsys, "validate", "--walk", str(tmp_path / "missing.txt"))
    assert code == 1


def test_exact_variants(capsys, tmp_path):
    code, out, _ = run(capsys, "exact", "--walk", "builtin:w3", "--n", "2")
    assert code == 0
    assert out.splitlines()[0] == "index,probability"
    assert "0,0.33333333333333331" in out
    code, out, _ = run(capsys, "exact", "--walk", "builtin:w3", "--n", "2", "--a", "0")
    assert out.splitlines()[0] == "x,ell,probability"
    for what in ("first-passage", "survival", "avoid", "occupation"):
        code, out, _ = run(capsys, "exact", "--walk", "builtin:w3", "--n", "5", "--a", "1", "--what", what)
        assert code == 0 and out.count("\n") > 1
    dest = tmp_path / "m.csv"
    run(capsys, "exact", "--walk", "builtin:lazy", "--n", "3", "--out", str(dest))
    assert dest.read_text().startswith("index,probability")


def test_exact_resource_error(capsys):
    code, _, err = run(capsys, "exact", "--walk", "builtin:w3", "--n", "500", "--a", "0", "--what", "joint")
    assert code == 2
    assert "resource" in err


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--walk", "builtin:w3", "--n", "2", "--a", "0", "--x", "0", "--ell", "1")
    assert code == 0
    vals = dict(line.split() for line in out.splitlines())
    assert float(vals["joint"]) == pytest.approx(2 / 9, abs=1e-15)
    assert float(vals["occupation"]) == pytest.approx(4 / 9, abs=1e-15)
    code, _, _ = run(capsys, "decompose", "--walk", "builtin:w3", "--n", "2", "--a", "0", "--x", "0", "--ell", "0")
    assert code == 1


def test_asymptotic(capsys):
    code, out, _ = run(capsys, "asymptotic", "--fn", "phi", "--args", "1", "0", "0", "1")
    assert code == 0
    assert float(out) == pytest.approx(0.24197072451914337, abs=1e-16)
    code, _, _ = run(capsys, "asymptotic", "--fn", "phi", "--args", "1")
    assert code == 1
    code, _, _ = run(capsys, "asymptotic", "--fn", "phi", "--args", "1", "0", "0", "0")
    assert code == 1


def test_study(capsys, tmp_path):
    cfg = tmp_path / "s.ini"
    cfg.write_text("[study]\nwalk = builtin:w3\nkind = kaigh\nn_grid = 64 256 1024\n")
    csv, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    code, _, err = run(capsys, "study", "--config", str(cfg), "--out-csv", str(csv), "--out-svg", str(svg), "--assert")
    assert code == 0
    assert "assert PASS" in err
    assert csv.read_text().startswith("kind,n,a,x,ell")
    assert svg.read_text().startswith("<svg")


def test_study_assert_failure(capsys, tmp_path):
    # a single horizon cannot show convergence
    cfg = tmp_path / "s.ini"
    cfg.write_text("[study]\nwalk = builtin:w3\nkind = kaigh\nn_grid = 64\n")
    code, out, err = run(capsys, "study", "--config", str(cfg), "--assert")
    assert code == 3
    assert out.startswith("kind,")


def test_study_bad_config(capsys, tmp_path):
    cfg = tmp_path / "s.ini"
    cfg.write_text("[study]\nwalk = builtin:w3\nkind = main1\n[regime]\nlambda_grid = 0 1\n")
    assert run(capsys, "study", "--config", str(cfg))[0] == 1


def test_mc(capsys):
    code, out, _ = run(capsys, "mc", "--walk", "builtin:w3", "--n", "10", "--a", "0", "--trials", "2000", "--seed", "1")
    assert code == 0
    assert out.splitlines()[0] == "x,ell,probability,std_err"
    again = run(capsys, "mc", "--walk", "builtin:w3", "--n", "10", "--a", "0", "--trials", "2000", "--seed", "1", "--workers", "2")[1]
    assert again == out


def test_identities(capsys):
    code, out, _ = run(capsys, "identities")
    assert code == 0
    assert len(out.splitlines()) == 1 + 150


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latwalk", "validate", "--walk", "builtin:lazy"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "max_step 1" in proc.stdout

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hig import serialize
from hig.cli import main
from hig.scalars import PI
from hig.valuations import TensorElement, Valuation, chi, kinematic


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("HIG_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_dims(capsys):
    data = run_json(capsys, "dims", "--n", "2")
    assert [d["dim"] for d in data["dims"]] == [1, 1, 2, 1, 1]
    code, out, _ = run(capsys, "dims", "--n", "2", "--format", "latex")
    assert code == 0 and out.startswith("\\begin{tabular}")


def test_kinematic_classical(capsys):
    data = run_json(capsys, "kinematic", "--n", "1", "--basis", "mu")
    T = serialize.tensor_from_json(data)
    want = TensorElement.from_terms(1, "mu", "mu", [((0, 0), (2, 1), 1), ((1, 0), (1, 0), 2 / PI),
                                                   ((2, 1), (0, 0), 1)])
    assert T == want
    code, out, _ = run(capsys, "kinematic", "--n", "1", "--basis", "mu", "--format", "latex")
    assert r"\frac{2}{\pi}\,\mu_{1,0} \otimes \mu_{1,0}" in out


def test_kinematic_mixed_bases_and_phi(capsys):
    data = run_json(capsys, "kinematic", "--n", "2", "--phi", "t", "--basis", "prim", "--right-basis", "u")
    assert (data["basis_left"], data["basis_right"]) == ("prim", "u")
    T = serialize.tensor_from_json(data)
    assert T == kinematic(Valuation.basis_element(2, "mono", 1, 0))


def test_valuation_commands(capsys):
    v = serialize.valuation_from_json(run_json(capsys, "mul", "--n", "1", "mu(1,0)", "mu(1,0)", "--basis", "mu"))
    assert v == Valuation.basis_element(1, "mu", 2, 1).scale(PI / 2)
    v = serialize.valuation_from_json(run_json(capsys, "fourier", "--n", "2", "chi"))
    assert v == Valuation.basis_element(2, "mu", 4, 2)
    v = serialize.valuation_from_json(run_json(capsys, "conv", "--n", "2", "vol", "t^2 + s"))
    assert v == serialize.valuation_from_json(run_json(capsys, "convert", "--n", "2", "t^2+s", "--to", "tau"))
    x = serialize.scalar_from_json(run_json(capsys, "pd", "--n", "1", "t", "t"))
    assert x == 2 / PI
    r = serialize.valuation_from_json(run_json(capsys, "rho", "--n", "2", "--k", "1", "--r", "0"))
    assert r == chi(2).scale(Fraction(-1, 3))


def test_json_file_input(capsys, tmp_path):
    v = Valuation.basis_element(2, "prim", 2, 1)
    f = tmp_path / "v.json"
    f.write_text(serialize.dumps(serialize.valuation_to_json(v, "prim")))
    back = serialize.valuation_from_json(run_json(capsys, "convert", "--n", "2", f"@{f}", "--to", "prim"))
    assert back == v


def test_local_and_semilocal(capsys):
    data = run_json(capsys, "local-kinematic", "--n", "1", "--generator", "Delta00", "--glob", "both")
    assert serialize.tensor_from_json(data) == kinematic(chi(1))
    data = run_json(capsys, "local-kinematic", "--n", "2", "--generator", "N10")
    assert data["n"] == 2
    run_json(capsys, "local-kinematic", "--n", "2", "--glob", "right")
    data = run_json(capsys, "semilocal", "--n", "2", "--pair", "t")
    x = serialize.freecm_from_json(data)
    assert x.ell == Valuation.basis_element(2, "mono", 1, 0) and x.nu.is_zero()


def test_curved_glob_kernel_module(capsys):
    data = run_json(capsys, "curved-kinematic", "--n", "2", "--lam", "1/2", "--certify")
    assert data["certificate"]["certified"] is True
    data = run_json(capsys, "glob", "--n", "2", "N(1,0) + B(3,1)/pi", "--lam", "1")
    assert data["terms"] == []
    data = run_json(capsys, "glob", "--n", "2", "B(1,0)", "--basis", "flat_mono")
    assert data["basis"] == "flat_mono"
    data = run_json(capsys, "kernel", "--n", "2", "--lam", "0")
    assert len(data["generators"]) == 1
    data = run_json(capsys, "module-solve", "--n", "2")
    assert data["unique"] is True and data["solution_dim"] == 0
    code, out, _ = run(capsys, "module-solve", "--n", "1", "--format", "latex")
    assert code == 0 and "\\begin{tabular}" in out


def test_verify(capsys):
    data = run_json(capsys, "verify", "--n", "2", "--suite", "classical", "--suite", "pkf")
    assert data["passed"] and len(data["checks"]) == 3
    code, out, _ = run(capsys, "verify", "--n", "1", "--suite", "dims", "--format", "latex")
    assert code == 0 and "pass" in out


def test_approx(capsys):
    data = run_json(capsys, "pd", "--n", "1", "t", "t", "--approx", "12")
    assert data["approx"] == "0.636619772368"
    data = run_json(capsys, "kinematic", "--n", "1", "--basis", "mu", "--approx", "5")
    assert "approx_note" in data
    assert any(t.get("coeff_approx") == "0.63662" for t in data["terms"])
    code, out, _ = run(capsys, "kinematic", "--n", "1", "--basis", "mu", "--approx", "5", "--format", "latex")
    assert "% decimal approximations" in out and "0.63662" in out


@pytest.mark.parametrize("argv", [
    ["dims"],                                      # missing --n
    ["dims", "--n", "0"],
    ["kinematic", "--n", "2", "--basis", "klain"],
    ["rho", "--n", "2", "--k", "1", "--r", "1"],   # inadmissible index
    ["convert", "--n", "2", "__import__('os')"],
    ["mul", "--n", "2", "t", "B(1,0)"],
    ["glob", "--n", "2", "t"],
    ["verify", "--n", "1", "--suite", "nope"],
    ["dims", "--n", "1", "--approx", "0"],
    ["convert", "--n", "2", "@/nonexistent.json"],
    ["nosuchcommand"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_contract_violation_exit_3(capsys):
    code, _, err = run(capsys, "module-solve", "--n", "2", "--t-lambdas", "0,1")
    assert code == 3 and "contract violation" in err


def test_cache_flags(capsys, tmp_path, isolated_cache):
    flag_dir = tmp_path / "flag"
    first = run(capsys, "kinematic", "--n", "2", "--cache-dir", str(flag_dir))[1]
    assert any(flag_dir.rglob("*.json"))
    assert not isolated_cache.exists()
    second = run(capsys, "kinematic", "--n", "2", "--cache-dir", str(flag_dir))[1]
    assert first == second
    run(capsys, "kinematic", "--n", "2")
    assert any(isolated_cache.rglob("*.json"))
    nodir = tmp_path / "none"
    third = run(capsys, "kinematic", "--n", "2", "--no-cache", "--cache-dir", str(nodir))[1]
    assert not nodir.exists() and third == first


def test_corrupt_cache_warns_and_recovers(capsys, isolated_cache):
    good = run(capsys, "kinematic", "--n", "2", "--basis", "prim")[1]
    for p in isolated_cache.rglob("*.json"):
        p.write_text("corrupted")
    code, out, err = run(capsys, "kinematic", "--n", "2", "--basis", "prim")
    assert code == 0 and out == good
    assert "warning" in err and "corrupt cache entry" in err


def test_console_script(tmp_path):
    env = {"HIG_CACHE_DIR": str(tmp_path), "PATH": "/usr/local/bin:/usr/bin:/bin"}
    proc = subprocess.run([sys.executable, "-m", "hig.cli", "dims", "--n", "3"], capture_output=True,
                          text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["total"] == 10
    proc = subprocess.run([sys.executable, "-m", "hig.cli", "dims"], capture_output=True, text=True, env=env)
    assert proc.returncode == 2

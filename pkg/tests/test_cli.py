import csv
import io
import json

import numpy as np
import pytest

from ptmat.cli import main
from ptmat.io import matrix_from_json

HALF_PI = "1.5707963267948966"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def bbj_files(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--family", "pt2", "--gamma", "5", "--mu", "3", "--theta", HALF_PI)
    assert code == 0
    h = write(tmp_path, "h.json", json.loads(out)["H"])
    px = write(tmp_path, "px.json", {"kind": "parity2", "theta": float(HALF_PI), "phi": 0})
    pz = write(tmp_path, "pz.json", {"kind": "parity2", "theta": 0, "phi": 0})
    return h, px, pz


def test_parity_examples(capsys):
    code, out, _ = run(capsys, "parity", "--n", "2", "--theta", "1.5707963", "--phi", "0")
    assert code == 0
    np.testing.assert_allclose(matrix_from_json(json.loads(out)["matrix"]), [[0, 1], [1, 0]], atol=1e-7)
    code, out, _ = run(capsys, "parity", "--n", "3", "--chi", "0", "--theta", "0", "--rho", "0", "--phi", "0")
    assert code == 0
    np.testing.assert_allclose(matrix_from_json(json.loads(out)["matrix"]), np.diag([1, 1, -1]))


@pytest.mark.parametrize("argv", [
    ["parity", "--n", "2", "--bogus", "1"],
    ["parity", "--n", "2", "--thet", "1", "--phi", "0"],
    ["parity", "--n", "2", "--theta", "abc", "--phi", "0"],
    ["parity", "--n", "2", "--theta", "1"],
    ["nosuchcommand"],
])
def test_usage_errors_exit_2(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_build_examples(capsys):
    code, out, _ = run(capsys, "build", "--family", "pt2", "--gamma", "5", "--mu", "3", "--theta", HALF_PI)
    d = json.loads(out)
    assert code == 0 and d["phase"] == "unbroken"
    np.testing.assert_allclose([e[0] for e in d["eigenvalues"]], [-4, 4], atol=1e-12)
    np.testing.assert_allclose(matrix_from_json(d["H"]), [[-3j, 5], [5, 3j]], atol=1e-14)
    code, out, _ = run(capsys, "build", "--family", "pt2", "--gamma", "3", "--mu", "3", "--nu", "4",
                       "--theta", HALF_PI)
    d = json.loads(out)
    assert d["phase"] == "broken"
    ev = np.array(d["eigenvalues"])
    assert ev[0][1] == pytest.approx(-ev[1][1]) and abs(ev[0][1]) == pytest.approx(4)
    code, out, _ = run(capsys, "build", "--family", "pt3", "--epsilon", "1.5")
    np.testing.assert_allclose(matrix_from_json(json.loads(out)["H"]), 1.5 * np.eye(3))


def test_build_from_params_file(tmp_path, capsys):
    f = write(tmp_path, "p.json", {"gammas": [1, 0.5, 0.2, 0.1], "mus": [0.1, 0, 0, 0.2],
                                    "chi": 0.3, "theta": 0.4, "rho": 0.5, "phi": 0.6})
    code, out, _ = run(capsys, "build", "--family", "pt3", "--params", f)
    assert code == 0 and json.loads(out)["parity"]["kind"] == "parity3"


def test_verify_and_cpt(tmp_path, capsys):
    h, px, pz = bbj_files(tmp_path, capsys)
    code, out, _ = run(capsys, "verify", "-H", h, "-P", px)
    assert code == 0 and json.loads(out)["pt_symmetric"]
    code, out, _ = run(capsys, "verify", "-H", h, "-P", pz)
    assert code == 3 and json.loads(out)["pt_residual"] > 0
    code, out, _ = run(capsys, "cpt", "build", "-H", h, "-P", px)
    d = json.loads(out)
    assert code == 0
    np.testing.assert_allclose(matrix_from_json(d["C"]), [[-0.75j, 1.25], [1.25, 0.75j]], atol=1e-13)
    np.testing.assert_allclose(matrix_from_json(d["h"]), [[0, 4], [4, 0]], atol=1e-12)
    code, _, err = run(capsys, "cpt", "-H", h, "-P", pz)
    assert code == 3 and "NotPTSymmetric" in err


def test_verify_hermitian_with_trivial_parity(tmp_path, capsys):
    h = write(tmp_path, "h.json", {"n": 2, "re": [[1, 2], [2, -1]], "im": [[0, 1], [-1, 0]]})
    p = write(tmp_path, "p.json", {"kind": "trivial", "n": 2})
    assert run(capsys, "verify", "-H", h, "-P", p)[0] == 0


def test_stdin_input(tmp_path, capsys, monkeypatch):
    px = write(tmp_path, "px.json", {"kind": "parity2", "theta": float(HALF_PI), "phi": 0})
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"n": 2, "re": [[0, 5], [5, 0]],
                                                             "im": [[-3, 0], [0, 3]]})))
    assert run(capsys, "verify", "-H", "-", "-P", px)[0] == 0


def test_env_tolerance(tmp_path, capsys, monkeypatch):
    h = write(tmp_path, "h.json", {"n": 2, "re": [[0, 5], [5, 1e-6]], "im": [[-3, 0], [0, 3]]})
    px = write(tmp_path, "px.json", {"kind": "parity2", "theta": float(HALF_PI), "phi": 0})
    assert run(capsys, "verify", "-H", h, "-P", px)[0] == 3
    monkeypatch.setenv("PTMAT_TOL", "1e-5")
    assert run(capsys, "verify", "-H", h, "-P", px)[0] == 0
    monkeypatch.setenv("PTMAT_TOL", "nope")
    assert run(capsys, "verify", "-H", h, "-P", px)[0] == 2


def test_malformed_matrix_file(tmp_path, capsys):
    h = write(tmp_path, "h.json", {"n": 2, "re": [[0, 5], [5]]})
    px = write(tmp_path, "px.json", {"kind": "trivial", "n": 2})
    code, _, err = run(capsys, "verify", "-H", h, "-P", px)
    assert code == 2 and "ragged" in err
    assert run(capsys, "verify", "-H", str(tmp_path / "missing.json"), "-P", px)[0] == 2


def test_fit(tmp_path, capsys):
    h = write(tmp_path, "h.json", {"n": 2, "re": [[0, 5], [5, 0]], "im": [[-3, 0], [0, 3]]})
    code, out, _ = run(capsys, "fit", "-H", h)
    d = json.loads(out)
    assert code == 0 and d["params"]["gamma"] == pytest.approx(5) and d["roundtrip_error"] < 1e-12
    broken = write(tmp_path, "b.json", {"n": 2, "re": [[0, 3], [3, 0]], "im": [[-5, 0], [0, 5]]})
    assert run(capsys, "fit", "-H", broken)[0] == 3


def test_reduce_cases(capsys):
    code, out, _ = run(capsys, "reduce", "--case", "bbj", "--gamma", "5", "--mu", "3")
    d = json.loads(out)
    assert code == 0 and set(d) >= {"H", "C", "mapped_params", "residuals"}
    code, out, _ = run(capsys, "reduce", "--case", "mo", "--q", "0.2", "--E", "-1", "--Theta", "0.3+0.2j",
                       "--Phi", "0.4")
    assert code == 0 and json.loads(out)["mapped_params"]["gamma"] < 0
    assert run(capsys, "reduce", "--case", "mo", "--q", "0.2", "--E", "0", "--Theta", "0.3", "--Phi", "0.4")[0] == 3
    code, out, _ = run(capsys, "reduce", "--case", "mostafazadeh", "--r", "1", "--s", "0.3", "--t", "2",
                       "--u", "0.5", "--phi-ext", "0.7")
    assert code == 0
    assert run(capsys, "reduce", "--case", "bmw", "--gamma", "5")[0] == 2


def test_search_cli(tmp_path, capsys):
    h = write(tmp_path, "h.json", {"n": 3, "re": [[1, 2, 0.5], [0, 2, 1], [0, 0, 3.5]],
                                    "im": [[0, 1, -1], [0, 0, 2], [0, 0, 0]]})
    code, out, _ = run(capsys, "search", "-H", h, "--restarts", "10")
    assert code == 3 and not json.loads(out)["certified"]


def scan(capsys, *argv):
    code, out, _ = run(capsys, "scan", *argv)
    assert code == 0
    return list(csv.DictReader(io.StringIO(out)))


def test_scan_mu_flip(capsys):
    rows = scan(capsys, "--fixed", "gamma=5,nu=0", "--sweep", "mu:0:6:13")
    labels = {float(r["mu"]): r["label"] for r in rows}
    assert all(v == "unbroken" for k, v in labels.items() if k < 5)
    assert labels[5.0] == "exceptional"
    assert all(v == "broken" for k, v in labels.items() if k > 5)
    assert list(rows[0])[-4:] == ["discriminant", "label", "max_im_eig", "pt_residual"]


def test_scan_nu_flip_and_single_row(capsys, tmp_path):
    rows = scan(capsys, "--fixed", "gamma=5,mu=3", "--sweep", "nu:0:8:9")
    flips = [float(r["nu"]) for r in rows if r["label"] == "exceptional"]
    assert flips == [4.0]
    assert len(scan(capsys, "--fixed", "gamma=1")) == 1
    assert len(scan(capsys, "--sweep", "mu:0:1:1", "--sweep", "nu:0:1:1")) == 1
    out = tmp_path / "s.csv"
    cfg = write(tmp_path, "cfg.json", {"family": "pt2", "fixed": {"gamma": 5},
                                       "swept": {"mu": {"min": 0, "max": 6, "steps": 4}}})
    assert main(["scan", "--config", cfg, "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 5


def test_scan_limits(capsys):
    assert run(capsys, "scan", "--sweep", "mu:0:1:0")[0] == 2
    assert run(capsys, "scan", "--sweep", "mu:0:1:2", "--sweep", "nu:0:1:2", "--sweep", "gamma:0:1:2",
               "--sweep", "theta:0:1:2")[0] == 2
    assert run(capsys, "scan", "--sweep", "mu:0:1:10000", "--sweep", "nu:0:1:10000")[0] == 2
    assert run(capsys, "scan", "--fixed", "bogus=1")[0] == 2


def test_scan_is_byte_identical(capsys):
    a = run(capsys, "scan", "--family", "pt3", "--fixed", "gamma1=1,mu1=0.2,chi=0.3", "--sweep", "theta:0:3:4")
    b = run(capsys, "scan", "--family", "pt3", "--fixed", "gamma1=1,mu1=0.2,chi=0.3", "--sweep", "theta:0:3:4")
    assert a == b and a[0] == 0


def test_basis_csv(capsys):
    code, out, _ = run(capsys, "basis", "--n", "3")
    assert code == 0 and out.startswith("i,j,k,d,f")


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick", "--seed", "42")
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert code == 0 and len(lines) == 11
    assert all(l.startswith("[PASS]") for l in lines)

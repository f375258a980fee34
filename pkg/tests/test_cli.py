import io
import json
import math
import subprocess
import sys

import pytest

from bernstein_siss.cli import dumps, fmt_float, run

PI = math.pi
SHANNON = '{"kind": "shannon"}'
ONSPLINE2 = '{"kind": "orthonormalized", "inner": {"kind": "bspline", "order": 2}}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def spec_files(tmp_path):
    files = {}
    for name, text in {"shannon": SHANNON, "bspline1": '{"kind": "bspline", "order": 1}',
                       "onspline2": ONSPLINE2}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(text)
        files[name] = str(p)
    return files


def test_constant_shannon(spec_files):
    code, out, _ = call("constant", "--generator", spec_files["shannon"], "--k", "1")
    assert code == 0
    rec = json.loads(out)
    assert rec["value"] == pytest.approx(PI ** 2, rel=1e-12)
    assert rec["sqrt_value"] == pytest.approx(PI, rel=1e-12)
    assert rec["argmax"] == pytest.approx(PI, abs=1e-9)
    assert rec["grid_size"] == 4096


def test_haar_exit_3(spec_files):
    code, out, err = call("constant", "--generator", spec_files["bspline1"], "--k", "1")
    assert code == 3
    assert out == ""
    assert "2p - 2k > 1" in err


def test_verify_byte_identical(spec_files):
    argv = ("verify", "--generator", spec_files["onspline2"], "--k", "1", "--trials", "10", "--seed", "7")
    a = call(*argv)
    b = call(*argv)
    assert a[0] == 0 and a == b
    rec = json.loads(a[1])
    assert rec["pass"] is True and rec["trials"] == 10


def test_verify_subprocess_identical(spec_files):
    argv = [sys.executable, "-m", "bernstein_siss", "verify", "--generator", spec_files["onspline2"],
            "--k", "1", "--trials", "10", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_scaled_mode():
    code, out, _ = call("constant", "--generator", SHANNON, "--k", "1", "--scaled-a", "2")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(PI ** 2 / 4, abs=1e-10)
    code, out, _ = call("verify", "--generator", SHANNON, "--k", "1", "--scaled-a", "2", "--trials", "200")
    assert code == 0 and json.loads(out)["pass"] is True


def test_constant_nd():
    g = '{"kind": "tensor", "axes": [{"kind": "shannon"}, {"kind": "shannon"}]}'
    code, out, _ = call("constant-nd", "--generator", g, "--k", "1,1")
    rec = json.loads(out)
    assert code == 0
    assert rec["value"] == pytest.approx(PI ** 4, rel=1e-12)
    assert rec["k"] == [1, 1] and len(rec["argmax"]) == 2


def test_sharpness_csv():
    code, out, _ = call("sharpness", "--generator", ONSPLINE2, "--k", "1", "--orders", "8,64")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,ratio,gap"
    n, r, g = lines[1].split(",")
    assert int(n) == 8 and float(r) == pytest.approx(10.8453076829386253, rel=1e-10)
    assert float(r) + float(g) == pytest.approx(12.0, abs=1e-10)


def test_profile_csv():
    code, out, _ = call("profile", "--generator", ONSPLINE2, "--k", "1", "--samples", "8")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "omega,G_k,G_0,ratio" and len(lines) == 9
    w, gk, g0, r = map(float, lines[5].split(","))
    assert w == pytest.approx(PI) and gk == pytest.approx(12.0) and g0 == pytest.approx(1.0)


def test_ratio_command(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("gamma,re,im\n0,1,0\n1,-1,0\n")
    code, out, _ = call("ratio", "--generator", ONSPLINE2, "--k", "1", "--coeffs", str(p))
    rec = json.loads(out)
    assert code == 0
    assert rec["norm_sq"] == 2.0
    assert rec["derivative_norm_sq"] == pytest.approx(14.3538290724795825669880682942, rel=1e-10)


def test_out_file(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = call("constant", "--generator", SHANNON, "--k", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["value"] == pytest.approx(PI ** 4, rel=1e-12)


def test_csv_format():
    code, out, _ = call("constant", "--generator", SHANNON, "--k", "1", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header.split(",")[0] == "value"
    assert float(row.split(",")[0]) == pytest.approx(PI ** 2)


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("constant", "--generator", SHANNON),
    ("constant", "--generator", SHANNON, "--k", "1", "--nope"),
    ("constant", "--generator", SHANNON, "--k", "x"),
])
def test_usage_errors(argv, capsys):
    code, _, _ = call(*argv)
    assert code == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ("constant", "--generator", SHANNON, "--k", "-1"),
    ("constant", "--generator", SHANNON, "--k", "1", "--step", "0"),
    ("constant", "--generator", SHANNON, "--k", "1", "--scaled-a", "-2"),
    ("constant", "--generator", SHANNON, "--k", "1", "--grid", "4"),
    ("constant", "--generator", '{"kind": "bspline", "order": 0}', "--k", "1"),
    ("constant", "--generator", "/nonexistent/g.json", "--k", "1"),
    ("constant", "--generator", "{not json", "--k", "1"),
    ("constant", "--generator", SHANNON, "--k", "1,1"),
    ("verify", "--generator", SHANNON, "--k", "1", "--trials", "-3"),
])
def test_input_errors(argv):
    code, out, err = call(*argv)
    assert code == 2
    assert out == "" and err.startswith("error")


def test_convergence_exit_4():
    code, _, err = call("constant", "--generator", '{"kind": "bspline", "order": 2}', "--k", "0",
                        "--step", "0.7", "--tail-tol", "1e-300")
    assert code == 4
    assert "no convergence" in err


def test_json_roundtrip():
    argv = ["constant", "--generator", ONSPLINE2, "--k", "1", "--grid", "1024"]
    first = json.loads(call(*argv)[1])
    again = argv + ["--refine-tol", repr(first["refine_tol"]), "--tail-tol", repr(first["tail_tol"]),
                    "--step", repr(first["step"]), "--grid", str(first["grid_size"])]
    second = json.loads(call(*again)[1])
    assert second["value"] == pytest.approx(first["value"], rel=1e-12)
    assert second["argmax"] == pytest.approx(first["argmax"], rel=1e-12)


def test_seventeen_digits():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert float(fmt_float(PI)) == PI
    assert dumps({"a": [1, 2.5, None, True]}) == '{"a": [1, 2.5, null, true]}'

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from slice_bergman import cli
from slice_bergman import functions as fn
from slice_bergman.errors import SpecError
from slice_bergman.specs import parse_function, parse_quaternion, parse_unit

POLY_Q = '{"type":"polynomial","coeffs":[[0,0,0,0],[1,0,0,0]]}'


class TestParsing:
    @pytest.mark.parametrize("text, expected", [("1,2,3,4", [1, 2, 3, 4]), ("0.5", [0.5, 0, 0, 0]),
                                                (" 0, 0.3 ,0,0", [0, 0.3, 0, 0])])
    def test_quaternion(self, text, expected):
        np.testing.assert_array_equal(parse_quaternion(text), expected)

    @pytest.mark.parametrize("text", ["1,2", "a,b,c,d", "1,2,3,nan", ""])
    def test_bad_quaternion(self, text):
        with pytest.raises(SpecError):
            parse_quaternion(text)

    def test_unit_normalised(self):
        assert np.allclose(parse_unit("0,3,4"), [0, 0.6, 0.8])

    @pytest.mark.parametrize("text", ["0,0,0", "1,0"])
    def test_bad_unit(self, text):
        with pytest.raises(SpecError):
            parse_unit(text)

    def test_polynomial(self):
        f = parse_function('{"type":"polynomial","coeffs":[1,[0,0,1,0]]}')
        assert isinstance(f, fn.QuaternionPolynomial)
        np.testing.assert_allclose(f(np.array([0, 1, 0, 0])), [1, 0, 0, 1])

    def test_intrinsic_rational(self):
        f = parse_function('{"type":"intrinsic_rational","num":[1],"den":[1,-1],"den_pow":1,"domain":"ball"}')
        assert f.domain is fn.Domain.BALL
        np.testing.assert_allclose(f(np.array([0.5, 0, 0, 0])), [2, 0, 0, 0])

    def test_stem(self):
        f = parse_function('{"type":"stem","F":{"coeffs":[0,[0,1]]},"G":{"num":[1],"den":[2,-1]},'
                           '"i":[0,0,1],"j":[1,0,0]}')
        assert isinstance(f, fn.Stem)
        z = np.array([0.1, 0, 0, 0.2])  # 0.1 + 0.2 k on the slice of k
        F, G = fn.split(f, [0, 0, 1], [1, 0, 0]).F(0.1 + 0.2j), fn.split(f, [0, 0, 1], [1, 0, 0]).G(0.1 + 0.2j)
        assert F == pytest.approx(1j * (0.1 + 0.2j)) and G == pytest.approx(1 / (2 - (0.1 + 0.2j)))
        assert np.all(np.isfinite(f(z)))

    def test_kernel_section(self):
        f = parse_function('{"type":"kernel_section","kernel":"ball_I","r":[0.3,0,0,0]}')
        np.testing.assert_allclose(f(np.zeros(4)), [1 / np.pi, 0, 0, 0])

    @pytest.mark.parametrize("text, where", [
        ('{"type":"polynomial","coeffs":[1,[0,1]]}', "fn.coeffs[1]"),
        ('{"type":"quartic"}', "fn.type"),
        ('{"type":"stem","F":{"coeffs":["x"]}}', "fn.F.coeffs[0]"),
        ('{"type":"intrinsic_rational","num":[1],"den_pow":-1}', "fn.den_pow"),
        ('{"type":"polynomial","coeffs":[1],"domain":"torus"}', "fn.domain"),
        ('{"type":"kernel_section","kernel":"disk","r":[0.1,0,0,0]}', "fn"),
        ('[1, 2]', "fn"),
    ])
    def test_field_diagnostics(self, text, where):
        with pytest.raises(SpecError, match=where.replace("[", r"\[").replace("]", r"\]")):
            parse_function(text)

    def test_json_position(self):
        with pytest.raises(SpecError, match="line 2, column"):
            parse_function('{"type": "polynomial",\n "coeffs": [1,}')


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


class TestCommands:
    def test_kernel_at_origin(self, capsys):
        code, out, _ = run(capsys, "kernel", "--kernel", "ball_I", "--q", "0,0,0,0", "--r", "0.3,0,0,0")
        assert code == 0
        np.testing.assert_allclose(out["value"], [1 / np.pi, 0, 0, 0], rtol=1e-16)

    def test_seventeen_digits(self, capsys):
        _, _, text = run(capsys, "kernel", "--q", "0", "--r", "0")
        assert "0.31830988618379069" in text
        assert json.loads(text)["value"][0] == 1 / np.pi

    def test_reproduce(self, capsys):
        code, out, _ = run(capsys, "reproduce", "--fn", POLY_Q, "--q", "0.3,0.2,0,0", "--domain", "ball",
                           "--slice", "1,0,0")
        assert code == 0
        np.testing.assert_allclose(out["value"], [0.3, 0.2, 0, 0], atol=1e-7)
        assert out["error"]["rel"] < 1e-7
        assert out["rule"]["n_r"] == 64

    def test_bf_transform_and_contour(self, capsys):
        sq = '{"type":"polynomial","coeffs":[0,0,1]}'
        for cmd in ("bf-transform", "contour"):
            code, out, _ = run(capsys, cmd, "--fn", sq, "--q", "0.2,0.1,0,0")
            assert code == 0
            np.testing.assert_allclose(out["value"], [-4, 0, 0, 0], atol=1e-6)

    @pytest.mark.parametrize("extra, expected", [
        (["--kind", "slice"], np.pi),
        (["--kind", "slice", "--weight", "rho"], np.pi / 4),
        (["--kind", "slice", "--half"], np.pi / 2),
        (["--kind", "volume"], np.pi**2 / 2),
    ])
    def test_norms(self, capsys, extra, expected):
        code, out, _ = run(capsys, "norm", "--fn", '{"type":"polynomial","coeffs":[1]}', *extra)
        assert code == 0 and out["value"] == pytest.approx(expected, rel=1e-10)

    def test_norm_mc(self, capsys):
        code, out, _ = run(capsys, "norm", "--fn", POLY_Q, "--kind", "mc", "--seed", "4", "--samples", "100000")
        assert code == 0
        assert abs(out["value"] - np.pi**2 / 3) <= 3 * out["error"]["stderr"]

    def test_verify_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "kernels")
        assert code == 0 and out["passed"] and out["failed"] == 0
        assert {c["criterion"] for c in out["checks"]} == {1, 2, 4}

    def test_verify_failure_exit_code(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "kernels", "--tol-scale", "1e-10")
        assert code == 3 and not out["passed"]


class TestErrors:
    @pytest.mark.parametrize("argv, kind", [
        (["kernel", "--q", "1,2", "--r", "0"], "input"),
        (["reproduce", "--fn", "{", "--q", "0"], "input"),
        (["reproduce", "--fn", POLY_Q, "--q", "0.95"], "domain"),
        (["kernel", "--kernel", "disk", "--q", "1", "--r", "1"], "singular_kernel"),
        (["kernel", "--kernel", "nope", "--q", "0", "--r", "0"], "bad_parameter"),
        (["contour", "--fn", POLY_Q, "--q", "0.78"], "contour_too_close"),
        (["norm", "--fn", POLY_Q, "--kind", "mc", "--weight", "rho"], "bad_parameter"),
        (["verify", "--tol-scale", "0"], "bad_parameter"),
        (["frobnicate"], "usage"),
        (["--threads", "0", "kernel", "--q", "0", "--r", "0"], "bad_parameter"),
    ])
    def test_exit_two_with_kind(self, capsys, argv, kind):
        code, out, _ = run(capsys, *argv)
        assert code == 2
        assert out["error"]["kind"] == kind and out["error"]["detail"]


class TestOutputs:
    def test_csv_rows(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        run(capsys, "--csv", str(path), "kernel", "--q", "0", "--r", "0.3")
        run(capsys, "reproduce", "--fn", POLY_Q, "--q", "0.3,0.2,0,0", "--csv", str(path))
        rows = list(csv.reader(path.open()))
        assert rows[0] == cli.CSV_HEADER
        assert [r[0] for r in rows[1:]] == ["kernel", "reproduce"]
        assert float(rows[2][2]) == pytest.approx(0.3) and float(rows[2][7]) < 1e-7
        assert json.loads(rows[2][1])["q"] == "0.3,0.2,0,0"

    def test_threads_do_not_change_output(self, capsys, monkeypatch):
        args = ["reproduce", "--fn", POLY_Q, "--q", "0.3,0.2,0.1,0"]
        _, _, one = run(capsys, "--threads", "1", *args)
        _, _, four = run(capsys, "--threads", "4", *args)
        monkeypatch.setenv("SLICE_BERGMAN_THREADS", "3")
        _, _, env = run(capsys, *args)
        assert one == four == env

    def test_byte_identical_runs(self):
        argv = [sys.executable, "-m", "slice_bergman", "norm", "--fn", POLY_Q, "--kind", "mc",
                "--seed", "7", "--samples", "20000"]
        a = subprocess.run(argv, capture_output=True, check=True).stdout
        b = subprocess.run(argv, capture_output=True, check=True).stdout
        assert a == b and a.endswith(b"\n")

    def test_to_json(self):
        assert cli.to_json({"b": [1.0, float("nan")], "a": np.int64(2)}) == '{"a":2,"b":[1.0,null]}'
        assert cli.to_json(0.1) == "0.10000000000000001"
        assert float(cli.to_json(np.float64(1) / 3)) == 1 / 3

import contextlib
import io
import json
import subprocess
import sys

import pytest

from moca.cli import main
from moca.fields import field_make
from moca.monoids import bicyclic
from moca.sentence import build_sentence, parse_system_json


def run_cli(argv):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_mul_textual_order():
    rc, out, _ = run_cli(["mul", "--monoid", "bicyclic", "p", "q"])
    assert rc == 0 and out == "1\n"
    rc, out, _ = run_cli(["mul", "--monoid", "bicyclic", "q", "p"])
    assert rc == 0 and out == "q^1p^1\n"


def test_amul_and_json_schema():
    rc, out, _ = run_cli(["amul", "--monoid", "cyclic:2", "--field", "2",
                          "--format", "json", "1+g", "1+g"])
    assert rc == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "inputs", "stats", "verdict"}
    assert doc["verdict"] == "0"  # (1+g)^2 = 0 over GF(2)


def test_mat_mul_and_certify(files):
    t = files("T.txt", "2\n1 ; g\n0 ; 1\n")
    ti = files("Ti.txt", "2\n1 ; -1*g\n0 ; 1\n")
    rc, out, _ = run_cli(["mat-mul", "--monoid", "cyclic:2", "--field", "3",
                          "--matrixA", t, "--matrixB", ti])
    assert rc == 0
    assert out == "2\n1 ; 0\n0 ; 1\n"
    rc, out, _ = run_cli(["finiteness", "certify", "--monoid", "cyclic:2",
                          "--field", "3", "--matrixA", t, "--matrixB", ti])
    assert rc == 0
    assert "two-sided: yes" in out
    # not a one-sided inverse at all: input error
    rc, _, err = run_cli(["finiteness", "certify", "--monoid", "cyclic:2",
                          "--field", "3", "--matrixA", t, "--matrixB", t])
    assert rc == 2 and "error:" in err


def test_bicyclic_witness_exit_zero():
    for spec in ("2", "3", "2^2", "Q"):
        rc, out, _ = run_cli(["finiteness", "bicyclic-witness",
                              "--field", spec])
        assert rc == 0
        assert "A*B = I: yes" in out and "B*A = I: no" in out


def test_solve_exit_codes():
    sat = ["sentence", "solve", "--monoid", "bicyclic", "--support", "p,q",
           "--dim", "1", "--field", "2"]
    rc, out, _ = run_cli(sat)
    assert rc == 1
    assert "witness index: 9" in out
    unsat = ["sentence", "solve", "--monoid", "cyclic:2", "--support", "g",
             "--dim", "1", "--field", "2"]
    rc, out, _ = run_cli(unsat)
    assert rc == 0 and "verdict: UNSAT" in out
    rc, _, err = run_cli(sat + ["--budget", "10"])
    assert rc == 2 and "budget" in err


def test_check_exit_codes(files):
    good = files("good.txt", "x[0,0,p^1] := 1\nx[0,0,q^1] := 0\n"
                             "y[0,0,p^1] := 0\ny[0,0,q^1] := 1\n")
    zero = files("zero.txt", "x[0,0,p^1] := 0\nx[0,0,q^1] := 0\n"
                             "y[0,0,p^1] := 0\ny[0,0,q^1] := 0\n")
    base = ["sentence", "check", "--monoid", "bicyclic", "--support", "p,q",
            "--dim", "1", "--field", "2"]
    rc, out, _ = run_cli(base + ["--assign", good])
    assert rc == 0 and "satisfied: yes" in out
    rc, out, _ = run_cli(base + ["--assign", zero])
    assert rc == 1 and "fails at (0,0,1)" in out


def test_emit_json_round_trip(files):
    rc, out, _ = run_cli(["sentence", "emit", "--monoid", "bicyclic",
                          "--support", "p,q", "--dim", "1", "--field", "2",
                          "--format", "json"])
    assert rc == 0
    parsed = parse_system_json(out)
    _, direct = build_sentence(bicyclic(),
                               (bicyclic().parse_element("p"),
                                bicyclic().parse_element("q")), 1)
    assert parsed.var_names == direct.var_names
    assert parsed.equations == direct.equations
    assert parsed.meta["field"] == "2"
    # and solving from the emitted file recovers the witness
    path = files("sys.json", out)
    rc, out2, _ = run_cli(["sentence", "solve", "--system", path,
                           "--monoid", "bicyclic"])
    assert rc == 1 and "witness index: 9" in out2 and "p^1" in out2


def test_psi_inv_recovers(files):
    m = files("M.txt", "2\n1+g ; 0\ng ; 1\n")
    rc, out, _ = run_cli(["psi-inv", "--monoid", "cyclic:2", "--field", "2",
                          "--dim", "2", "--support", "1,g", "--matrix", m])
    assert rc == 0
    assert out == "2\n1 + g ; 0\ng ; 1\n"


def test_scan_clean_exit():
    rc, out, _ = run_cli(["ca-scan-surjunctivity", "--monoid", "cyclic:2",
                          "--alphabet", "2"])
    assert rc == 0
    assert "injective but not surjective: none" in out
    assert "direct finiteness: holds" in out


def test_enumerate_counts():
    rc, out, _ = run_cli(["enumerate-monoids", "--order", "3",
                          "--format", "json"])
    assert rc == 0
    assert json.loads(out)["stats"]["count"] == 11


def test_everything_is_byte_deterministic(files):
    t = files("T.txt", "2\n1 ; g\n0 ; 1\n")
    ti = files("Ti.txt", "2\n1 ; -1*g\n0 ; 1\n")
    rule = files("xor.rule", "alphabet: 2\nmemory: 1 g\ntable: 0110\n")
    pat = files("cfg.pat", "1 := 1\ng := 0\n")
    vec = files("vec.pat", "1 := 1\ng := 0\n")
    m1 = files("M1.txt", "1\n1+g\n")
    invocations = [
        ["mul", "--monoid", "bicyclic", "q", "p"],
        ["amul", "--monoid", "cyclic:3", "--field", "2^2", "t*1 + g", "g^2"],
        ["mat-mul", "--monoid", "cyclic:2", "--field", "3",
         "--matrixA", t, "--matrixB", ti],
        ["conv", "--monoid", "cyclic:2", "--field", "2", "--pattern", vec,
         "--matrix", m1, "--window", "1,g"],
        ["ca-apply", "--monoid", "cyclic:2", "--rule", rule,
         "--pattern", pat, "--window", "1,g"],
        ["ca-compose", "--monoid", "cyclic:2", "--first", rule,
         "--then", rule],
        ["ca-min-memory", "--monoid", "cyclic:2", "--rule", rule],
        ["ca-scan-surjunctivity", "--monoid", "cyclic:2", "--alphabet", "2"],
        ["psi", "--monoid", "cyclic:2", "--field", "2", "--matrix", m1],
        ["psi-inv", "--monoid", "cyclic:2", "--field", "2", "--dim", "1",
         "--support", "1,g", "--matrix", m1, "--seed", "5"],
        ["lca-check-antihom", "--monoid", "bicyclic", "--field", "2^2",
         "--dim", "2", "--count", "20", "--seed", "7"],
        ["finiteness", "certify", "--monoid", "cyclic:2", "--field", "3",
         "--matrixA", t, "--matrixB", ti],
        ["finiteness", "bicyclic-witness", "--field", "Q"],
        ["sentence", "emit", "--monoid", "bicyclic", "--support", "p,q",
         "--dim", "1", "--format", "json"],
        ["sentence", "solve", "--monoid", "bicyclic", "--support", "p,q",
         "--dim", "1", "--field", "2"],
        ["enumerate-monoids", "--order", "2"],
    ]
    for argv in invocations:
        for fmt in ([], ["--format", "json"]):
            if argv[0] == "sentence" and argv[1] == "emit" and fmt:
                continue  # emit already covers json above
            first = run_cli(argv + fmt)
            second = run_cli(argv + fmt)
            assert first == second, argv
            assert first[1], argv  # never silent


def test_parallel_solve_deterministic():
    base = ["sentence", "solve", "--monoid", "bicyclic", "--support", "p,q",
            "--dim", "2", "--field", "2"]
    seq = run_cli(base + ["--workers", "1"])
    par1 = run_cli(base + ["--workers", "4"])
    par2 = run_cli(base + ["--workers", "4"])
    assert seq == par1 == par2
    assert seq[0] == 1
    assert "witness index: 10260" in seq[1]


def test_subprocess_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "moca.cli", "mul", "--monoid", "bicyclic",
         "p^2", "q"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "p^1\n"


def test_usage_errors_exit_two():
    rc, _, err = run_cli(["mul", "--monoid", "cyclic:2", "g", "h"])
    assert rc == 2 and "unknown element" in err
    rc, _, err = run_cli(["mat-mul", "--monoid", "cyclic:2", "--field", "2",
                          "--matrixA", "/nonexistent", "--matrixB",
                          "/nonexistent"])
    assert rc == 2 and "cannot read" in err
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2

from pathlib import Path

import pytest

from dlpcf.cli import main

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"
GOLDEN = Path(__file__).parent / "golden" / "twice_succ.smt2"


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_applied_add(capsys):
    code, out, _ = cli(capsys, "eval", PROGRAMS / "applied_add.pcf", "--machine", "cek")
    assert code == 0
    assert out.splitlines()[0] == "value: 6"
    assert "total steps: 224" in out


def test_eval_trace(capsys):
    code, out, _ = cli(capsys, "eval", PROGRAMS / "applied_add.pcf", "--trace")
    lines = out.splitlines()
    assert lines[0].startswith("<(lam f. ifz f 0 then 0 else f (f 0))")
    assert lines[224].startswith("<6> * e")


def test_eval_with_arguments(capsys):
    code, out, _ = cli(capsys, "eval", PROGRAMS / "add.pcf", "--args", "2", "5", "--machine", "kam")
    assert code == 0 and out.startswith("value: 7")


def test_eval_timeout_is_inconclusive(capsys, tmp_path):
    f = tmp_path / "loop.pcf"
    f.write_text("(fix f. lam x. f x) 0")
    code, _, err = cli(capsys, "eval", f, "--fuel", "100")
    assert code == 4 and "timeout" in err


def test_infer_twice_succ(capsys):
    code, out, _ = cli(capsys, "infer", PROGRAMS / "twice_succ.pcf")
    assert code == 0
    for section in ("# judgement", "# equations", "# completion", "# side conditions", "# symbols"):
        assert section in out
    assert "result at instance 0: " in out
    assert out.splitlines()[2].startswith("weight: f")


def test_check_twice_succ(capsys):
    code, out, _ = cli(capsys, "check", PROGRAMS / "twice_succ.pcf", "--range", "8")
    assert code == 0
    assert "33 checked, 0 counterexamples, 0 inconclusive; bound violations: 0" in out


def test_check_with_a_bound(capsys):
    code, _, _ = cli(capsys, "check", PROGRAMS / "add.pcf", "--range", "3", "--bound", "a1")
    assert code == 3
    code, _, _ = cli(capsys, "check", PROGRAMS / "add.pcf", "--range", "3",
                     "--bound", "100 * (a1 + 1)")
    assert code == 0


def test_check_fuel_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("DLPCF_FUEL", "3")
    code, out, _ = cli(capsys, "check", PROGRAMS / "add.pcf", "--range", "2")
    assert code == 4


def test_export_matches_golden(capsys, tmp_path):
    target = tmp_path / "twice_succ.smt2"
    assert cli(capsys, "export", PROGRAMS / "twice_succ.pcf", "-o", target)[0] == 0
    assert target.read_bytes() == GOLDEN.read_bytes()
    code, out, _ = cli(capsys, "export", PROGRAMS / "twice_succ.pcf")
    assert out == GOLDEN.read_text()


def test_export_plain(capsys):
    code, out, _ = cli(capsys, "export", PROGRAMS / "twice_succ.pcf", "--format", "plain")
    assert code == 0 and out.startswith("# equations")


@pytest.mark.parametrize("cmd", ["parse", "type", "infer", "export"])
def test_runs_are_byte_identical(capsys, cmd):
    first = cli(capsys, cmd, PROGRAMS / "add_nested.pcf")
    second = cli(capsys, cmd, PROGRAMS / "add_nested.pcf")
    assert first == second


def test_parse_and_type(capsys):
    code, out, _ = cli(capsys, "type", PROGRAMS / "add.pcf")
    assert (code, out) == (0, "Nat -> Nat -> Nat\n")
    code, out, _ = cli(capsys, "parse", PROGRAMS / "pred0.pcf", "--ast")
    assert code == 0 and out.startswith("Pred(")


def test_bad_input_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.pcf"
    bad.write_text("lam x.\n  )")
    code, _, err = cli(capsys, "parse", bad)
    assert code == 2 and err.strip() == f"{bad}:2:3: unexpected ')'"
    bad.write_text("0 0")
    assert cli(capsys, "type", bad)[0] == 2
    assert cli(capsys, "infer", bad)[0] == 2
    bad.write_text("lam x. y")
    assert cli(capsys, "infer", bad)[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["check", str(PROGRAMS / "add.pcf")])  # --range is required
    assert e.value.code == 1
    assert cli(capsys, "parse", "/nonexistent.pcf")[0] == 1
    assert cli(capsys, "check", PROGRAMS / "add.pcf", "--range", "2", "--bound", "(")[0] == 1

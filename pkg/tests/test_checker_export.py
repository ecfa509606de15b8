import itertools
from pathlib import Path

import pytest

from checks import agreement
from dlpcf.checker_export import (check_bound, export_obligations, export_plain, export_view,
                                  smt_name, step_bound, write_exports)
from dlpcf.corpus import BY_NAME
from dlpcf.index_lang import Defined, Evaluator, FunApp, Lit, parse_program
from dlpcf.inference import infer
from sexp_interp import Interp, parse_sexps, with_big_stack

GOLDEN = Path(__file__).parent / "golden" / "twice_succ.smt2"


def exported(name, simplify=True):
    out, comp = infer(BY_NAME[name].term)
    _, prog = export_view(out, comp, simplify)
    return out, comp, prog


def test_golden_file_is_byte_identical():
    out, _, prog = exported("twice_succ")
    assert export_obligations(prog, out.conds, "smtlib2") == GOLDEN.read_text()


def test_export_is_repeatable():
    a = export_obligations(exported("add_nested")[2], exported("add_nested")[0].conds)
    b = export_obligations(exported("add_nested")[2], exported("add_nested")[0].conds)
    assert a == b


@pytest.mark.parametrize("name", ["twice_succ", "add", "parity", "clamp"])
def test_interpreter_agrees_with_evaluator(name):
    out, _, prog = exported(name)
    text = export_obligations(prog, out.conds)
    checked, bad = with_big_stack(agreement, prog, text)
    assert checked > 0
    assert not bad, bad[:3]


def obligation_blocks(text):
    forms = parse_sexps(text)
    blocks, cur = [], None
    for f in forms:
        if f[0] == "push":
            cur = {"consts": [], "asserts": []}
        elif f[0] == "declare-const":
            cur["consts"].append(f[1])
        elif f[0] == "assert" and cur is not None:
            cur["asserts"].append(f[1])
        elif f[0] == "pop":
            blocks.append(cur)
            cur = None
    return blocks


def _no_model(text, span):
    interp = Interp(text)
    found = []
    for k, b in enumerate(obligation_blocks(text)):
        for vals in itertools.product(range(span), repeat=len(b["consts"])):
            env = dict(zip(b["consts"], vals))
            if all(interp.ev(a, env) for a in b["asserts"]):
                found.append((k, env))
                break
    return found


def test_exported_queries_have_no_model_in_range():
    out, _, prog = exported("twice_succ")
    text = export_obligations(prog, out.conds)
    assert len(obligation_blocks(text)) == len(out.conds)
    assert with_big_stack(_no_model, text, 3) == []


def test_false_obligation_has_a_model():
    from dlpcf.dlpcf_types import IneqOb, SideCondition
    from dlpcf.index_lang import Constraint, IVar, app
    prog = parse_program("g(a) = a + 1")
    bad = SideCondition(("a",), (), IneqOb(Constraint(app("g", IVar("a")), "<=", IVar("a"))))
    text = export_obligations(prog, [bad])
    assert with_big_stack(_no_model, text, 3) == [(0, {"a": 0})]


def test_plain_format():
    out, _, prog = exported("twice_succ")
    text = export_plain(prog, out.conds)
    assert text.startswith("# equations\n")
    assert text.count("  prove ") == len(out.conds)
    assert export_obligations(prog, out.conds, "plain") == text
    with pytest.raises(ValueError):
        export_obligations(prog, out.conds, "json")


def test_patterns_compile_to_guards():
    prog = parse_program("h(0) = 1\nh(2a+1) = h(2 * a) + a\nh(2a) = 2\nk(a+3) = a")
    text = export_obligations(prog, [])
    interp = Interp(text)
    ev = Evaluator(prog)
    for n in range(8):
        assert interp.call("h", (n,)) == ev.eval(FunApp("h", (Lit(n),))).n
        ref = ev.eval(FunApp("k", (Lit(n),)))
        assert interp.call("dom_k", (n,)) == isinstance(ref, Defined)


def test_names_are_sanitized():
    assert smt_name("if") == "if_idx"
    assert smt_name("b'") == "b_q"


def test_write_exports(tmp_path):
    out, _, prog = exported("twice_succ")
    paths = write_exports(prog, out.conds, "twice_succ", tmp_path)
    assert [p.name for p in paths] == ["twice_succ.smt2", "twice_succ.obligations.txt"]
    assert paths[0].read_text() == GOLDEN.read_text()


def test_step_bound():
    assert step_bound(13, 0) == 15
    assert step_bound(13, 4) == 75


def test_check_bound_on_add():
    p = BY_NAME["add"]
    out, comp = infer(p.term)
    from dlpcf.index_lang import parse_index
    rep = check_bound(p.term, out, comp, parse_index("1000"), 4)
    assert rep.ok and len(rep.points) == 16
    assert all(pt.instantiation_steps <= pt.weight for pt in rep.points)
    tight = check_bound(p.term, out, comp, parse_index("a1"), 3, cond_range=0)
    assert not tight.ok

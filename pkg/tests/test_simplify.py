import pytest
from hypothesis import given
from hypothesis import strategies as st

from checks import corpus_programs, simplifier_agreement
from dlpcf.corpus import PROGRAMS
from dlpcf.index_lang import (BoundedSum, Forest, FunApp, IVar, Lit, Monus, Plus, Times, app,
                              eval_index, parse_program, RewritingProgram)
from dlpcf.simplify import fold, program_size, simplify_index, simplify_program, surely_defined
from strategies import arith_indexes

CORPUS = list(corpus_programs(PROGRAMS))


@pytest.mark.parametrize("name, prog, protect", CORPUS, ids=[c[0] for c in CORPUS])
def test_preserves_protected_symbols(name, prog, protect):
    checked, bad, simple = simplifier_agreement(prog, protect)
    assert checked > 0
    assert not bad, bad[:5]
    assert program_size(simple) <= program_size(prog)


@pytest.mark.parametrize("name, prog, protect", CORPUS, ids=[c[0] for c in CORPUS])
def test_idempotent(name, prog, protect):
    once = simplify_program(prog, protect)
    assert simplify_program(once, protect) == once


def test_shrinks_the_corpus():
    before = sum(len(p.rules) for _, p, _ in CORPUS)
    after = sum(len(simplify_program(p, k).rules) for _, p, k in CORPUS)
    assert after < before


@given(arith_indexes(), st.integers(0, 5), st.integers(0, 5))
def test_fold_preserves_value(i, a, b):
    rho = {"a": a, "b": b}
    empty = RewritingProgram()
    assert eval_index(fold(i), rho, empty) == eval_index(i, rho, empty)


def test_fold_rules():
    a = IVar("a")
    assert fold(Plus(Lit(2), Lit(3))) == Lit(5)
    assert fold(Monus(Lit(2), Lit(3))) == Lit(0)
    assert fold(Plus(a, Lit(0))) == a
    assert fold(Times(Lit(1), a)) == a
    assert fold(BoundedSum("k", Lit(0), app("g", IVar("k")))) == Lit(0)
    assert fold(BoundedSum("k", Lit(1), app("g", IVar("k")))) == app("g", Lit(0))
    assert fold(app("if", Lit(0), a, Lit(9))) == a
    assert fold(app("if", Lit(2), a, Lit(9))) == Lit(9)
    assert fold(Forest("d", a, Lit(0), app("g", IVar("d")))) == Lit(0)


def test_undefined_arguments_are_not_dropped():
    prog = parse_program("k(x, y) = x\nm(a) = k(a, u(a))\nu(a) = u(a)")
    out = simplify_program(prog, {"m"})
    ev = lambda p: eval_index(app("m", Lit(1)), {}, p)  # noqa: E731
    assert ev(prog) == ev(out)
    assert "k" in out.signature


def test_protected_symbols_are_kept():
    prog = parse_program("a1(x) = b1(x)\nb1(x) = c1(x, 2)\nc1(x, y) = x + y")
    out = simplify_program(prog, {"a1", "b1"})
    assert [r.head for r in out.rules] == ["a1", "b1", "c1"]
    out = simplify_program(prog, {"a1"})
    assert [(r.head, r.rhs) for r in out.rules] == [
        ("a1", FunApp("c1", (IVar("x"), Lit(2)))), ("c1", Plus(IVar("x"), IVar("y")))]


def test_recursive_rules_are_not_inlined():
    prog = parse_program("c(0) = 0\nc(a+1) = c(a)\nd(x) = c(x)")
    out = simplify_program(prog, {"d"})
    assert eval_index(app("d", Lit(4)), {}, out).n == 0
    assert "c" in out.signature


def test_surely_defined():
    assert surely_defined(Plus(IVar("a"), Lit(1)))
    assert not surely_defined(FunApp("g", ()))


def test_simplify_index():
    prog = parse_program("g(x) = x\nh(x) = g(x)")
    assert simplify_index(app("h", Lit(3)), prog) == Lit(3)

import itertools

from hypothesis import given
from hypothesis import strategies as st

from dlpcf.dlpcf_types import (Bang, FreshSupply, Judgement, LArrow, annotate,
                               check_correctly_specified, is_primitive, judgement_symbols,
                               nat, polarity_symbols, show_type, skeleton, subst_type,
                               type_free_ivars)
from dlpcf.index_lang import (FunApp, IVar, Lit, PDouble, Plus, PVar, RewritingProgram, Rule,
                              Times, app, parse_program)
from dlpcf.pcf_syntax import ArrowT, NatT, parse_term


def f(name, *vs):
    return FunApp(name, tuple(IVar(v) for v in vs))


def arrow(b, pot, dom, cod):
    return Bang(b, pot, LArrow(dom, cod))


def types_up_to(depth):
    out = [NatT()]
    for _ in range(depth):
        out = [NatT()] + [ArrowT(x, y) for x, y in itertools.product(out, out)]
    return out


# (Nat{p(a,b,c)} -[c<j(a,b)]-> Nat{q(a,b,c)}) -[b<k(a)]-> Nat{l(a,b,c)} -[c<m(a,b)]-> Nat{n(a,b,c)}
U_TYPE = arrow("b", f("k", "a"),
               arrow("c", f("j", "a", "b"), nat(f("p", "a", "b", "c")), nat(f("q", "a", "b", "c"))),
               arrow("c", f("m", "a", "b"), nat(f("l", "a", "b", "c")), nat(f("n", "a", "b", "c"))))
U_RULES = RewritingProgram({}, (
    Rule("j", (PVar("a"), PVar("b")), Times(Lit(2), f("m", "a", "b"))),
    Rule("n", (PVar("a"), PVar("b"), PVar("c")),
         FunApp("q", (IVar("a"), IVar("b"), Times(Lit(2), IVar("c"))))),
    Rule("p", (PVar("a"), PVar("b"), PDouble("c", 0)),
         FunApp("q", (IVar("a"), IVar("b"), Plus(Times(Lit(2), IVar("c")), Lit(1))))),
    Rule("p", (PVar("a"), PVar("b"), PDouble("c", 1)),
         FunApp("l", (IVar("a"), IVar("b"), Times(Lit(2), IVar("c"))))),
))


def test_polarity_of_nat():
    t = nat(f("i", "a"))
    assert polarity_symbols(t, "+") == {"i"}
    assert polarity_symbols(t, "-") == set()


def test_polarity_of_arrow():
    t = arrow("b", f("h"), nat(f("f", "b")), nat(f("g", "b")))
    assert polarity_symbols(t, "-") == {"h", "f"}
    assert polarity_symbols(t, "+") == {"g"}


def test_polarity_of_worked_example_type():
    assert polarity_symbols(U_TYPE, "-") == {"k", "l", "m", "q"}
    assert polarity_symbols(U_TYPE, "+") == {"j", "p", "n"}


def test_worked_example_is_correctly_specified():
    j = Judgement(("a",), (), (), Lit(0), parse_term("lam x. lam y. x (x y)"), U_TYPE)
    ok, why = check_correctly_specified(j, U_RULES)
    assert ok, why
    bad = U_RULES.add([Rule("q", (PVar("a"), PVar("b"), PVar("c")), Lit(0))])
    ok, why = check_correctly_specified(j, bad)
    assert not ok and "negative" in why
    missing = U_RULES.without(["n"])
    assert not check_correctly_specified(j, missing)[0]


def test_unspecified_positive_is_rejected():
    j = Judgement((), (), (), Lit(0), parse_term("0"), nat(f("i")))
    assert not check_correctly_specified(j, RewritingProgram())[0]
    assert check_correctly_specified(j, parse_program("i() = 0"))[0]


def test_weight_symbols_must_be_specified():
    j = Judgement((), (), (), app("w"), parse_term("0"), nat(f("i")))
    assert not check_correctly_specified(j, parse_program("i() = 0"))[0]
    assert check_correctly_specified(j, parse_program("i() = 0\nw() = 1"))[0]


def test_judgement_flips_context():
    ctx = (("x", nat(f("e", "a"))),)
    j = Judgement(("a",), (), ctx, Lit(0), parse_term("x"), nat(f("r", "a")))
    assert judgement_symbols(j, "-") == {"e"}
    assert judgement_symbols(j, "+") == {"r"}


def test_annotate_is_primitive_with_distinct_symbols():
    for T in types_up_to(3):
        s = FreshSupply()
        ty = annotate(("a", "b"), T, s)
        assert skeleton(ty) == T
        assert is_primitive(ty, ("a", "b"))
        pos, neg = polarity_symbols(ty, "+"), polarity_symbols(ty, "-")
        assert not pos & neg
        assert len(pos | neg) == len(s.arities)


def test_skeleton_round_trip_small_types():
    for T in types_up_to(3)[:200]:
        assert skeleton(annotate((), T, FreshSupply())) == T


@given(st.integers(0, 3))
def test_is_primitive_rejects_reuse_and_wrong_args(n):
    fiv = tuple(f"a{k}" for k in range(n))
    i = f("i", *fiv)
    assert is_primitive(nat(i), fiv)
    assert not is_primitive(arrow("b", f("h", *fiv), nat(f("i", *fiv, "b")),
                                  nat(f("i", *fiv, "b"))), fiv)
    assert not is_primitive(nat(Plus(i, Lit(1))), fiv)


def test_subst_type_respects_binder():
    t = arrow("b", f("h", "a"), nat(f("x", "a", "b")), nat(f("y", "a", "b")))
    out = subst_type(t, {"a": Lit(3), "b": Lit(9)})
    assert out.potential == app("h", Lit(3))
    assert out.inner.dom.lo == FunApp("x", (Lit(3), IVar("b")))
    assert type_free_ivars(t) == {"a"}


def test_show_type():
    t = arrow("b", f("h"), nat(f("f", "b")), nat(f("g", "b")))
    assert show_type(t) == "[b < h()] (Nat{f(b)} -o Nat{g(b)})"


def test_fresh_supply_records_provenance():
    s = FreshSupply()
    a, b = s.symbol(2, ("x", "Ax")), s.symbol(0)
    assert (a, b) == ("f0", "f1")
    assert s.arities == {"f0": 2, "f1": 0}
    assert s.provenance["f0"] == ("x", "Ax")
    assert s.var() == "b0"

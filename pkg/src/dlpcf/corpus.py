"""The program corpus used by the soundness experiments and the tests."""
from __future__ import annotations

from dataclasses import dataclass

from .pcf_syntax import Term, parse_term

ADD = "(fix x. lam y. lam z. ifz y then z else s(x (p(y)) z))"


@dataclass(frozen=True)
class Program:
    name: str
    source: str
    note: str = ""

    @property
    def term(self) -> Term:
        return parse_term(self.source)


PROGRAMS = (
    Program("add", ADD, "addition by recursion on the first argument"),
    Program("double", f"lam x. {ADD} x x"),
    Program("mult", "fix m. lam y. lam z. ifz y then 0 else "
                    f"{ADD} z (m (p(y)) z)", "a fix whose body calls another fix"),
    Program("add_nested", f"lam x. lam y. {ADD} ({ADD} x y) (s(y))", "computes x + 2y + 1"),
    Program("twice_succ", "(lam x. lam y. x (x y)) (lam z. s(z))", "computes y + 2"),
    Program("parity", "fix e. lam n. ifz n then 0 else ifz p(n) then 1 else e (p(p(n)))"),
    Program("clamp", "lam x. ifz x then 1 else ifz p(x) then 2 else ifz p(p(x)) then 3 "
                     "else p(x)", "nested tests without recursion"),
    Program("maptwice", f"lam x. (lam f. lam y. f (f y)) (lam z. {ADD} z z) x",
            "a function argument used twice: 4x"),
    Program("applied_add", "(lam f. ifz (f 0) then 0 else f (f 0)) "
                    f"((lam x. lam y. {ADD} x y) 3)", "closed, evaluates to 6"),
    Program("add23", f"{ADD} 2 3", "closed, evaluates to 5"),
    Program("twice_succ4", "(lam x. lam y. x (x y)) (lam z. s(z)) 4", "closed, evaluates to 6"),
    Program("pred0", "p(ifz 0 then 0 else 5)", "closed, evaluates to 0"),
)

BY_NAME = {p.name: p for p in PROGRAMS}


def get(name: str) -> Program:
    return BY_NAME[name]

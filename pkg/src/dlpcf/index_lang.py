"""Index terms, rewriting programs and their partial semantics.

Evaluation is strict except for the builtin ``if`` symbol, whose branches
are only evaluated when selected.  Every function-symbol unfolding and every
forest node visited costs one unit of fuel.
"""
from __future__ import annotations

import itertools
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

DEFAULT_FUEL = 10 ** 6
IF = "if"


def default_fuel() -> int:
    raw = os.environ.get("DLPCF_FUEL")
    return int(raw) if raw else DEFAULT_FUEL


# ------------------------------------------------------------- indexes

@dataclass(frozen=True)
class IVar:
    a: str


@dataclass(frozen=True)
class Lit:
    n: int


@dataclass(frozen=True)
class Plus:
    l: "Index"
    r: "Index"


@dataclass(frozen=True)
class Monus:
    l: "Index"
    r: "Index"


@dataclass(frozen=True)
class Times:
    l: "Index"
    r: "Index"


@dataclass(frozen=True)
class FunApp:
    f: str
    args: tuple = ()


@dataclass(frozen=True)
class BoundedSum:
    binder: str
    bound: "Index"
    body: "Index"


@dataclass(frozen=True)
class Forest:
    binder: str
    base: "Index"
    count: "Index"
    children: "Index"


Index = Union[IVar, Lit, Plus, Monus, Times, FunApp, BoundedSum, Forest]

ZERO = Lit(0)
ONE = Lit(1)


def app(f: str, *args) -> FunApp:
    return FunApp(f, tuple(IVar(a) if isinstance(a, str) else a for a in args))


def ite(c: Index, zero: Index, succ: Index) -> FunApp:
    return FunApp(IF, (c, zero, succ))


def plus(*xs: Index) -> Index:
    out = xs[0]
    for x in xs[1:]:
        out = Plus(out, x)
    return out


def free_ivars(i: Index) -> frozenset:
    if isinstance(i, IVar):
        return frozenset([i.a])
    if isinstance(i, Lit):
        return frozenset()
    if isinstance(i, (Plus, Monus, Times)):
        return free_ivars(i.l) | free_ivars(i.r)
    if isinstance(i, FunApp):
        out = frozenset()
        for a in i.args:
            out |= free_ivars(a)
        return out
    if isinstance(i, BoundedSum):
        return free_ivars(i.bound) | (free_ivars(i.body) - {i.binder})
    if isinstance(i, Forest):
        return (free_ivars(i.base) | free_ivars(i.count)
                | (free_ivars(i.children) - {i.binder}))
    raise TypeError(i)


def symbols(i: Index) -> frozenset:
    """Function symbols occurring in ``i`` (builtin ``if`` included)."""
    if isinstance(i, (IVar, Lit)):
        return frozenset()
    if isinstance(i, (Plus, Monus, Times)):
        return symbols(i.l) | symbols(i.r)
    if isinstance(i, FunApp):
        out = frozenset([i.f])
        for a in i.args:
            out |= symbols(a)
        return out
    if isinstance(i, BoundedSum):
        return symbols(i.bound) | symbols(i.body)
    if isinstance(i, Forest):
        return symbols(i.base) | symbols(i.count) | symbols(i.children)
    raise TypeError(i)


def index_size(i: Index) -> int:
    if isinstance(i, (IVar, Lit)):
        return 1
    if isinstance(i, (Plus, Monus, Times)):
        return 1 + index_size(i.l) + index_size(i.r)
    if isinstance(i, FunApp):
        return 1 + sum(index_size(a) for a in i.args)
    if isinstance(i, BoundedSum):
        return 1 + index_size(i.bound) + index_size(i.body)
    if isinstance(i, Forest):
        return 1 + index_size(i.base) + index_size(i.count) + index_size(i.children)
    raise TypeError(i)


_fresh_counter = itertools.count()


def _rename_away(binder: str, avoid) -> str:
    base = re.sub(r"'+$", "", binder)
    cand = base + "'"
    while cand in avoid:
        cand += "'"
    return cand


def subst_many(i: Index, mapping: Mapping[str, Index]) -> Index:
    """Simultaneous capture-avoiding substitution."""
    if not mapping:
        return i
    if isinstance(i, IVar):
        return mapping.get(i.a, i)
    if isinstance(i, Lit):
        return i
    if isinstance(i, (Plus, Monus, Times)):
        return type(i)(subst_many(i.l, mapping), subst_many(i.r, mapping))
    if isinstance(i, FunApp):
        return FunApp(i.f, tuple(subst_many(a, mapping) for a in i.args))
    if isinstance(i, BoundedSum):
        binder, body = _under_binder(i.binder, i.body, mapping)
        return BoundedSum(binder, subst_many(i.bound, mapping), body)
    if isinstance(i, Forest):
        binder, children = _under_binder(i.binder, i.children, mapping)
        return Forest(binder, subst_many(i.base, mapping),
                      subst_many(i.count, mapping), children)
    raise TypeError(i)


def _under_binder(binder: str, body: Index, mapping: Mapping[str, Index]):
    inner = {k: v for k, v in mapping.items() if k != binder}
    if not inner:
        return binder, body
    incoming = frozenset()
    for k, v in inner.items():
        if k in free_ivars(body):
            incoming |= free_ivars(v)
    if binder in incoming:
        new = _rename_away(binder, incoming | free_ivars(body) | set(inner))
        body = subst_many(body, {binder: IVar(new)})
        binder = new
    return binder, subst_many(body, inner)


def subst_index(i: Index, a: str, j: Index) -> Index:
    return subst_many(i, {a: j})


# ------------------------------------------------------------ patterns

@dataclass(frozen=True)
class PVar:
    a: str


@dataclass(frozen=True)
class PLit:
    n: int


@dataclass(frozen=True)
class PVarPlus:
    a: str
    k: int


@dataclass(frozen=True)
class PDouble:
    a: str
    parity: int


Pattern = Union[PVar, PLit, PVarPlus, PDouble]


def pattern_vars(p: Pattern) -> tuple:
    return () if isinstance(p, PLit) else (p.a,)


def match_pattern(p: Pattern, n: int):
    """Returns the binding produced by matching ``n`` or None."""
    if isinstance(p, PVar):
        return {p.a: n}
    if isinstance(p, PLit):
        return {} if n == p.n else None
    if isinstance(p, PVarPlus):
        return {p.a: n - p.k} if n >= p.k else None
    if isinstance(p, PDouble):
        return {p.a: n // 2} if n % 2 == p.parity else None
    raise TypeError(p)


def pattern_index(p: Pattern) -> Index:
    """The index a pattern denotes (used by substitution-based tools)."""
    if isinstance(p, PVar):
        return IVar(p.a)
    if isinstance(p, PLit):
        return Lit(p.n)
    if isinstance(p, PVarPlus):
        return Plus(IVar(p.a), Lit(p.k))
    return plus(Times(Lit(2), IVar(p.a)), *([Lit(1)] if p.parity else []))


@dataclass(frozen=True)
class Rule:
    head: str
    patterns: tuple
    rhs: Index

    def __post_init__(self):
        seen = [v for p in self.patterns for v in pattern_vars(p)]
        if len(seen) != len(set(seen)):
            raise ValueError(f"non-linear patterns in rule for {self.head}")
        extra = free_ivars(self.rhs) - set(seen)
        if extra:
            raise ValueError(f"rule for {self.head} has free variables {sorted(extra)}")

    @property
    def all_vars(self) -> bool:
        return all(isinstance(p, PVar) for p in self.patterns)


def var_rule(head: str, params: Iterable[str], rhs: Index) -> Rule:
    return Rule(head, tuple(PVar(a) for a in params), rhs)


IF_RULES = (
    Rule(IF, (PLit(0), PVar("b"), PVar("c")), IVar("b")),
    Rule(IF, (PVarPlus("a", 1), PVar("b"), PVar("c")), IVar("c")),
)


@dataclass(frozen=True)
class RewritingProgram:
    signature: Mapping = field(default_factory=dict)
    rules: tuple = ()

    def __post_init__(self):
        by_head: dict = {}
        for r in self.rules:
            by_head.setdefault(r.head, []).append(r)
        object.__setattr__(self, "_by_head", {k: tuple(v) for k, v in by_head.items()})

    def rules_for(self, f: str) -> tuple:
        return self._by_head.get(f, ())

    def arity(self, f: str) -> int:
        return self.signature[f]

    def is_specified(self, f: str) -> bool:
        return bool(self.rules_for(f))

    def unspecified(self) -> list:
        return [f for f in self.signature if not self.rules_for(f)]

    def completely_specified(self) -> bool:
        return not self.unspecified()

    def add(self, rules: Iterable[Rule] = (), signature: Mapping | None = None) -> "RewritingProgram":
        sig = dict(self.signature)
        sig.update(signature or {})
        new = tuple(rules)
        for r in new:
            sig.setdefault(r.head, len(r.patterns))
        return RewritingProgram(sig, self.rules + new)

    def without(self, heads: Iterable[str]) -> "RewritingProgram":
        drop = set(heads)
        return RewritingProgram(dict(self.signature),
                                tuple(r for r in self.rules if r.head not in drop))

    def restrict(self, keep: Iterable[str]) -> "RewritingProgram":
        keep = set(keep)
        return RewritingProgram({f: n for f, n in self.signature.items() if f in keep},
                                tuple(r for r in self.rules if r.head in keep))


def with_if(prog: RewritingProgram) -> RewritingProgram:
    if prog.rules_for(IF):
        return prog
    return prog.add(IF_RULES, {IF: 3})


def program_from_rules(rules: Iterable[Rule], signature: Mapping | None = None) -> RewritingProgram:
    return RewritingProgram(dict(signature or {})).add(rules)


# ----------------------------------------------------------- semantics

@dataclass(frozen=True)
class Defined:
    n: int


NO_RULE = "NoRule"
FUEL_EXHAUSTED = "FuelExhausted"


@dataclass(frozen=True)
class Undefined:
    reason: str


EvalResult = Union[Defined, Undefined]


class _Undef(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class Evaluator:
    """Evaluates indexes under one program, memoizing symbol applications.

    Results of a symbol application do not depend on the valuation, so one
    evaluator can be reused across valuations.  Each top-level ``eval`` gets
    the full fuel budget; memoized results are reused without charge.
    """

    def __init__(self, prog: RewritingProgram, fuel: int | None = None):
        self.prog = prog
        self.budget = default_fuel() if fuel is None else fuel
        self.fuel = self.budget
        self.memo: dict = {}
        self.active: set = set()
        self.forest_memo: dict = {}

    def eval(self, i: Index, rho: Mapping[str, int] | None = None) -> EvalResult:
        rho = dict(rho or {})
        self.fuel = self.budget
        old = sys.getrecursionlimit()
        if old < 20000:
            sys.setrecursionlimit(20000)
        try:
            return Defined(self._ev(i, rho))
        except _Undef as u:
            return Undefined(u.reason)
        except RecursionError:
            self.active.clear()
            return Undefined(FUEL_EXHAUSTED)

    def _spend(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise _Undef(FUEL_EXHAUSTED)

    def _ev(self, i: Index, rho: dict) -> int:
        if isinstance(i, Lit):
            return i.n
        if isinstance(i, IVar):
            try:
                return rho[i.a]
            except KeyError:
                raise KeyError(f"index variable {i.a!r} has no value") from None
        if isinstance(i, Plus):
            return self._ev(i.l, rho) + self._ev(i.r, rho)
        if isinstance(i, Monus):
            return max(self._ev(i.l, rho) - self._ev(i.r, rho), 0)
        if isinstance(i, Times):
            return self._ev(i.l, rho) * self._ev(i.r, rho)
        if isinstance(i, FunApp):
            if i.f == IF and len(i.args) == 3:
                c = self._ev(i.args[0], rho)
                return self._ev(i.args[1] if c == 0 else i.args[2], rho)
            args = tuple(self._ev(a, rho) for a in i.args)
            return self.call(i.f, args)
        if isinstance(i, BoundedSum):
            bound = self._ev(i.bound, rho)
            inner = dict(rho)
            total = 0
            for k in range(bound):
                inner[i.binder] = k
                total += self._ev(i.body, inner)
            return total
        if isinstance(i, Forest):
            base = self._ev(i.base, rho)
            count = self._ev(i.count, rho)
            return self.forest(base, count, i.children, i.binder, rho)
        raise TypeError(i)

    def call(self, f: str, args: tuple) -> int:
        key = (f, args)
        hit = self.memo.get(key)
        if hit is not None:
            if isinstance(hit, _Undef):
                raise hit
            return hit
        if key in self.active:
            # re-entering the same call can only diverge
            raise _Undef(FUEL_EXHAUSTED)
        self._spend()
        self.active.add(key)
        try:
            for rule in self.prog.rules_for(f):
                if len(rule.patterns) != len(args):
                    continue
                env = {}
                for p, n in zip(rule.patterns, args):
                    b = match_pattern(p, n)
                    if b is None:
                        env = None
                        break
                    env.update(b)
                if env is not None:
                    val = self._ev(rule.rhs, env)
                    self.memo[key] = val
                    return val
            err = _Undef(NO_RULE)
            self.memo[key] = err
            raise err
        finally:
            self.active.discard(key)

    def forest(self, base: int, count: int, children: Index, binder: str, rho: Mapping) -> int:
        """Preorder walk of the forest with an explicit stack."""
        ctx = tuple(sorted((k, v) for k, v in rho.items()
                           if k != binder and k in free_ivars(children)))
        key = (children, binder, ctx, base, count)
        if key in self.forest_memo:
            return self.forest_memo[key]
        env = dict(rho)
        total = 0
        node = base
        pending = [count] if count else []
        while pending:
            pending[-1] -= 1
            if pending[-1] == 0:
                pending.pop()
            self._spend()
            env[binder] = node
            kids = self._ev(children, env)
            total += 1
            node += 1
            if kids:
                pending.append(kids)
        self.forest_memo[key] = total
        return total


def eval_index(i: Index, rho: Mapping[str, int] | None, prog: RewritingProgram,
               fuel: int | None = None) -> EvalResult:
    return Evaluator(prog, fuel).eval(i, rho)


def forest_cardinality(base: int, count: int, children: Index, binder: str,
                       rho: Mapping[str, int] | None, prog: RewritingProgram,
                       fuel: int | None = None) -> EvalResult:
    ev = Evaluator(prog, fuel)
    try:
        return Defined(ev.forest(base, count, children, binder, dict(rho or {})))
    except _Undef as u:
        return Undefined(u.reason)


# ------------------------------------------------------- constraints

RELS = ("<=", "<", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    lhs: Index
    rel: str
    rhs: Index

    def __post_init__(self):
        if self.rel not in RELS:
            raise ValueError(f"unknown relation {self.rel!r}")


def holds(rel: str, x: int, y: int) -> bool:
    return {"<=": x <= y, "<": x < y, "=": x == y, ">=": x >= y}[rel]


def eval_constraint(c: Constraint, rho, ev: Evaluator):
    """True/False when both sides are defined, else the Undefined result."""
    lv = ev.eval(c.lhs, rho)
    if isinstance(lv, Undefined):
        return lv
    rv = ev.eval(c.rhs, rho)
    if isinstance(rv, Undefined):
        return rv
    return holds(c.rel, lv.n, rv.n)


@dataclass(frozen=True)
class JudgementReport:
    status: str  # "holds" | "counterexample" | "inconclusive"
    counterexample: Mapping | None = None
    checked: int = 0
    reason: str = ""


def valuations(fiv, ranges) -> Iterable[dict]:
    fiv = list(fiv)
    if isinstance(ranges, int):
        ranges = {a: ranges for a in fiv}
    spans = [range(ranges[a]) for a in fiv]
    for combo in itertools.product(*spans):
        yield dict(zip(fiv, combo))


def check_semantic_judgement(fiv, Phi, lhs: Index, rel: str, rhs: Index,
                             prog: RewritingProgram, ranges, fuel: int | None = None,
                             evaluator: Evaluator | None = None) -> JudgementReport:
    """Exhaustive validity check of ``fiv; Phi |= lhs rel rhs`` within ranges."""
    goal = Constraint(lhs, rel, rhs)
    return check_constraints(fiv, Phi, [goal], prog, ranges, fuel, evaluator)


def check_constraints(fiv, Phi, goals, prog, ranges, fuel=None, evaluator=None,
                      defined=()) -> JudgementReport:
    """Exhaustive check over the valuations within ranges that satisfy Phi.

    Valuations are enumerated variable by variable; a constraint is tested as
    soon as its variables are assigned, and ``v < X`` constraints narrow the
    range of v, so unsatisfiable prefixes are pruned.
    """
    ev = evaluator or Evaluator(prog, fuel)
    fiv = list(fiv)
    if isinstance(ranges, int):
        ranges = {a: ranges for a in fiv}
    pos = {a: k for k, a in enumerate(fiv)}
    ready: list = [[] for _ in range(max(len(fiv), 1))]
    uppers: list = [[] for _ in fiv]
    for c in Phi:
        vs = free_ivars(c.lhs) | free_ivars(c.rhs)
        last = max((pos[v] for v in vs if v in pos), default=-1)
        if (isinstance(c.lhs, IVar) and c.rel == "<" and c.lhs.a in pos
                and pos[c.lhs.a] == last and c.lhs.a not in free_ivars(c.rhs)):
            uppers[last].append(c.rhs)
        else:
            ready[max(last, 0)].append(c)
    state = {"inconclusive": None, "n": 0}

    def fail(reason, rho):
        if reason == FUEL_EXHAUSTED:
            if state["inconclusive"] is None:
                state["inconclusive"] = dict(rho)
            return None
        return JudgementReport("counterexample", dict(rho), state["n"], reason)

    def leaf(rho):
        state["n"] += 1
        for d in defined:
            r = ev.eval(d, rho)
            if isinstance(r, Undefined):
                out = fail(r.reason, rho)
                if out:
                    return out
        for g in goals:
            r = eval_constraint(g, rho, ev)
            if isinstance(r, Undefined):
                out = fail(r.reason, rho)
                if out:
                    return out
            elif not r:
                return JudgementReport("counterexample", dict(rho), state["n"], "violated")
        return None

    def phi_ok(k, rho):
        for c in ready[k]:
            r = eval_constraint(c, rho, ev)
            if isinstance(r, Undefined):
                if r.reason == FUEL_EXHAUSTED and state["inconclusive"] is None:
                    state["inconclusive"] = dict(rho)
                return False
            if not r:
                return False
        return True

    def walk(k, rho):
        if k == len(fiv):
            return leaf(rho)
        a = fiv[k]
        hi = ranges[a]
        for u in uppers[k]:
            r = ev.eval(u, rho)
            if isinstance(r, Undefined):
                if r.reason == FUEL_EXHAUSTED and state["inconclusive"] is None:
                    state["inconclusive"] = dict(rho)
                return None
            hi = min(hi, r.n)
        for v in range(hi):
            rho[a] = v
            if phi_ok(k, rho):
                out = walk(k + 1, rho)
                if out:
                    return out
        rho.pop(a, None)
        return None

    if not fiv:
        out = leaf({}) if phi_ok(0, {}) else None
    else:
        out = walk(0, {})
    if out:
        return out
    if state["inconclusive"] is not None:
        return JudgementReport("inconclusive", state["inconclusive"], state["n"], FUEL_EXHAUSTED)
    return JudgementReport("holds", None, state["n"])


# -------------------------------------------------------- text format

def show_index(i: Index) -> str:
    return _show(i, 0)


def _show(i: Index, prec: int) -> str:
    # prec: 0 = sum level, 1 = product level, 2 = atom
    if isinstance(i, IVar):
        return i.a
    if isinstance(i, Lit):
        return str(i.n)
    if isinstance(i, (Plus, Monus)):
        op = "+" if isinstance(i, Plus) else "-"
        s = f"{_show(i.l, 0)} {op} {_show(i.r, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(i, Times):
        s = f"{_show(i.l, 1)} * {_show(i.r, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(i, FunApp):
        return f"{i.f}({', '.join(_show(a, 0) for a in i.args)})"
    if isinstance(i, BoundedSum):
        s = f"sum({i.binder} < {_show(i.bound, 0)}) {_show(i.body, 2)}"
        return f"({s})" if prec > 0 else s
    if isinstance(i, Forest):
        return (f"forest({i.binder}; {_show(i.base, 0)}, {_show(i.count, 0)}, "
                f"{_show(i.children, 0)})")
    raise TypeError(i)


def show_pattern(p: Pattern) -> str:
    if isinstance(p, PVar):
        return p.a
    if isinstance(p, PLit):
        return str(p.n)
    if isinstance(p, PVarPlus):
        return f"{p.a}+{p.k}"
    return f"2{p.a}" + ("+1" if p.parity else "")


def show_rule(r: Rule) -> str:
    return f"{r.head}({', '.join(show_pattern(p) for p in r.patterns)}) = {show_index(r.rhs)}"


def show_program(prog: RewritingProgram) -> str:
    return "\n".join(show_rule(r) for r in prog.rules)


def show_constraint(c: Constraint) -> str:
    return f"{show_index(c.lhs)} {c.rel} {show_index(c.rhs)}"


_ITOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(<=|>=|[-+*(),;<=]))")


class IndexParseError(Exception):
    pass


class _IParser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _ITOK.match(text, pos)
            if not m or m.end() == pos:
                raise IndexParseError(f"bad index syntax near {text[pos:]!r}")
            num, ident, sym = m.groups()
            self.toks.append(("num", int(num)) if num else ("id", ident) if ident else ("sym", sym))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] == "eof" or (kind and tok[0] != kind) or (val is not None and tok[1] != val):
            raise IndexParseError(f"expected {val or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def at_end(self):
        return self.i >= len(self.toks)

    def expr(self) -> Index:
        left = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            right = self.term()
            left = Plus(left, right) if op == "+" else Monus(left, right)
        return left

    def term(self) -> Index:
        left = self.atom()
        while self.peek() == ("sym", "*"):
            self.take()
            left = Times(left, self.atom())
        return left

    def atom(self) -> Index:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Lit(val)
        if kind == "sym" and val == "(":
            self.take()
            e = self.expr()
            self.take("sym", ")")
            return e
        if kind == "id":
            self.take()
            if val == "sum" and self.peek() == ("sym", "("):
                self.take()
                binder = self.take("id")[1]
                self.take("sym", "<")
                bound = self.expr()
                self.take("sym", ")")
                return BoundedSum(binder, bound, self.atom())
            if val == "forest" and self.peek() == ("sym", "("):
                self.take()
                binder = self.take("id")[1]
                self.take("sym", ";")
                base = self.expr()
                self.take("sym", ",")
                count = self.expr()
                self.take("sym", ",")
                kids = self.expr()
                self.take("sym", ")")
                return Forest(binder, base, count, kids)
            if self.peek() == ("sym", "("):
                self.take()
                args = []
                if self.peek() != ("sym", ")"):
                    args.append(self.expr())
                    while self.peek() == ("sym", ","):
                        self.take()
                        args.append(self.expr())
                self.take("sym", ")")
                return FunApp(val, tuple(args))
            return IVar(val)
        raise IndexParseError(f"unexpected {val!r}")


def parse_index(text: str) -> Index:
    p = _IParser(text)
    e = p.expr()
    if not p.at_end():
        raise IndexParseError(f"trailing input {p.peek()[1]!r}")
    return e


_PAT = re.compile(r"^\s*(?:(\d+)|2([A-Za-z_][A-Za-z0-9_']*)(\s*\+\s*1)?|"
                  r"([A-Za-z_][A-Za-z0-9_']*)(?:\s*\+\s*(\d+))?)\s*$")


def parse_pattern(text: str) -> Pattern:
    m = _PAT.match(text)
    if not m:
        raise IndexParseError(f"bad pattern {text!r}")
    lit, dbl, odd, var, k = m.groups()
    if lit is not None:
        return PLit(int(lit))
    if dbl is not None:
        return PDouble(dbl, 1 if odd else 0)
    if k is not None:
        return PVarPlus(var, int(k))
    return PVar(var)


def parse_rule(line: str) -> Rule:
    m = re.match(r"^\s*([A-Za-z_][A-Za-z0-9_']*)\s*\((.*?)\)\s*=(?!=)(.*)$", line)
    if not m:
        raise IndexParseError(f"bad rule {line!r}")
    head, pats, rhs = m.groups()
    patterns = tuple(parse_pattern(p) for p in pats.split(",")) if pats.strip() else ()
    return Rule(head, patterns, parse_index(rhs))


def parse_program(text: str) -> RewritingProgram:
    rules = [parse_rule(ln) for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    return program_from_rules(rules)

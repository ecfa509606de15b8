"""Numeric checking of side conditions and complexity bounds, and export of
(program, conditions) to SMT-LIB2 or a plain text format."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

from .dlpcf_types import DefinedOb, IneqOb, show_condition
from .index_lang import (IF, BoundedSum, Constraint, Defined, Evaluator, Forest, FunApp, Index,
                         IVar, Lit, Monus, PDouble, Plus, PLit, PVar, PVarPlus, RewritingProgram,
                         Times, free_ivars, show_constraint, show_program)
from .inference import Completion, InferenceOutput, check_soundness_contract, interface_symbols
from .machines import Timeout, run
from .pcf_syntax import Term, term_size
from .simplify import simplify_program


# ------------------------------------------------------------ bound check

@dataclass(frozen=True)
class BoundPoint:
    args: tuple
    weight: int | None
    bound: int | None
    budget: int | None  # value of p at args
    total_steps: int | None
    instantiation_steps: int | None
    ok_bound: bool
    ok_machine: bool


@dataclass(frozen=True)
class BoundReport:
    conditions: str  # valid | counterexample | inconclusive
    points: tuple
    size: int

    @property
    def ok(self) -> bool:
        return self.conditions == "valid" and all(p.ok_bound and p.ok_machine
                                                  for p in self.points)


def step_bound(size: int, weight: int) -> int:
    return (size + 2) * (weight + 1)


def check_bound(t: Term, out: InferenceOutput, completion: Completion, p: Index | None,
                ranges: int, fuel: int | None = None, machine_fuel: int = 10 ** 6,
                cond_range: int | None = None) -> BoundReport:
    """Side conditions, the user bound ``(K+1)(|t|+2) <= p`` and the machine
    cross-validation on every argument tuple in ``[0, ranges)^n``."""
    soundness = check_soundness_contract(out, completion,
                                         cond_range if cond_range is not None else ranges, fuel)
    ev = Evaluator(completion.program, fuel)
    size = term_size(t)
    pts = []
    for args in itertools.product(range(ranges), repeat=len(completion.fiv)):
        rho = dict(zip(completion.fiv, args))
        w = ev.eval(out.judgement.weight, rho)
        K = w.n if isinstance(w, Defined) else None
        budget = None
        if p is not None:
            pv = ev.eval(p, rho)
            budget = pv.n if isinstance(pv, Defined) else None
        bound = step_bound(size, K) if K is not None else None
        ok_bound = p is None or (bound is not None and budget is not None and bound <= budget)
        try:
            r = run(t, "cek", machine_fuel, args=args)
            total, inst = r.counters.total, r.counters.instantiation
            ok_machine = K is not None and inst <= K and total <= bound
        except Timeout:
            total = inst = None
            ok_machine = False
        pts.append(BoundPoint(args, K, bound, budget, total, inst, ok_bound, ok_machine))
    return BoundReport(soundness.status, tuple(pts), size)


# ------------------------------------------------------------ SMT-LIB2

class UnsupportedPattern(Exception):
    pass


def smt_name(x: str) -> str:
    if x == IF:
        return "if_idx"
    return x.replace("'", "_q")


class _Smt:
    def __init__(self):
        self.aux: list = []  # (name, params, body, dom_body)
        self.cache: dict = {}

    def value(self, i: Index) -> str:
        if isinstance(i, IVar):
            return smt_name(i.a)
        if isinstance(i, Lit):
            return str(i.n)
        if isinstance(i, Plus):
            return f"(+ {self.value(i.l)} {self.value(i.r)})"
        if isinstance(i, Monus):
            return f"(monus {self.value(i.l)} {self.value(i.r)})"
        if isinstance(i, Times):
            return f"(* {self.value(i.l)} {self.value(i.r)})"
        if isinstance(i, FunApp):
            if i.f == IF and len(i.args) == 3:
                c, z, s = (self.value(a) for a in i.args)
                return f"(ite (= {c} 0) {z} {s})"
            return _call(smt_name(i.f), [self.value(a) for a in i.args])
        name, fv = self.helper(i)
        extra = "".join(" " + smt_name(v) for v in fv)
        if isinstance(i, BoundedSum):
            return f"({name} {self.value(i.bound)}{extra})"
        return f"({name} {self.value(i.base)} {self.value(i.count)}{extra})"

    def dom(self, i: Index) -> str:
        parts = self._dom(i)
        if not parts:
            return "true"
        return parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"

    def _dom(self, i: Index) -> list:
        if isinstance(i, (IVar, Lit)):
            return []
        if isinstance(i, (Plus, Monus, Times)):
            return self._dom(i.l) + self._dom(i.r)
        if isinstance(i, FunApp):
            if i.f == IF and len(i.args) == 3:
                c = i.args[0]
                lazy = f"(ite (= {self.value(c)} 0) {self.dom(i.args[1])} {self.dom(i.args[2])})"
                return self._dom(c) + [lazy]
            out = [p for a in i.args for p in self._dom(a)]
            return out + [_call("dom_" + smt_name(i.f), [self.value(a) for a in i.args])]
        name, fv = self.helper(i)
        extra = "".join(" " + smt_name(v) for v in fv)
        if isinstance(i, BoundedSum):
            return self._dom(i.bound) + [f"(dom_{name} {self.value(i.bound)}{extra})"]
        return (self._dom(i.base) + self._dom(i.count)
                + [f"(dom_{name} {self.value(i.base)} {self.value(i.count)}{extra})"])

    def helper(self, i: Index):
        """Auxiliary recursive function for a bounded sum or a forest."""
        if i in self.cache:
            return self.cache[i]
        n = len(self.cache)
        if isinstance(i, BoundedSum):
            fv = sorted(free_ivars(i.body) - {i.binder})
            name = f"sum_{n}"
            self.cache[i] = (name, fv)
            a = smt_name(i.binder)
            call = f"({name} (- n 1){''.join(' ' + smt_name(v) for v in fv)})"
            body = (f"(ite (<= n 0) 0 (+ {call} (let (({a} (- n 1))) "
                    f"{self.value(i.body)})))")
            dom = (f"(ite (<= n 0) true (and (dom_{call[1:]} (let (({a} (- n 1))) "
                   f"{self.dom(i.body)})))")
            self.aux.append((name, ["n"] + [smt_name(v) for v in fv], body, dom))
            return self.cache[i]
        fv = sorted(free_ivars(i.children) - {i.binder})
        name = f"forest_{n}"
        self.cache[i] = (name, fv)
        extra = "".join(" " + smt_name(v) for v in fv)
        a = smt_name(i.binder)
        prev = f"({name} i (- j 1){extra})"
        kids = f"(let (({a} (+ i {prev}))) {self.value(i.children)})"
        rest = f"({name} (+ i 1 {prev}) {kids}{extra})"
        body = f"(ite (<= j 0) 0 (+ {prev} 1 {rest}))"
        kdom = f"(let (({a} (+ i {prev}))) {self.dom(i.children)})"
        dom = (f"(ite (<= j 0) true (and (dom_{prev[1:]} {kdom} "
               f"(dom_{rest[1:]}))")
        self.aux.append((name, ["i", "j"] + [smt_name(v) for v in fv], body, dom))
        return self.cache[i]


def _call(f: str, args) -> str:
    return f"({f} {' '.join(args)})" if args else f


def _pattern(p, x: str):
    """(guard, binding) for one argument pattern."""
    if isinstance(p, PVar):
        return None, (smt_name(p.a), x)
    if isinstance(p, PLit):
        return f"(= {x} {p.n})", None
    if isinstance(p, PVarPlus):
        return f"(>= {x} {p.k})", (smt_name(p.a), f"(- {x} {p.k})")
    if isinstance(p, PDouble):
        return f"(= (mod {x} 2) {p.parity})", (smt_name(p.a), f"(div {x} 2)")
    raise UnsupportedPattern(repr(p))


def _compile_symbol(f: str, arity: int, prog: RewritingProgram, smt: _Smt):
    params = [f"x{k}" for k in range(arity)]
    val, dom = "0", "false"
    for r in reversed(prog.rules_for(f)):
        guards, binds = [], []
        for p, x in zip(r.patterns, params):
            g, b = _pattern(p, x)
            if g:
                guards.append(g)
            if b:
                binds.append(b)
        rv, rd = smt.value(r.rhs), smt.dom(r.rhs)
        if binds:
            lets = " ".join(f"({n} {e})" for n, e in binds)
            rv, rd = f"(let ({lets}) {rv})", f"(let ({lets}) {rd})"
        if not guards:
            val, dom = rv, rd
        else:
            g = guards[0] if len(guards) == 1 else f"(and {' '.join(guards)})"
            val, dom = f"(ite {g} {rv} {val})", f"(ite {g} {rd} {dom})"
    return params, val, dom


def _symbol_order(prog: RewritingProgram, conds) -> list:
    """Symbols with rules, by first use: conditions first, then rule bodies."""
    order: list = []
    seen: set = set()

    def visit(i: Index):
        for f in _symbols_in_order(i):
            if f not in seen and prog.rules_for(f):
                seen.add(f)
                order.append(f)

    for c in conds:
        for k in c.ictx:
            visit(k.lhs)
            visit(k.rhs)
        visit(c.body.i if isinstance(c.body, DefinedOb) else c.body.c.lhs)
        if isinstance(c.body, IneqOb):
            visit(c.body.c.rhs)
    k = 0
    while k < len(order):
        for r in prog.rules_for(order[k]):
            visit(r.rhs)
        k += 1
    for f in prog.signature:
        if f not in seen and prog.rules_for(f):
            seen.add(f)
            order.append(f)
            for r in prog.rules_for(f):
                visit(r.rhs)
    return order


def _symbols_in_order(i: Index):
    if isinstance(i, FunApp):
        yield i.f
        for a in i.args:
            yield from _symbols_in_order(a)
    elif isinstance(i, (Plus, Monus, Times)):
        yield from _symbols_in_order(i.l)
        yield from _symbols_in_order(i.r)
    elif isinstance(i, BoundedSum):
        yield from _symbols_in_order(i.bound)
        yield from _symbols_in_order(i.body)
    elif isinstance(i, Forest):
        yield from _symbols_in_order(i.base)
        yield from _symbols_in_order(i.count)
        yield from _symbols_in_order(i.children)


_REL = {"<=": "<=", "<": "<", "=": "=", ">=": ">="}


def _constraint(c: Constraint, smt: _Smt) -> str:
    rel = f"({_REL[c.rel]} {smt.value(c.lhs)} {smt.value(c.rhs)})"
    doms = [d for d in (smt.dom(c.lhs), smt.dom(c.rhs)) if d != "true"]
    return f"(and {' '.join(doms)} {rel})" if doms else rel


def export_smtlib2(prog: RewritingProgram, conds) -> str:
    smt = _Smt()
    order = _symbol_order(prog, conds)
    funs = []
    for f in order:
        arity = len(prog.rules_for(f)[0].patterns)
        funs.append((f, *_compile_symbol(f, arity, prog, smt)))
    goals = []
    for c in conds:
        hyps = [_constraint(k, smt) for k in c.ictx]
        if isinstance(c.body, DefinedOb):
            goal = smt.dom(c.body.i)
        else:
            goal = _constraint(c.body.c, smt)
        goals.append((c, hyps, goal))

    out = ["; index functions over the naturals, encoded on Int",
           "(set-logic ALL)",
           "(define-fun monus ((x Int) (y Int)) Int (ite (>= x y) (- x y) 0))"]
    decls, bodies = [], []
    for f, params, val, dom in funs:
        ps = " ".join(f"({p} Int)" for p in params)
        decls.append(f"({smt_name(f)} ({ps}) Int)")
        bodies.append(val)
        decls.append(f"(dom_{smt_name(f)} ({ps}) Bool)")
        bodies.append(dom)
    for name, params, val, dom in smt.aux:
        ps = " ".join(f"({p} Int)" for p in params)
        decls.append(f"({name} ({ps}) Int)")
        bodies.append(val)
        decls.append(f"(dom_{name} ({ps}) Bool)")
        bodies.append(dom)
    if decls:
        out.append("(define-funs-rec (")
        out += [f"  {d}" for d in decls]
        out.append(") (")
        out += [f"  {b}" for b in bodies]
        out.append("))")
    for k, (c, hyps, goal) in enumerate(goals):
        out.append(f"; obligation {k}: {show_condition(c)}")
        out.append("(push 1)")
        for v in c.fiv:
            out.append(f"(declare-const {smt_name(v)} Int)")
            out.append(f"(assert (>= {smt_name(v)} 0))")
        for h in hyps:
            out.append(f"(assert {h})")
        out.append(f"(assert (not {goal}))")
        out.append("(check-sat)")
        out.append("(pop 1)")
    return "\n".join(out) + "\n"


def export_plain(prog: RewritingProgram, conds) -> str:
    out = ["# equations", show_program(prog), "", "# obligations"]
    for k, c in enumerate(conds):
        out.append(f"[{k}]")
        out.append("  for all " + (", ".join(c.fiv) if c.fiv else "(no variables)"))
        for h in c.ictx:
            out.append(f"  assuming {show_constraint(h)}")
        out.append("  prove " + show_condition(c).split("|= ", 1)[1])
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


def export_obligations(prog: RewritingProgram, conds, format: str = "smtlib2") -> str:
    if format == "smtlib2":
        return export_smtlib2(prog, conds)
    if format == "plain":
        return export_plain(prog, conds)
    raise ValueError(f"unknown format {format!r}")


def export_view(out: InferenceOutput, comp: Completion, simplify: bool = True):
    """(raw, completed) programs as shown and exported: the simplifier keeps
    the symbols of the judgement, its conditions and the result."""
    raw, completed = out.program, comp.program
    if simplify:
        keep = interface_symbols(out, comp)
        raw = simplify_program(raw, keep)
        completed = simplify_program(completed, keep)
    return raw, completed


def write_exports(prog: RewritingProgram, conds, name: str, directory=".") -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = [d / f"{name}.smt2", d / f"{name}.obligations.txt"]
    paths[0].write_text(export_smtlib2(prog, conds))
    paths[1].write_text(export_plain(prog, conds))
    return paths

"""KAM (call-by-name) and CEK (call-by-value) machines with step counters."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .pcf_syntax import (App, Fix, Ifz, Lam, Num, Pred, Succ, Term, Var, apply_args,
                         is_value, pretty)

# ------------------------------------------------------------ data


@dataclass(frozen=True)
class Env:
    """Persistent environment: one binding in front of a shared tail."""
    name: str
    value: "Closure"
    rest: Optional["Env"] = None

    def lookup(self, x: str) -> "Closure":
        e = self
        while e is not None:
            if e.name == x:
                return e.value
            e = e.rest
        raise Stuck(f"unbound variable {x}")

    def items(self):
        seen = set()
        e = self
        while e is not None:
            if e.name not in seen:
                seen.add(e.name)
                yield e.name, e.value
            e = e.rest


EMPTY: Optional[Env] = None


@dataclass(frozen=True)
class Closure:
    term: Term
    env: Optional[Env] = None


@dataclass(frozen=True)
class Arg:
    clo: Closure


@dataclass(frozen=True)
class Fun:
    clo: Closure


@dataclass(frozen=True)
class SuccF:
    pass


@dataclass(frozen=True)
class PredF:
    pass


@dataclass(frozen=True)
class IfzF:
    zero: Term
    succ: Term
    env: Optional[Env] = None


@dataclass(frozen=True)
class Stack:
    frame: object
    rest: Optional["Stack"] = None

    def frames(self):
        s = self
        while s is not None:
            yield s.frame
            s = s.rest


@dataclass(frozen=True)
class Process:
    clo: Closure
    stack: Optional[Stack] = None


@dataclass
class Counters:
    """``instantiation`` counts lookups of functional values plus fix
    unfoldings; ``lookups`` counts every lookup plus fix unfoldings."""
    total: int = 0
    instantiation: int = 0
    lookups: int = 0


@dataclass(frozen=True)
class RunResult:
    value: Closure
    counters: Counters


class Stuck(Exception):
    pass


class Timeout(Exception):
    def __init__(self, fuel: int, counters: Counters):
        super().__init__(f"no value within {fuel} steps")
        self.fuel = fuel
        self.counters = counters


LOOKUP = "lookup"
UNFOLD = "unfold"
INSTANTIATION = frozenset({LOOKUP, UNFOLD})


def _push(frame, stack):
    return Stack(frame, stack)


# ------------------------------------------------------------ KAM

def kam_step(p: Process):
    """One call-by-name transition; returns (process, kind)."""
    t, env = p.clo.term, p.clo.env
    st = p.stack
    if isinstance(t, App):
        return Process(Closure(t.fun, env), _push(Arg(Closure(t.arg, env)), st)), "app"
    if isinstance(t, Lam):
        if st is None or not isinstance(st.frame, Arg):
            raise Stuck("abstraction without argument")
        return Process(Closure(t.body, Env(t.binder, st.frame.clo, env)), st.rest), "beta"
    if isinstance(t, Fix):
        return Process(Closure(t.body, Env(t.binder, p.clo, env)), st), UNFOLD
    if isinstance(t, Var):
        return Process(env.lookup(t.name) if env else _unbound(t), st), LOOKUP
    return _common(p)


def _unbound(t):
    raise Stuck(f"unbound variable {t.name}")


def _common(p: Process):
    t, env = p.clo.term, p.clo.env
    st = p.stack
    if isinstance(t, Ifz):
        return Process(Closure(t.scrutinee, env),
                       _push(IfzF(t.zero_branch, t.succ_branch, env), st)), "ifz"
    if isinstance(t, Succ):
        return Process(Closure(t.arg, env), _push(SuccF(), st)), "succ"
    if isinstance(t, Pred):
        return Process(Closure(t.arg, env), _push(PredF(), st)), "pred"
    if isinstance(t, Num):
        if st is None:
            raise Stuck("terminal")
        f = st.frame
        if isinstance(f, IfzF):
            branch = f.zero if t.n == 0 else f.succ
            return Process(Closure(branch, f.env), st.rest), "branch"
        if isinstance(f, SuccF):
            return Process(Closure(Num(t.n + 1)), st.rest), "s"
        if isinstance(f, PredF):
            return Process(Closure(Num(max(t.n - 1, 0))), st.rest), "p"
        raise Stuck(f"numeral against {type(f).__name__}")
    raise Stuck(f"no rule for {pretty(t)}")


# ------------------------------------------------------------ CEK

def cek_step(p: Process):
    """One call-by-value transition; returns (process, kind)."""
    t, env = p.clo.term, p.clo.env
    st = p.stack
    if isinstance(t, App):
        return Process(Closure(t.fun, env), _push(Arg(Closure(t.arg, env)), st)), "app"
    if isinstance(t, Var):
        return Process(env.lookup(t.name) if env else _unbound(t), st), LOOKUP
    if is_value(t) and st is not None:
        f = st.frame
        if isinstance(f, Arg):
            return Process(f.clo, _push(Fun(p.clo), st.rest)), "arg"
        if isinstance(f, Fun):
            fn = f.clo
            if isinstance(fn.term, Lam):
                return Process(Closure(fn.term.body, Env(fn.term.binder, p.clo, fn.env)),
                               st.rest), "beta"
            if isinstance(fn.term, Fix):
                body = Closure(fn.term.body, Env(fn.term.binder, fn, fn.env))
                return Process(body, _push(Arg(p.clo), st.rest)), UNFOLD
            raise Stuck("applying a numeral")
    return _common(p)


# ------------------------------------------------------------ driver

def is_terminal(p: Process) -> bool:
    return p.stack is None and is_value(p.clo.term)


def _count(c: Counters, kind: str, p: Process, nxt: Process):
    c.total += 1
    if kind in INSTANTIATION:
        c.lookups += 1
        if kind == UNFOLD or not isinstance(nxt.clo.term, Num):
            c.instantiation += 1


def run(t: Term, machine: str = "cek", fuel: int = 10 ** 6,
        trace: Callable[[Process, str], None] | None = None, args=()) -> RunResult:
    step = {"cek": cek_step, "kam": kam_step}[machine]
    p = Process(Closure(apply_args(t, args)))
    c = Counters()
    while not is_terminal(p):
        if c.total >= fuel:
            raise Timeout(fuel, c)
        nxt, kind = step(p)
        _count(c, kind, p, nxt)
        if trace:
            trace(p, kind)
        p = nxt
    if trace:
        trace(p, "value")
    return RunResult(p.clo, c)


def numeral(r: RunResult) -> int | None:
    return r.value.term.n if isinstance(r.value.term, Num) else None


# ------------------------------------------------------------ printing

def show_env(env: Optional[Env]) -> str:
    if env is None:
        return ""
    return "; ".join(f"{x} := {show_closure(c)}" for x, c in env.items())


def show_closure(c: Closure) -> str:
    if c.env is None or isinstance(c.term, Num):
        return f"<{pretty(c.term)}>"
    return f"<{pretty(c.term)} | {show_env(c.env)}>"


def show_frame(f) -> str:
    if isinstance(f, Arg):
        return f"arg{show_closure(f.clo)}"
    if isinstance(f, Fun):
        return f"fun{show_closure(f.clo)}"
    if isinstance(f, SuccF):
        return "s"
    if isinstance(f, PredF):
        return "p"
    return f"ifz({pretty(f.zero)}, {pretty(f.succ)})" + (
        f"[{show_env(f.env)}]" if f.env is not None else "")


def show_stack(s: Optional[Stack]) -> str:
    if s is None:
        return "e"
    return " . ".join([show_frame(f) for f in s.frames()] + ["e"])


def show_process(p: Process) -> str:
    return f"{show_closure(p.clo)} * {show_stack(p.stack)}"


def trace_lines(t: Term, machine: str = "cek", fuel: int = 10 ** 6, args=()):
    lines: list = []

    def cb(p, kind):
        lines.append(f"{show_process(p)}    [{kind}]")

    r = run(t, machine, fuel, cb, args)
    return lines, r

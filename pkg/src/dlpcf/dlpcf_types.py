"""Call-by-value linear dependent types: syntax, skeletons, annotation, polarity."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Union

from .index_lang import (IF, Constraint, FunApp, Index, IVar, RewritingProgram,
                         free_ivars, show_constraint, show_index, subst_many, symbols)
from .pcf_syntax import ArrowT, NatT, PcfType, Term, pretty

__all__ = [
    "LArrow", "Bang", "NatIdx", "nat", "Judgement", "Constraint", "SideCondition",
    "DefinedOb", "IneqOb", "FreshSupply", "skeleton", "annotate", "annotate_linear",
    "polarity_symbols", "judgement_symbols", "check_correctly_specified",
    "show_type", "show_judgement", "show_condition", "is_primitive", "subst_type",
    "type_indexes", "type_free_ivars",
]


@dataclass(frozen=True)
class LArrow:
    dom: "ModalType"
    cod: "ModalType"


@dataclass(frozen=True)
class Bang:
    binder: str
    potential: Index
    inner: LArrow


@dataclass(frozen=True)
class NatIdx:
    lo: Index
    hi: Index

    @property
    def singleton(self) -> bool:
        return self.lo == self.hi


ModalType = Union[Bang, NatIdx]
LinearType = LArrow
AnyType = Union[Bang, NatIdx, LArrow]


def nat(i: Index) -> NatIdx:
    return NatIdx(i, i)


@dataclass(frozen=True)
class DefinedOb:
    i: Index


@dataclass(frozen=True)
class IneqOb:
    c: Constraint


@dataclass(frozen=True)
class SideCondition:
    fiv: tuple
    ictx: tuple
    body: Union[DefinedOb, IneqOb]


@dataclass(frozen=True)
class Judgement:
    fiv: tuple
    ictx: tuple
    ctx: tuple  # ordered (name, ModalType) pairs
    weight: Index
    subject: Term
    ty: AnyType


# --------------------------------------------------------------- fresh names

@dataclass
class FreshSupply:
    """Single-owner supply of fresh symbols and index variables."""
    sym_prefix: str = "f"
    var_prefix: str = "b"
    provenance: dict = field(default_factory=dict)
    arities: dict = field(default_factory=dict)
    _syms: itertools.count = field(default_factory=itertools.count)
    _vars: itertools.count = field(default_factory=itertools.count)

    def symbol(self, arity: int, origin: tuple = ("", "")) -> str:
        name = f"{self.sym_prefix}{next(self._syms)}"
        self.provenance[name] = origin
        self.arities[name] = arity
        return name

    def var(self) -> str:
        return f"{self.var_prefix}{next(self._vars)}"


def skeleton(ty: AnyType) -> PcfType:
    if isinstance(ty, NatIdx):
        return NatT()
    if isinstance(ty, Bang):
        return skeleton(ty.inner)
    if isinstance(ty, LArrow):
        return ArrowT(skeleton(ty.dom), skeleton(ty.cod))
    raise TypeError(ty)


def annotate(fiv: tuple, T: PcfType, supply: FreshSupply, origin=("", "")) -> AnyType:
    """A primitive modal type for ``fiv`` with skeleton T and fresh symbols."""
    fiv = tuple(fiv)
    if isinstance(T, NatT):
        return nat(FunApp(supply.symbol(len(fiv), origin), tuple(IVar(a) for a in fiv)))
    b = supply.var()
    pot = FunApp(supply.symbol(len(fiv), origin), tuple(IVar(a) for a in fiv))
    return Bang(b, pot, annotate_linear(fiv + (b,), T, supply, origin))


def annotate_linear(fiv: tuple, T: PcfType, supply: FreshSupply, origin=("", "")) -> LArrow:
    if not isinstance(T, ArrowT):
        raise TypeError("linear types have arrow skeletons")
    return LArrow(annotate(fiv, T.dom, supply, origin), annotate(fiv, T.cod, supply, origin))


# ------------------------------------------------------------------ polarity

def polarity_symbols(ty: AnyType, p: str) -> frozenset:
    """Symbols of ``ty`` in positive (p='+') or negative (p='-') position."""
    if isinstance(ty, NatIdx):
        return _head(ty.lo) | _head(ty.hi) if p == "+" else frozenset()
    if isinstance(ty, LArrow):
        return polarity_symbols(ty.dom, _flip(p)) | polarity_symbols(ty.cod, p)
    if isinstance(ty, Bang):
        inner = polarity_symbols(ty.inner, p)
        return inner | _head(ty.potential) if p == "-" else inner
    raise TypeError(ty)


def _head(i: Index) -> frozenset:
    return frozenset([i.f]) if isinstance(i, FunApp) else symbols(i)


def _flip(p: str) -> str:
    return "-" if p == "+" else "+"


def judgement_symbols(j: Judgement, p: str) -> frozenset:
    out = polarity_symbols(j.ty, p)
    for _, s in j.ctx:
        out |= polarity_symbols(s, _flip(p))
    return out


def type_indexes(ty: AnyType) -> list:
    if isinstance(ty, NatIdx):
        return [ty.lo] if ty.singleton else [ty.lo, ty.hi]
    if isinstance(ty, LArrow):
        return type_indexes(ty.dom) + type_indexes(ty.cod)
    return [ty.potential] + type_indexes(ty.inner)


def type_free_ivars(ty: AnyType) -> frozenset:
    if isinstance(ty, NatIdx):
        return free_ivars(ty.lo) | free_ivars(ty.hi)
    if isinstance(ty, LArrow):
        return type_free_ivars(ty.dom) | type_free_ivars(ty.cod)
    return free_ivars(ty.potential) | (type_free_ivars(ty.inner) - {ty.binder})


def subst_type(ty: AnyType, mapping) -> AnyType:
    if isinstance(ty, NatIdx):
        return NatIdx(subst_many(ty.lo, mapping), subst_many(ty.hi, mapping))
    if isinstance(ty, LArrow):
        return LArrow(subst_type(ty.dom, mapping), subst_type(ty.cod, mapping))
    inner = {k: v for k, v in mapping.items() if k != ty.binder}
    return Bang(ty.binder, subst_many(ty.potential, mapping), subst_type(ty.inner, inner))


def is_primitive(ty: AnyType, fiv: tuple) -> bool:
    """Every index is a distinct symbol applied to exactly the in-scope variables."""
    seen: set = set()

    def ok(i, scope):
        if not (isinstance(i, FunApp) and i.args == tuple(IVar(a) for a in scope)):
            return False
        if i.f in seen:
            return False
        seen.add(i.f)
        return True

    def walk(t, scope):
        if isinstance(t, NatIdx):
            return t.singleton and ok(t.lo, scope)
        if isinstance(t, LArrow):
            return walk(t.dom, scope) and walk(t.cod, scope)
        return ok(t.potential, scope) and walk(t.inner, scope + (t.binder,))

    return walk(ty, tuple(fiv))


# -------------------------------------------------------- correct specification

def specified_from(f: str, S: Iterable[str], prog: RewritingProgram) -> bool:
    """``f`` has a rule and every symbol reachable through rules, stopping at S, has one."""
    S = frozenset(S)
    if not prog.rules_for(f):
        return False
    seen = {f}
    todo = [f]
    while todo:
        g = todo.pop()
        for r in prog.rules_for(g):
            for h in symbols(r.rhs):
                if h in S or h in seen or h == IF:
                    continue
                if not prog.rules_for(h):
                    return False
                seen.add(h)
                todo.append(h)
    return True


def check_correctly_specified(j: Judgement, prog: RewritingProgram):
    """Returns (ok, diagnostic)."""
    if not is_primitive(j.ty, j.fiv):
        return False, "result type is not primitive"
    for name, s in j.ctx:
        if not is_primitive(s, j.fiv):
            return False, f"context type of {name} is not primitive"
    neg = judgement_symbols(j, "-")
    pos = judgement_symbols(j, "+")
    for f in sorted(neg):
        if prog.rules_for(f):
            return False, f"negative symbol {f} has a rule"
    for f in sorted(pos):
        if not specified_from(f, neg, prog):
            return False, f"positive symbol {f} is not specified from the negatives"
    for f in sorted(symbols(j.weight)):
        if f in neg or f == IF:
            continue
        if not specified_from(f, neg, prog):
            return False, f"weight symbol {f} is not specified from the negatives"
    return True, "ok"


# ------------------------------------------------------------------ printing

def show_type(ty: AnyType) -> str:
    if isinstance(ty, NatIdx):
        if ty.singleton:
            return f"Nat{{{show_index(ty.lo)}}}"
        return f"Nat[{show_index(ty.lo)}, {show_index(ty.hi)}]"
    if isinstance(ty, LArrow):
        return f"{show_type(ty.dom)} -o {show_type(ty.cod)}"
    return f"[{ty.binder} < {show_index(ty.potential)}] ({show_type(ty.inner)})"


def show_ctx(ctx) -> str:
    return ", ".join(f"{x} : {show_type(s)}" for x, s in ctx)


def show_judgement(j: Judgement) -> str:
    fiv = ", ".join(j.fiv)
    ictx = ", ".join(show_constraint(c) for c in j.ictx)
    return (f"{fiv}; {ictx}; {show_ctx(j.ctx)} |-[{show_index(j.weight)}] "
            f"{pretty(j.subject)} : {show_type(j.ty)}")


def show_condition(c: SideCondition) -> str:
    fiv = ", ".join(c.fiv)
    ictx = ", ".join(show_constraint(k) for k in c.ictx)
    if isinstance(c.body, DefinedOb):
        goal = f"defined({show_index(c.body.i)})"
    else:
        goal = show_constraint(c.body.c)
    return f"{fiv}; {ictx} |= {goal}"

"""Equation generators for dereliction, contraction, digging, weakening and
the three helper principles used by the inference (axiom, substitution, if).

Every generator walks its argument types in parallel.  At each index position
the polarity decides which side is defined in terms of the other; the defining
rule is emitted together with a definedness side condition for its right-hand
side.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .dlpcf_types import (Bang, DefinedOb, FreshSupply, LArrow, NatIdx, SideCondition,
                          annotate, annotate_linear, skeleton)
from .index_lang import (ONE, ZERO, BoundedSum, Constraint, FunApp, Index, IVar, Monus, Plus,
                         free_ivars, ite, subst_many, var_rule)
from .pcf_syntax import NatT


class SkeletonMismatch(Exception):
    pass


@dataclass(frozen=True)
class AuxOutput:
    rules: tuple = ()
    conds: tuple = ()
    aux_type: object = None


@dataclass(frozen=True)
class Entry:
    """One side of an index position: the symbol, its arguments and the path
    of enclosing binders (with their potentials) inside the walked type."""
    sym: str
    args: tuple
    inner: tuple
    pots: tuple

    @property
    def app(self) -> FunApp:
        return FunApp(self.sym, tuple(IVar(a) for a in self.args))


@dataclass(frozen=True)
class Position:
    pol: str
    kind: str  # "nat" | "pot"
    entries: tuple


def _flip(p: str) -> str:
    return "-" if p == "+" else "+"


def _entry(i: Index, inner: tuple, pots: tuple) -> Entry:
    if not (isinstance(i, FunApp) and all(isinstance(a, IVar) for a in i.args)):
        raise SkeletonMismatch(f"type is not primitive at {i}")
    return Entry(i.f, tuple(a.a for a in i.args), inner, pots)


def positions(types, pol: str = "+") -> list:
    """Parallel walk of types sharing one skeleton."""
    out: list = []
    paths = [((), ()) for _ in types]
    _walk(list(types), pol, paths, out)
    return out


def _walk(types, pol, paths, out):
    kinds = {type(t) for t in types}
    if len(kinds) != 1:
        raise SkeletonMismatch("types have different shapes")
    t0 = types[0]
    if isinstance(t0, NatIdx):
        out.append(Position(pol, "nat", tuple(
            _entry(t.lo, inner, pots) for t, (inner, pots) in zip(types, paths))))
    elif isinstance(t0, Bang):
        out.append(Position(_flip(pol), "pot", tuple(
            _entry(t.potential, inner, pots) for t, (inner, pots) in zip(types, paths))))
        new_paths = [(inner + (t.binder,), pots + (t.potential,))
                     for t, (inner, pots) in zip(types, paths)]
        _walk([t.inner for t in types], pol, new_paths, out)
    elif isinstance(t0, LArrow):
        _walk([t.dom for t in types], _flip(pol), paths, out)
        _walk([t.cod for t in types], pol, paths, out)
    else:
        raise TypeError(t0)


def src(source: Entry, target: Entry, outer: Mapping[str, Index] | None = None) -> FunApp:
    """The source symbol applied in the variables of the target position."""
    if len(source.inner) != len(target.inner):
        raise SkeletonMismatch("binder depth differs")
    ren = {s: IVar(t) for s, t in zip(source.inner, target.inner)}
    ren.update(outer or {})
    return FunApp(source.sym, tuple(subst_many(IVar(a), ren) for a in source.args))


def path_constraints(e: Entry) -> tuple:
    return tuple(Constraint(IVar(b), "<", pot) for b, pot in zip(e.inner, e.pots))


def _cond_fiv(args, ictx, rhs) -> tuple:
    out = list(args)
    extra = set()
    for c in ictx:
        extra |= free_ivars(c.lhs) | free_ivars(c.rhs)
    extra |= free_ivars(rhs)
    out += sorted(extra - set(out))
    return tuple(out)


class _Acc:
    def __init__(self):
        self.rules: list = []
        self.conds: list = []

    def define(self, target: Entry, rhs: Index, ictx=(), cond: bool = True):
        self.rules.append(var_rule(target.sym, target.args, rhs))
        if cond:
            full = tuple(ictx) + path_constraints(target)
            self.conds.append(SideCondition(_cond_fiv(target.args, full, rhs), full,
                                            DefinedOb(rhs)))

    def out(self, aux_type=None) -> AuxOutput:
        return AuxOutput(tuple(self.rules), tuple(self.conds), aux_type)


def _check_skeletons(*types):
    sk = {skeleton(t) for t in types}
    if len(sk) != 1:
        raise SkeletonMismatch(f"skeletons differ: {sorted(map(str, sk))}")


# ------------------------------------------------------------- dereliction

def algsub(sigma, tau, a: str, I: Index, fiv, Phi, p: str,
           define_sigma: bool = True) -> AuxOutput:
    """Rules and conditions making ``sigma{I/a}`` equivalent to ``tau``.

    At positions of polarity ``p`` the symbols of ``sigma`` are defined from
    ``tau``; elsewhere ``tau`` is defined from ``sigma`` instantiated at I.
    """
    _check_skeletons(sigma, tau)
    acc = _Acc()
    Phi = tuple(Phi)
    for pos in positions([sigma, tau]):
        s, t = pos.entries
        if pos.pol == p:
            if define_sigma:
                acc.define(s, src(t, s), Phi)
        else:
            acc.define(t, src(s, t, {a: I}), Phi)
    return acc.out()


def algder(sigma, tau, a: str, fiv, Phi, p: str) -> AuxOutput:
    """Dereliction: ``sigma{0/a}`` equivalent to ``tau``."""
    return algsub(sigma, tau, a, ZERO, fiv, Phi, p)


def algax(tau, sigma, fiv, Phi, p: str) -> AuxOutput:
    """Componentwise identification of two types over the same variables."""
    _check_skeletons(tau, sigma)
    acc = _Acc()
    Phi = tuple(Phi)
    for pos in positions([tau, sigma]):
        t, s = pos.entries
        if pos.pol == p:
            acc.define(t, src(s, t), Phi)
        else:
            acc.define(s, src(t, s), Phi)
    return acc.out()


# -------------------------------------------------------------------- if

def algif(tau1, tau2, I: Index, fiv, Phi, p: str, supply: FreshSupply,
          origin=("", "algif")) -> AuxOutput:
    """A fresh type equal to tau1 when I = 0 and to tau2 when I >= 1."""
    _check_skeletons(tau1, tau2)
    if isinstance(tau1, LArrow):
        sigma = annotate_linear(tuple(fiv), skeleton(tau1), supply, origin)
    else:
        sigma = annotate(tuple(fiv), skeleton(tau1), supply, origin)
    acc = _Acc()
    Phi = tuple(Phi)
    zero = Phi + (Constraint(I, "=", ZERO),)
    succ = Phi + (Constraint(I, ">=", ONE),)
    for pos in positions([sigma, tau1, tau2]):
        s, t1, t2 = pos.entries
        if pos.pol == p:
            acc.define(s, ite(I, src(t1, s), src(t2, s)), Phi)
        else:
            acc.define(t1, src(s, t1), zero)
            acc.define(t2, src(s, t2), succ)
    return acc.out(sigma)


# ------------------------------------------------------------ contraction

def algcontr(A, B, C, I: Index, J: Index, a: str, fiv, Phi, p: str,
             supply: FreshSupply | None = None, origin=("", "algcontr")) -> AuxOutput:
    """``[a<I+J].A`` as the sum of ``[a<I].B`` and ``[a<J].C``.

    B reads the instances 0..I-1 of A and C the instances I..I+J-1.  When A
    is None a fresh primitive type for (fiv, a) is synthesized.
    """
    if A is None:
        A = annotate_linear(tuple(fiv) + (a,), skeleton(B), supply, origin)
    _check_skeletons(A, B, C)
    acc = _Acc()
    Phi = tuple(Phi)
    va = IVar(a)
    in_b = Phi + (Constraint(va, "<", I),)
    in_c = Phi + (Constraint(va, "<", J),)
    in_a = Phi + (Constraint(va, "<", Plus(I, J)),)
    for pos in positions([A, B, C]):
        ea, eb, ec = pos.entries
        if pos.pol == p:
            rhs = ite(Monus(I, va), src(ec, ea, {a: Monus(va, I)}), src(eb, ea))
            acc.define(ea, rhs, in_a)
        else:
            acc.define(eb, src(ea, eb), in_b)
            acc.define(ec, src(ea, ec, {a: Plus(I, va)}), in_c)
    return acc.out(A)


def contract_nat(A: NatIdx, B: NatIdx, C: NatIdx, Phi) -> AuxOutput:
    """Natural numbers are freely duplicable: both summands equal the sum."""
    acc = _Acc()
    ea, eb, ec = positions([A, B, C])[0].entries
    acc.define(eb, src(ea, eb), tuple(Phi))
    acc.define(ec, src(ea, ec), tuple(Phi))
    return acc.out(A)


# ---------------------------------------------------------------- digging

def prefix_sum(J: Index, a: str, upto: Index, supply_var: str) -> Index:
    """Sum of J{d/a} for d below ``upto``."""
    return BoundedSum(supply_var, upto, subst_many(J, {a: IVar(supply_var)}))


def algdig(A, B, I: Index, J: Index, fiv, a: str, b: str, Phi, p: str,
           supply: FreshSupply, origin=("", "algdig")) -> AuxOutput:
    """``[b < sum_{a<I} J].A`` as the bounded sum over a<I of ``[b<J].B``.

    Instance (a, b) of B is instance ``sum_{d<a} J{d/a} + b`` of A.  The
    inverse direction uses a search symbol locating the summand of an
    instance of A.
    """
    fiv = tuple(fiv)
    if A is None:
        A = annotate_linear(fiv + (b,), skeleton(B), supply, origin)
    _check_skeletons(A, B)
    acc = _Acc()
    Phi = tuple(Phi)
    d = supply.var()
    offset = prefix_sum(J, a, IVar(a), d)
    in_b = Phi + (Constraint(IVar(a), "<", I), Constraint(IVar(b), "<", J))
    in_a = Phi + (Constraint(IVar(b), "<", BoundedSum(a, I, J)),)
    search = None
    for pos in positions([A, B]):
        ea, eb = pos.entries
        if pos.pol == p:
            if search is None:
                search = _summand_search(fiv, I, J, a, b, supply, origin, acc)
            loc = FunApp(search, tuple(IVar(v) for v in fiv) + (IVar(b), ZERO))
            start = prefix_sum(J, a, loc, d)
            acc.define(ea, src(eb, ea, {a: loc, b: Monus(IVar(b), start)}), in_a)
        else:
            acc.define(eb, src(ea, eb, {b: Plus(offset, IVar(b))}), in_b)
    return acc.out(A)


def _summand_search(fiv, I, J, a, b, supply, origin, acc) -> str:
    # s(fiv, b, x): the summand index of instance b, scanning from x
    x, d = supply.var(), supply.var()
    s = supply.symbol(len(fiv) + 2, (origin[0], "algdig-search"))
    vx = IVar(x)
    nxt = Plus(vx, ONE)
    call = FunApp(s, tuple(IVar(v) for v in fiv) + (IVar(b), nxt))
    rhs = ite(Monus(I, nxt), vx,
              ite(Monus(prefix_sum(J, a, nxt, d), IVar(b)), call, vx))
    acc.rules.append(var_rule(s, tuple(fiv) + (b, x), rhs))
    return s


# --------------------------------------------------------------- weakening

def algweak(A, fiv, a: str, p: str) -> AuxOutput:
    """Constant definitions for the p-side symbols of A; no conditions."""
    acc = _Acc()
    for pos in positions([A]):
        if pos.pol == p:
            (e,) = pos.entries
            acc.define(e, ZERO if pos.kind == "nat" else ONE, cond=False)
    return acc.out()


# ----------------------------------------------------------- fix callers

def fix_caller_join(C, A, D, fiv, b: str, a_x: str, a_d: str, children: Index,
                    Phi, p: str, supply: FreshSupply, origin=("", "Fix")) -> AuxOutput:
    """Defines the p-side symbols of C (the type of recursion node b) from
    whoever calls that node: the r-th root is typed by D at r, and the j-th
    child of node m by A at (m, j).  ``children`` is the number of calls made
    by node b (an index over fiv and b).

    The caller of node n is recovered from the preorder numbering using only
    the nodes before n: if n-1 has children, n is its first child; otherwise
    n fills the next free slot found by climbing from n-1 towards its root.
    """
    fiv = tuple(fiv)
    acc = _Acc()
    phi = tuple(IVar(v) for v in fiv)
    n = supply.var()
    vn = IVar(n)
    names = ("isroot", "rootidx", "parent", "childidx",
             "up-isroot", "up-rootidx", "up-parent", "up-childidx")
    sym = {k: supply.symbol(len(fiv) + 1, (origin[0], "fix-" + k)) for k in names}

    def call(k: str, x: Index) -> FunApp:
        return FunApp(sym[k], phi + (x,))

    def kids(x: Index) -> Index:
        return subst_many(children, {b: x})

    prev = Monus(vn, ONE)
    par, nxt = call("parent", vn), Plus(call("childidx", vn), ONE)
    # nonzero when the parent of n still has a slot after n
    more = Monus(kids(par), nxt)
    defs = {
        "isroot": ite(vn, ZERO, ite(kids(prev), call("up-isroot", prev), ONE)),
        "rootidx": ite(vn, ZERO, call("up-rootidx", prev)),
        "parent": ite(kids(prev), call("up-parent", prev), prev),
        "childidx": ite(kids(prev), call("up-childidx", prev), ZERO),
        "up-isroot": ite(call("isroot", vn), ZERO, ite(more, call("up-isroot", par), ONE)),
        "up-rootidx": ite(call("isroot", vn), Plus(call("rootidx", vn), ONE),
                          call("up-rootidx", par)),
        "up-parent": ite(call("isroot", vn), ZERO, ite(more, call("up-parent", par), par)),
        "up-childidx": ite(call("isroot", vn), ZERO, ite(more, call("up-childidx", par), nxt)),
    }
    for k in names:
        acc.rules.append(var_rule(sym[k], fiv + (n,), defs[k]))

    Phi = tuple(Phi)
    vb = IVar(b)
    for pos in positions([C, A, D]):
        ec, ea, ed = pos.entries
        if pos.pol != p:
            continue
        rhs = ite(call("isroot", vb), src(ed, ec, {a_d: call("rootidx", vb)}),
                  src(ea, ec, {b: call("parent", vb), a_x: call("childidx", vb)}))
        acc.define(ec, rhs, Phi)
    return acc.out()


def is_nat(ty) -> bool:
    return isinstance(ty, NatIdx) or skeleton(ty) == NatT()

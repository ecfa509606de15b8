"""Independent semantic oracle for the auxiliary equation generators.

A case builds random primitive types, runs one generator, completes every
symbol left without a rule by a random affine function, and then checks by
brute force that the promised type equivalence holds at every index
position, together with the emitted definedness conditions.
"""
from __future__ import annotations

import itertools
import random

from dlpcf import aux_algorithms as aux
from dlpcf.dlpcf_types import Bang, DefinedOb, FreshSupply, LArrow, NatIdx, annotate, annotate_linear
from dlpcf.index_lang import (Defined, Evaluator, FunApp, IVar, Lit, Plus, Times,
                              program_from_rules, var_rule, with_if)
from dlpcf.pcf_syntax import ArrowT, NatT

RANGE = 4
ALGORITHMS = ("algder", "algsub", "algax", "algcontr", "algdig", "algif")


def random_skeleton(rng: random.Random, depth: int, arrow: bool = False):
    if depth == 0 or (not arrow and rng.random() < 0.35):
        return NatT()
    return ArrowT(random_skeleton(rng, depth - 1), random_skeleton(rng, depth - 1))


def skeleton_depth(t) -> int:
    return 0 if isinstance(t, NatT) else 1 + max(skeleton_depth(t.dom), skeleton_depth(t.cod))


def slots(ty, path=()):
    """(index, binders) per position, in a fixed walk order.  binders is the
    tuple of (binder, potential) pairs enclosing the position."""
    if isinstance(ty, NatIdx):
        return [(ty.lo, path)]
    if isinstance(ty, Bang):
        return [(ty.potential, path)] + slots(ty.inner, path + ((ty.binder, ty.potential),))
    if isinstance(ty, LArrow):
        return slots(ty.dom, path) + slots(ty.cod, path)
    raise TypeError(ty)


def rename_to(src_index: FunApp, src_path, dst_path, outer: dict):
    """The source index read in the destination's binders."""
    from dlpcf.index_lang import subst_many
    ren = {s: IVar(d) for (s, _), (d, _) in zip(src_path, dst_path)}
    ren.update(outer)
    return subst_many(src_index, ren)


def random_completion(rng: random.Random, rules, types, extra_symbols=()):
    """Affine rules c0 + sum ci * xi for every unruled symbol of ``types``."""
    ruled = {r.head for r in rules}
    todo = {}
    for ty in types:
        for i, _ in slots(ty):
            todo[i.f] = tuple(a.a for a in i.args)
    for f, params in extra_symbols:
        todo[f] = params
    out = []
    for f, params in todo.items():
        if f in ruled:
            continue
        rhs = Lit(rng.randrange(3))
        for x in params:
            c = rng.randrange(3)
            if c:
                rhs = Plus(rhs, IVar(x) if c == 1 else Times(Lit(c), IVar(x)))
        out.append(var_rule(f, params, rhs))
    return out


def _envs(names, base=None):
    base = dict(base or {})
    names = [n for n in names if n not in base]
    for combo in itertools.product(range(RANGE), repeat=len(names)):
        rho = dict(base)
        rho.update(zip(names, combo))
        yield rho


def _in_path(ev, path, rho) -> bool:
    for b, pot in path:
        v = ev.eval(pot, rho)
        if not isinstance(v, Defined) or rho[b] >= v.n:
            return False
    return True


class Case:
    def __init__(self, name: str, seed: int):
        self.name = name
        self.rng = random.Random(f"{name}:{seed}")
        self.supply = FreshSupply()
        self.problems: list = []
        self.positions = 0

    # random ingredients

    def skel(self, arrow=False):
        return random_skeleton(self.rng, self.rng.randint(1 if arrow else 0, 3), arrow)

    def modal(self, fiv, T):
        return annotate(tuple(fiv), T, self.supply)

    def linear(self, fiv, T):
        return annotate_linear(tuple(fiv), T, self.supply)

    def index(self, fiv):
        """A small random index over fiv (always defined)."""
        choices = [Lit(0), Lit(1), Lit(2), Lit(3)]
        choices += [IVar(a) for a in fiv] + [Plus(IVar(a), Lit(1)) for a in fiv]
        return self.rng.choice(choices)

    # checking

    def finish(self, out, types, compare, extra_symbols=()):
        rules = list(out.rules)
        rules += random_completion(self.rng, rules, types, extra_symbols)
        prog = with_if(program_from_rules(rules))
        ev = Evaluator(prog, 10 ** 5)
        for c in out.conds:
            if not isinstance(c.body, DefinedOb):
                continue
            for rho in _envs(c.fiv):
                if all(_holds(ev, k, rho) for k in c.ictx):
                    if not isinstance(ev.eval(c.body.i, rho), Defined):
                        self.problems.append(("condition", c, rho))
                        break
        compare(ev)
        return self

    def equal_at(self, ev, lhs, rhs, rho):
        self.positions += 1
        x, y = ev.eval(lhs, rho), ev.eval(rhs, rho)
        if not (isinstance(x, Defined) and isinstance(y, Defined) and x.n == y.n):
            self.problems.append((lhs, rhs, dict(rho), x, y))

    def same_type(self, ev, left, right, variables, outer=None, guard=None):
        """right{outer} is equivalent to left at every valuation of the
        variables of left that satisfies guard and left's binder bounds."""
        outer = outer or {}
        for (li, lpath), (ri, rpath) in zip(slots(left), slots(right)):
            names = list(variables) + [b for b, _ in lpath]
            for rho in _envs(names):
                if guard and not guard(rho):
                    continue
                if not _in_path(ev, lpath, rho):
                    continue
                other = rename_to(ri, rpath, lpath, {k: v(rho) if callable(v) else v
                                                     for k, v in outer.items()})
                self.equal_at(ev, li, other, rho)


def _holds(ev, c, rho) -> bool:
    from dlpcf.index_lang import eval_constraint
    r = eval_constraint(c, rho, ev)
    return r is True


# ------------------------------------------------------------------ cases

def case_algax(seed: int) -> Case:
    k = Case("algax", seed)
    fiv = ("c",)
    T = k.skel()
    tau, sigma = k.modal(fiv, T), k.modal(fiv, T)
    p = k.rng.choice("+-")
    out = aux.algax(tau, sigma, fiv, (), p)
    return k.finish(out, [tau, sigma], lambda ev: k.same_type(ev, tau, sigma, fiv))


def case_algsub(seed: int, name: str = "algsub") -> Case:
    k = Case(name, seed)
    fiv = ("c",)
    T = k.skel()
    sigma, tau = k.modal(fiv + ("a",), T), k.modal(fiv, T)
    I = Lit(0) if name == "algder" else k.index(fiv)
    p = k.rng.choice("+-")
    if name == "algder":
        out = aux.algder(sigma, tau, "a", fiv, (), p)
    else:
        out = aux.algsub(sigma, tau, "a", I, fiv, (), p)
    return k.finish(out, [sigma, tau],
                    lambda ev: k.same_type(ev, tau, sigma, fiv, {"a": I}))


def case_algder(seed: int) -> Case:
    return case_algsub(seed, "algder")


def case_algif(seed: int) -> Case:
    k = Case("algif", seed)
    fiv = ("c",)
    T = k.skel()
    t1, t2 = k.modal(fiv, T), k.modal(fiv, T)
    I = k.rng.choice([IVar("c"), Plus(IVar("c"), Lit(0)), Lit(0), Lit(2)])
    p = k.rng.choice("+-")
    out = aux.algif(t1, t2, I, fiv, (), p, k.supply)
    sigma = out.aux_type

    def compare(ev):
        zero = lambda rho: ev.eval(I, rho).n == 0  # noqa: E731
        k.same_type(ev, t1, sigma, fiv, guard=zero)
        k.same_type(ev, t2, sigma, fiv, guard=lambda rho: not zero(rho))

    return k.finish(out, [t1, t2, sigma], compare)


def case_algcontr(seed: int) -> Case:
    k = Case("algcontr", seed)
    fiv = ("c",)
    T = k.skel(arrow=True)
    B, C = k.linear(fiv + ("a",), T), k.linear(fiv + ("a",), T)
    I, J = k.index(fiv), k.index(fiv)
    p = k.rng.choice("+-")
    out = aux.algcontr(None, B, C, I, J, "a", fiv, (), p, k.supply)
    A = out.aux_type

    def compare(ev):
        val = lambda x, rho: ev.eval(x, rho).n  # noqa: E731
        k.same_type(ev, B, A, fiv + ("a",), guard=lambda rho: rho["a"] < val(I, rho))
        k.same_type(ev, C, A, fiv + ("a",), {"a": lambda rho: Lit(val(I, rho) + rho["a"])},
                    guard=lambda rho: rho["a"] < val(J, rho))

    return k.finish(out, [A, B, C], compare)


def case_algdig(seed: int) -> Case:
    k = Case("algdig", seed)
    fiv = ("c",)
    T = k.skel(arrow=True)
    B = k.linear(fiv + ("a", "b"), T)
    I = k.index(fiv)
    J = k.rng.choice([Lit(1), Lit(2), IVar("a"), Plus(IVar("a"), Lit(1)), IVar("c")])
    p = k.rng.choice("+-")
    out = aux.algdig(None, B, I, J, fiv, "a", "b", (), p, k.supply)
    A = out.aux_type

    def compare(ev):
        def jv(rho, a):
            return ev.eval(J, {**rho, "a": a}).n

        def offset(rho):
            return Lit(sum(jv(rho, d) for d in range(rho["a"])) + rho["b"])

        def guard(rho):
            return rho["a"] < ev.eval(I, rho).n and rho["b"] < jv(rho, rho["a"])

        k.same_type(ev, B, A, fiv + ("a", "b"), {"b": offset}, guard=guard)

    return k.finish(out, [A, B], compare)


CASES = {
    "algder": case_algder,
    "algsub": case_algsub,
    "algax": case_algax,
    "algcontr": case_algcontr,
    "algdig": case_algdig,
    "algif": case_algif,
}


def run_suite(n: int = 200):
    """{algorithm: (cases, positions checked, violations)}"""
    out = {}
    for name in ALGORITHMS:
        cases = [CASES[name](seed) for seed in range(n)]
        out[name] = (n, sum(c.positions for c in cases),
                     [p for c in cases for p in c.problems])
    return out

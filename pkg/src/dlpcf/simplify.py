"""Size-reducing rewriting of equational programs.

Every transformation preserves the value and the definedness of the
protected symbols: an argument is only dropped by inlining when it is
definitely defined, i.e. contains no symbol application or forest.
"""
from __future__ import annotations

from .index_lang import (IF, BoundedSum, Forest, FunApp, Index, IVar, Lit, Monus, Plus, PVar,
                         RewritingProgram, Rule, Times, free_ivars, index_size, subst_many,
                         symbols)


def map_index(i: Index, fn) -> Index:
    """Bottom-up rebuild applying fn at every node."""
    if isinstance(i, (IVar, Lit)):
        return fn(i)
    if isinstance(i, (Plus, Monus, Times)):
        return fn(type(i)(map_index(i.l, fn), map_index(i.r, fn)))
    if isinstance(i, FunApp):
        return fn(FunApp(i.f, tuple(map_index(a, fn) for a in i.args)))
    if isinstance(i, BoundedSum):
        return fn(BoundedSum(i.binder, map_index(i.bound, fn), map_index(i.body, fn)))
    if isinstance(i, Forest):
        return fn(Forest(i.binder, map_index(i.base, fn), map_index(i.count, fn),
                         map_index(i.children, fn)))
    raise TypeError(i)


def surely_defined(i: Index) -> bool:
    if isinstance(i, (IVar, Lit)):
        return True
    if isinstance(i, (Plus, Monus, Times)):
        return surely_defined(i.l) and surely_defined(i.r)
    if isinstance(i, BoundedSum):
        return surely_defined(i.bound) and surely_defined(i.body)
    return False


def fold(i: Index) -> Index:
    def step(n: Index) -> Index:
        if isinstance(n, Plus):
            if isinstance(n.l, Lit) and isinstance(n.r, Lit):
                return Lit(n.l.n + n.r.n)
            if n.l == Lit(0):
                return n.r
            if n.r == Lit(0):
                return n.l
        if isinstance(n, Monus):
            if isinstance(n.l, Lit) and isinstance(n.r, Lit):
                return Lit(max(n.l.n - n.r.n, 0))
            if n.r == Lit(0):
                return n.l
        if isinstance(n, Times):
            if isinstance(n.l, Lit) and isinstance(n.r, Lit):
                return Lit(n.l.n * n.r.n)
            if n.l == Lit(1):
                return n.r
            if n.r == Lit(1):
                return n.l
        if isinstance(n, BoundedSum) and isinstance(n.bound, Lit):
            if n.bound.n == 0:
                return Lit(0)
            if n.bound.n == 1:
                return step_all(subst_many(n.body, {n.binder: Lit(0)}))
        if isinstance(n, Forest) and n.count == Lit(0) and surely_defined(n.base):
            return Lit(0)
        if isinstance(n, FunApp) and n.f == IF and len(n.args) == 3 and isinstance(n.args[0], Lit):
            return n.args[1] if n.args[0].n == 0 else n.args[2]
        return n

    def step_all(n: Index) -> Index:
        return map_index(n, step)

    return step_all(i)


def _inlinable(prog: RewritingProgram, protect) -> dict:
    out = {}
    for f in prog.signature:
        if f in protect or f == IF:
            continue
        rules = prog.rules_for(f)
        if len(rules) != 1:
            continue
        r = rules[0]
        if not all(isinstance(p, PVar) for p in r.patterns):
            continue
        if f in symbols(r.rhs):
            continue
        rhs = r.rhs
        small = isinstance(rhs, (Lit, IVar)) or (
            isinstance(rhs, FunApp) and all(isinstance(a, (IVar, Lit)) for a in rhs.args))
        if small:
            out[f] = r
    return out


def _inline(i: Index, table: dict) -> Index:
    def step(n: Index) -> Index:
        if isinstance(n, FunApp) and n.f in table:
            r = table[n.f]
            params = [p.a for p in r.patterns]
            if len(params) != len(n.args):
                return n
            used = free_ivars(r.rhs)
            if any(p not in used and not surely_defined(a) for p, a in zip(params, n.args)):
                return n
            return subst_many(r.rhs, dict(zip(params, n.args)))
        return n

    return map_index(i, step)


def reachable(prog: RewritingProgram, roots) -> set:
    seen = set(roots)
    todo = list(seen)
    while todo:
        f = todo.pop()
        for r in prog.rules_for(f):
            for g in symbols(r.rhs):
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
    return seen


def program_size(prog: RewritingProgram):
    return (len(prog.rules), sum(index_size(r.rhs) for r in prog.rules))


def simplify_once(prog: RewritingProgram, protect) -> RewritingProgram:
    protect = set(protect)
    table = _inlinable(prog, protect)
    rules = []
    for r in prog.rules:
        rhs = fold(_inline(r.rhs, table)) if r.head not in table else r.rhs
        rules.append(Rule(r.head, r.patterns, rhs))
    prog = RewritingProgram(dict(prog.signature), tuple(rules))
    keep = reachable(prog, protect)
    return prog.restrict(keep)


def simplify_program(prog: RewritingProgram, protect) -> RewritingProgram:
    """Inline, fold and prune to a fixpoint."""
    while True:
        nxt = simplify_once(prog, protect)
        if nxt.rules == prog.rules and nxt.signature == prog.signature:
            return nxt
        prog = nxt


def simplify_index(i: Index, prog: RewritingProgram, protect=()) -> Index:
    """Inline the program's small non-protected rules into a standalone index."""
    table = _inlinable(prog, set(protect))
    while True:
        nxt = fold(_inline(i, table))
        if nxt == i:
            return i
        i = nxt

"""Relative type inference: decorating a PCF derivation with indexes.

``mainfct`` follows the PCF derivation node by node.  Each case emits fresh
symbols, the equations giving meaning to the positive ones and the side
conditions under which the emitted judgement is derivable.  ``infer`` adds
the first-order completion of the remaining negative symbols.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import aux_algorithms as aux
from .dlpcf_types import (Bang, DefinedOb, FreshSupply, Judgement, LArrow, NatIdx,
                          SideCondition, annotate, annotate_linear, check_correctly_specified,
                          nat, skeleton, subst_type)
from .index_lang import (ONE, ZERO, BoundedSum, Constraint, Evaluator, Forest, FunApp, IVar,
                         JudgementReport, Lit, Monus, Plus, RewritingProgram,
                         check_constraints, ite, program_from_rules, subst_many, var_rule,
                         with_if)
from .pcf_syntax import (NatT, PcfDerivation, Term, arity, ctx_lookup,
                         infer_pcf_type, is_closed, pretty, type_order)


class NotClosed(Exception):
    pass


class IllTyped(Exception):
    pass


class HigherOrderCompletionUnsupported(Exception):
    pass


class UnsupportedFix(Exception):
    """fix at type Nat: such a value never unfolds under call-by-value."""


@dataclass(frozen=True)
class DNode:
    judgement: Judgement
    rule: str
    premises: tuple = ()

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


@dataclass(frozen=True)
class InferenceOutput:
    judgement: Judgement
    derivation: DNode
    program: RewritingProgram
    conds: tuple
    symbol_table: dict
    pcf: PcfDerivation | None = None


@dataclass(frozen=True)
class Completion:
    program: RewritingProgram
    fiv: tuple
    result: object  # Nat index of the final result, or None
    notes: tuple = ()


# ----------------------------------------------------------------- mainfct

class _Run:
    def __init__(self, supply: FreshSupply):
        self.supply = supply
        self.rules: list = []
        self.conds: list = []

    # bookkeeping

    def sym(self, fiv, node: PcfDerivation, case: str) -> FunApp:
        f = self.supply.symbol(len(fiv), (_label(node.subject), case))
        return FunApp(f, tuple(IVar(a) for a in fiv))

    def define(self, head: FunApp, rhs):
        self.rules.append(var_rule(head.f, tuple(a.a for a in head.args), rhs))

    def take(self, o: aux.AuxOutput):
        self.rules.extend(o.rules)
        self.conds.extend(o.conds)
        return o.aux_type

    def need_defined(self, fiv, Phi, i):
        self.conds.append(SideCondition(tuple(fiv), tuple(Phi), DefinedOb(i)))

    def weight(self, fiv, node, expr) -> FunApp:
        w = self.sym(fiv, node, "weight")
        self.define(w, expr)
        return w

    def weak_entry(self, fiv, U, node):
        origin = (_label(node.subject), node.rule + ":weak")
        if isinstance(U, NatT):
            return annotate(fiv, U, self.supply, origin)
        b = self.supply.var()
        B = annotate_linear(tuple(fiv) + (b,), U, self.supply, origin)
        h = self.sym(fiv, node, node.rule + ":weak")
        self.take(aux.AuxOutput(aux.algweak(B, fiv, b, "-").rules))
        self.define(h, ZERO)
        return Bang(b, h, B)

    def contract(self, fiv, Phi, s1, s2, node):
        """An entry equivalent to the sum of two context entries."""
        origin = (_label(node.subject), node.rule + ":contr")
        if isinstance(s1, NatIdx):
            A = annotate(fiv, NatT(), self.supply, origin)
            return self.take(aux.contract_nat(A, s1, s2, Phi))
        a = s1.binder
        C = subst_type(s2.inner, {s2.binder: IVar(a)})
        A = self.take(aux.algcontr(None, s1.inner, C, s1.potential, s2.potential, a,
                                   fiv, Phi, "-", self.supply, origin))
        h = self.sym(fiv, node, node.rule + ":contr")
        total = Plus(s1.potential, s2.potential)
        self.define(h, total)
        self.need_defined(fiv, Phi, total)
        return Bang(a, h, A)

    def dig(self, fiv, Phi, entry, bound, a, node):
        """Sum over a < bound of a context entry living under binder a."""
        if isinstance(entry, NatIdx):
            g = self.sym(fiv, node, node.rule + ":dig")
            head = entry.lo
            self.define(head, g)
            return nat(g)
        origin = (_label(node.subject), node.rule + ":dig")
        A = self.take(aux.algdig(None, entry.inner, bound, entry.potential, fiv, a,
                                 entry.binder, Phi, "-", self.supply, origin))
        h = self.sym(fiv, node, node.rule + ":dig")
        total = BoundedSum(a, bound, entry.potential)
        self.define(h, total)
        self.need_defined(fiv, Phi, total)
        return Bang(entry.binder, h, A)

    # the cases

    def go(self, fiv: tuple, Phi: tuple, d: PcfDerivation) -> DNode:
        handler = getattr(self, "case_" + d.rule)
        ctx, weight, ty, prem = handler(fiv, Phi, d)
        j = Judgement(fiv, Phi, tuple(ctx), weight, d.subject, ty)
        return DNode(j, d.rule, tuple(prem))

    def _others(self, fiv, d, skip=None):
        return [(y, self.weak_entry(fiv, U, d)) for y, U in d.context if y != skip]

    def case_Ax(self, fiv, Phi, d):
        x = d.subject.name
        ctx = []
        origin = (_label(d.subject), "Ax")
        T = ctx_lookup(d.context, x)
        sigma = annotate(fiv, T, self.supply, origin)
        tau = annotate(fiv, T, self.supply, origin)
        self.take(aux.algax(tau, sigma, fiv, Phi, "+"))
        for y, U in d.context:
            ctx.append((y, sigma if y == x else self.weak_entry(fiv, U, d)))
        return ctx, self.weight(fiv, d, ZERO), tau, ()

    def case_n(self, fiv, Phi, d):
        i = self.sym(fiv, d, "n")
        self.define(i, Lit(d.subject.n))
        return self._others(fiv, d), self.weight(fiv, d, ZERO), nat(i), ()

    def _unary(self, fiv, Phi, d, op):
        sub = self.go(fiv, Phi, d.premises[0])
        i = self.sym(fiv, d, d.rule)
        self.define(i, op(sub.judgement.ty.lo))
        return sub.judgement.ctx, sub.judgement.weight, nat(i), (sub,)

    def case_s(self, fiv, Phi, d):
        return self._unary(fiv, Phi, d, lambda j: Plus(j, ONE))

    def case_p(self, fiv, Phi, d):
        return self._unary(fiv, Phi, d, lambda j: Monus(j, ONE))

    def case_If(self, fiv, Phi, d):
        dc, dz, ds = d.premises
        c = self.go(fiv, Phi, dc)
        j = c.judgement.ty.lo
        z = self.go(fiv, Phi + (Constraint(j, "=", ZERO),), dz)
        s = self.go(fiv, Phi + (Constraint(j, ">=", ONE),), ds)
        origin = (_label(d.subject), "If")
        ty = self.take(aux.algif(z.judgement.ty, s.judgement.ty, j, fiv, Phi, "+",
                                 self.supply, origin))
        zc, sc = dict(z.judgement.ctx), dict(s.judgement.ctx)
        ctx = []
        for y, s1 in c.judgement.ctx:
            merged = self.take(aux.algif(zc[y], sc[y], j, fiv, Phi, "-", self.supply, origin))
            ctx.append((y, self.contract(fiv, Phi, s1, merged, d)))
        w = self.weight(fiv, d, Plus(c.judgement.weight,
                                     ite(j, z.judgement.weight, s.judgement.weight)))
        return ctx, w, ty, (c, z, s)

    def case_App(self, fiv, Phi, d):
        df, da = d.premises
        f = self.go(fiv, Phi, df)
        u = self.go(fiv, Phi, da)
        fty = f.judgement.ty
        self.define(fty.potential, ONE)
        a = fty.binder
        sigma1, sigma2 = fty.inner.dom, fty.inner.cod
        self.take(aux.algder(sigma1, u.judgement.ty, a, fiv, Phi, "+"))
        tau2 = annotate(fiv, d.type, self.supply, (_label(d.subject), "App"))
        self.take(aux.algder(sigma2, tau2, a, fiv, Phi, "-"))
        uc = dict(u.judgement.ctx)
        ctx = [(y, self.contract(fiv, Phi, s1, uc[y], d)) for y, s1 in f.judgement.ctx]
        w = self.weight(fiv, d, Plus(f.judgement.weight, u.judgement.weight))
        return ctx, w, tau2, (f, u)

    def _body_context(self, fiv, Phi, d, body, x, bound, a):
        inner = dict(body.judgement.ctx)
        ctx = []
        for y, U in d.context:
            if y == x:
                # shadowed by the binder
                ctx.append((y, self.weak_entry(fiv, U, d)))
            else:
                ctx.append((y, self.dig(fiv, Phi, inner[y], bound, a, d)))
        return ctx

    def case_Lam(self, fiv, Phi, d):
        x = d.subject.binder
        a = self.supply.var()
        i = self.sym(fiv, d, "Lam")
        body = self.go(fiv + (a,), Phi + (Constraint(IVar(a), "<", i),), d.premises[0])
        sigma = dict(body.judgement.ctx)[x]
        ctx = self._body_context(fiv, Phi, d, body, x, i, a)
        w = self.weight(fiv, d, Plus(i, BoundedSum(a, i, body.judgement.weight)))
        return ctx, w, Bang(a, i, LArrow(sigma, body.judgement.ty)), (body,)

    def case_Fix(self, fiv, Phi, d):
        if isinstance(d.type, NatT):
            raise UnsupportedFix("fix at type Nat has no call-by-value unfolding")
        x = d.subject.binder
        b = self.supply.var()
        h = self.sym(fiv, d, "Fix")
        body = self.go(fiv + (b,), Phi + (Constraint(IVar(b), "<", h),), d.premises[0])
        X = dict(body.judgement.ctx)[x]
        Y = body.judgement.ty
        origin = (_label(d.subject), "Fix")
        fb = fiv + (b,)
        Phib = Phi + (Constraint(IVar(b), "<", h),)
        # the body is used once per recursion node
        self.define(Y.potential, ONE)
        C = annotate_linear(fb, d.type, self.supply, origin)
        self.take(aux.algder(Y.inner, C, Y.binder, fb, Phib, "-"))
        calls = X.potential
        a_x = X.binder
        child = Plus(Plus(ONE, IVar(b)), Forest(b, Plus(IVar(b), ONE), IVar(a_x), calls))
        self.take(aux.algsub(C, X.inner, b, child, fb + (a_x,),
                             Phib + (Constraint(IVar(a_x), "<", calls),), "-",
                             define_sigma=False))
        tau = annotate(fiv, d.type, self.supply, origin)
        a_d = tau.binder
        root = Forest(b, ZERO, IVar(a_d), calls)
        self.take(aux.algsub(C, tau.inner, b, root, fiv + (a_d,),
                             Phi + (Constraint(IVar(a_d), "<", tau.potential),), "-",
                             define_sigma=False))
        self.take(aux.fix_caller_join(C, X.inner, tau.inner, fiv, b, a_x, a_d, calls,
                                      Phib, "-", self.supply, origin))
        nodes = Forest(b, ZERO, tau.potential, calls)
        self.define(h, nodes)
        self.need_defined(fiv, Phi, nodes)
        ctx = self._body_context(fiv, Phi, d, body, x, h, b)
        w = self.weight(fiv, d, Plus(h, BoundedSum(b, h, body.judgement.weight)))
        return ctx, w, tau, (body,)


def _label(t: Term, width: int = 40) -> str:
    s = pretty(t)
    return s if len(s) <= width else s[: width - 3] + "..."


def mainfct(fiv, Phi, pi: PcfDerivation, supply: FreshSupply | None = None) -> InferenceOutput:
    supply = supply or FreshSupply()
    run = _Run(supply)
    root = run.go(tuple(fiv), tuple(Phi), pi)
    sig = {f: n for f, n in supply.arities.items()}
    prog = program_from_rules(run.rules, sig)
    return InferenceOutput(root.judgement, root, prog, tuple(run.conds),
                           dict(supply.provenance), pi)


# --------------------------------------------------------------- pipeline

def complete(out: InferenceOutput) -> Completion:
    """First-order completion: potentials 1, the i-th argument index a_i."""
    fiv = out.judgement.fiv
    rules: list = []
    notes: list = []
    ty = out.judgement.ty
    binders: list = []
    k = 0
    while isinstance(ty, Bang) and k < len(fiv):
        rules.append(var_rule(ty.potential.f, tuple(x.a for x in ty.potential.args), ONE))
        dom = ty.inner.dom
        if isinstance(dom, NatIdx):
            rules.append(var_rule(dom.lo.f, tuple(x.a for x in dom.lo.args), IVar(fiv[k])))
        else:
            order = type_order(skeleton(dom))
            if order >= 2:
                raise HigherOrderCompletionUnsupported(
                    f"argument {k + 1} has order {order}")
            # a first-order functional argument: constant behaviour
            rules.extend(aux.algweak(dom.inner, (), dom.binder, "+").rules)
            rules.append(var_rule(dom.potential.f,
                                  tuple(x.a for x in dom.potential.args), ONE))
            notes.append(f"argument {k + 1} is a function; completed with constants")
        binders.append(ty.binder)
        ty = ty.inner.cod
        k += 1
    result = None
    if isinstance(ty, NatIdx):
        result = subst_many(ty.lo, {b: ZERO for b in binders})
    prog = with_if(out.program.add(rules))
    return Completion(prog, fiv, result, tuple(notes))


def infer(t: Term, arity_hint: int | None = None, supply: FreshSupply | None = None):
    """(InferenceOutput, Completion) for a closed PCF term."""
    if not is_closed(t):
        raise NotClosed(pretty(t))
    try:
        pi = infer_pcf_type(t)
    except Exception as e:  # UnificationFailure / UnboundVariable
        raise IllTyped(str(e)) from e
    n = arity(pi.type) if arity_hint is None else arity_hint
    fiv = tuple(f"a{k + 1}" for k in range(n))
    out = mainfct(fiv, (), pi, supply)
    return out, complete(out)


def weight_of(out: InferenceOutput, comp: Completion, args, fuel=None, evaluator=None):
    ev = evaluator or Evaluator(comp.program, fuel)
    return ev.eval(out.judgement.weight, dict(zip(comp.fiv, args)))


def result_of(comp: Completion, args, fuel=None, evaluator=None):
    ev = evaluator or Evaluator(comp.program, fuel)
    return ev.eval(comp.result, dict(zip(comp.fiv, args)))


def correctly_specified(out: InferenceOutput):
    return check_correctly_specified(out.judgement, with_if(out.program))


# --------------------------------------------------------- soundness check

@dataclass(frozen=True)
class SoundnessReport:
    verdicts: tuple  # (SideCondition, JudgementReport)

    @property
    def status(self) -> str:
        states = {r.status for _, r in self.verdicts}
        if "counterexample" in states:
            return "counterexample"
        if "inconclusive" in states:
            return "inconclusive"
        return "valid"


def check_condition(c: SideCondition, prog: RewritingProgram, ranges, fuel=None,
                    evaluator=None) -> JudgementReport:
    if isinstance(c.body, DefinedOb):
        return check_constraints(c.fiv, c.ictx, (), prog, ranges, fuel, evaluator,
                                 defined=(c.body.i,))
    return check_constraints(c.fiv, c.ictx, (c.body.c,), prog, ranges, fuel, evaluator)


def check_soundness_contract(out: InferenceOutput, completion, ranges, fuel=None) -> SoundnessReport:
    prog = completion.program if isinstance(completion, Completion) else completion
    ev = Evaluator(prog, fuel)
    return SoundnessReport(tuple((c, check_condition(c, prog, ranges, fuel, ev))
                                 for c in out.conds))


def symbol_rows(out: InferenceOutput):
    """(symbol, arity, term, case) rows in creation order."""
    rows = []
    for f, (term, case) in out.symbol_table.items():
        rows.append((f, out.program.signature.get(f, 0), term, case))
    return rows


def interface_symbols(out: InferenceOutput, comp: Completion | None = None) -> set:
    """Symbols whose meaning the judgement and its conditions depend on."""
    from .dlpcf_types import type_indexes
    from .index_lang import symbols
    j = out.judgement
    idx = [j.weight] + type_indexes(j.ty)
    for _, s in j.ctx:
        idx += type_indexes(s)
    for c in out.conds:
        idx += [k for con in c.ictx for k in (con.lhs, con.rhs)]
        idx += [c.body.i] if isinstance(c.body, DefinedOb) else [c.body.c.lhs, c.body.c.rhs]
    if comp is not None and comp.result is not None:
        idx.append(comp.result)
    out_syms: set = set()
    for i in idx:
        out_syms |= symbols(i)
    return out_syms

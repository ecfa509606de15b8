"""PCF terms, the surface parser, term size and simple type inference.

The derivation produced by :func:`infer_pcf_type` mirrors the term node for
node and is the skeleton that the linear dependent inference decorates.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("numerals are non-negative")


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"


@dataclass(frozen=True)
class Fix:
    binder: str
    body: "Term"


@dataclass(frozen=True)
class Pred:
    arg: "Term"


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Ifz:
    scrutinee: "Term"
    zero_branch: "Term"
    succ_branch: "Term"


Term = Union[Var, Num, App, Lam, Fix, Pred, Succ, Ifz]


def children(t: Term) -> tuple:
    if isinstance(t, (Var, Num)):
        return ()
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, (Lam, Fix)):
        return (t.body,)
    if isinstance(t, (Pred, Succ)):
        return (t.arg,)
    if isinstance(t, Ifz):
        return (t.scrutinee, t.zero_branch, t.succ_branch)
    raise TypeError(t)


def term_size(t: Term) -> int:
    """Number of constructor nodes; a numeral counts 1 whatever its value."""
    size = 0
    todo = [t]
    while todo:
        u = todo.pop()
        size += 1
        todo.extend(children(u))
    return size


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, (Lam, Fix)):
        return free_vars(t.body) - {t.binder}
    out = frozenset()
    for c in children(t):
        out |= free_vars(c)
    return out


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def is_value(t: Term) -> bool:
    return isinstance(t, (Num, Lam, Fix))


def apply_args(t: Term, args) -> Term:
    for n in args:
        t = App(t, Num(int(n)))
    return t


# ------------------------------------------------------------- printing

def pretty(t: Term) -> str:
    if isinstance(t, Lam):
        return f"lam {t.binder}. {pretty(t.body)}"
    if isinstance(t, Fix):
        return f"fix {t.binder}. {pretty(t.body)}"
    if isinstance(t, Ifz):
        return (f"ifz {pretty(t.scrutinee)} then {pretty(t.zero_branch)} "
                f"else {pretty(t.succ_branch)}")
    if isinstance(t, App):
        return f"{_pretty_app(t.fun)} {_pretty_atom(t.arg)}"
    return _pretty_atom(t)


def _pretty_app(t: Term) -> str:
    if isinstance(t, App):
        return f"{_pretty_app(t.fun)} {_pretty_atom(t.arg)}"
    return _pretty_atom(t)


def _pretty_atom(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.n)
    if isinstance(t, Succ):
        return f"s({pretty(t.arg)})"
    if isinstance(t, Pred):
        return f"p({pretty(t.arg)})"
    return f"({pretty(t)})"


# -------------------------------------------------------------- parsing

KEYWORDS = frozenset({"lam", "fix", "ifz", "then", "else", "s", "p"})

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[().\\λ])
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "id" and text in KEYWORDS:
                kind = "kw"
            if text in ("\\", "λ"):
                kind, text = "kw", "lam"
            toks.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.col)
        return tok

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "kw" and tok.text in ("lam", "fix"):
            self.next()
            name = self.expect("id").text
            self.expect("sym", ".")
            body = self.term()
            return Lam(name, body) if tok.text == "lam" else Fix(name, body)
        if tok.kind == "kw" and tok.text == "ifz":
            self.next()
            c = self.term()
            self.expect("kw", "then")
            z = self.term()
            self.expect("kw", "else")
            s = self.term()
            return Ifz(c, z, s)
        return self.application()

    def _starts_atom(self, tok: _Tok) -> bool:
        return (tok.kind in ("id", "num")
                or (tok.kind == "sym" and tok.text == "(")
                or (tok.kind == "kw" and tok.text in ("s", "p", "lam", "fix", "ifz")))

    def application(self) -> Term:
        t = self.atom()
        while self._starts_atom(self.peek()):
            tok = self.peek()
            if tok.kind == "kw" and tok.text in ("lam", "fix", "ifz"):
                # a trailing binder swallows the rest, as in `f lam x. x`
                t = App(t, self.term())
                break
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.next()
        if tok.kind == "id":
            return Var(tok.text)
        if tok.kind == "num":
            return Num(int(tok.text))
        if tok.kind == "kw" and tok.text in ("s", "p"):
            self.expect("sym", "(")
            inner = self.term()
            self.expect("sym", ")")
            return Succ(inner) if tok.text == "s" else Pred(inner)
        if tok.kind == "sym" and tok.text == "(":
            inner = self.term()
            self.expect("sym", ")")
            return inner
        got = tok.text or "end of input"
        raise ParseError(f"unexpected {got!r}", tok.line, tok.col)


def parse_term(source: str) -> Term:
    p = _Parser(source)
    t = p.term()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return t


# ---------------------------------------------------------- simple types

@dataclass(frozen=True)
class NatT:
    def __str__(self):
        return "Nat"


@dataclass(frozen=True)
class ArrowT:
    dom: "PcfType"
    cod: "PcfType"

    def __str__(self):
        d = f"({self.dom})" if isinstance(self.dom, ArrowT) else str(self.dom)
        return f"{d} -> {self.cod}"


@dataclass(frozen=True)
class _TVar:
    n: int


PcfType = Union[NatT, ArrowT]


def type_order(t: PcfType) -> int:
    if isinstance(t, NatT):
        return 0
    return max(type_order(t.dom) + 1, type_order(t.cod))


def arity(t: PcfType) -> int:
    n = 0
    while isinstance(t, ArrowT):
        n += 1
        t = t.cod
    return n


def parse_type(src: str) -> PcfType:
    toks = re.findall(r"Nat|->|\(|\)", src)
    if "".join(toks) != re.sub(r"\s+", "", src):
        raise ParseError("bad type syntax", 1, 1)
    pos = 0

    def arrow():
        nonlocal pos
        left = atom()
        if pos < len(toks) and toks[pos] == "->":
            pos += 1
            return ArrowT(left, arrow())
        return left

    def atom():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of type", 1, 1)
        tok = toks[pos]
        pos += 1
        if tok == "Nat":
            return NatT()
        if tok == "(":
            t = arrow()
            if pos >= len(toks) or toks[pos] != ")":
                raise ParseError("expected ')'", 1, 1)
            pos += 1
            return t
        raise ParseError(f"unexpected {tok!r}", 1, 1)

    t = arrow()
    if pos != len(toks):
        raise ParseError("trailing input in type", 1, 1)
    return t


class UnificationFailure(Exception):
    pass


class UnboundVariable(Exception):
    pass


Context = tuple  # ordered tuple of (name, PcfType)


def ctx_extend(ctx: Context, name: str, ty) -> Context:
    return tuple((n, t) for n, t in ctx if n != name) + ((name, ty),)


def ctx_lookup(ctx: Context, name: str):
    for n, t in ctx:
        if n == name:
            return t
    raise KeyError(name)


@dataclass(frozen=True)
class PcfDerivation:
    context: Context
    subject: Term
    type: PcfType
    premises: tuple = ()
    rule: str = "Ax"

    def nodes(self) -> Iterator["PcfDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()


class _Unifier:
    def __init__(self):
        self.subst: dict = {}
        self.counter = itertools.count()

    def fresh(self) -> _TVar:
        return _TVar(next(self.counter))

    def resolve(self, t):
        while isinstance(t, _TVar) and t in self.subst:
            t = self.subst[t]
        return t

    def occurs(self, v, t) -> bool:
        t = self.resolve(t)
        if t == v:
            return True
        if isinstance(t, ArrowT):
            return self.occurs(v, t.dom) or self.occurs(v, t.cod)
        return False

    def unify(self, a, b):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, _TVar):
            if self.occurs(a, b):
                raise UnificationFailure(f"infinite type {a} ~ {b}")
            self.subst[a] = b
            return
        if isinstance(b, _TVar):
            self.unify(b, a)
            return
        if isinstance(a, ArrowT) and isinstance(b, ArrowT):
            self.unify(a.dom, b.dom)
            self.unify(a.cod, b.cod)
            return
        raise UnificationFailure(f"cannot unify {_show(a)} with {_show(b)}")

    def ground(self, t):
        t = self.resolve(t)
        if isinstance(t, _TVar):
            return NatT()  # unconstrained variables default to Nat
        if isinstance(t, ArrowT):
            return ArrowT(self.ground(t.dom), self.ground(t.cod))
        return t


def _show(t) -> str:
    if isinstance(t, _TVar):
        return f"'t{t.n}"
    if isinstance(t, ArrowT):
        return f"({_show(t.dom)} -> {_show(t.cod)})"
    return str(t)


_RULE_TAGS = {Var: "Ax", Num: "n", Succ: "s", Pred: "p", Ifz: "If",
              App: "App", Lam: "Lam", Fix: "Fix"}


def infer_pcf_type(t: Term, context: Mapping | None = None) -> PcfDerivation:
    """Unification-based simple typing; returns a ground derivation."""
    u = _Unifier()
    ctx0 = tuple((context or {}).items())

    def walk(term, ctx):
        # returns (ctx, term, type, premises) with type variables inside
        if isinstance(term, Var):
            try:
                ty = ctx_lookup(ctx, term.name)
            except KeyError:
                raise UnboundVariable(term.name) from None
            return (ctx, term, ty, ())
        if isinstance(term, Num):
            return (ctx, term, NatT(), ())
        if isinstance(term, (Succ, Pred)):
            sub = walk(term.arg, ctx)
            u.unify(sub[2], NatT())
            return (ctx, term, NatT(), (sub,))
        if isinstance(term, Ifz):
            c = walk(term.scrutinee, ctx)
            z = walk(term.zero_branch, ctx)
            s = walk(term.succ_branch, ctx)
            u.unify(c[2], NatT())
            u.unify(z[2], s[2])
            return (ctx, term, z[2], (c, z, s))
        if isinstance(term, App):
            f = walk(term.fun, ctx)
            a = walk(term.arg, ctx)
            res = u.fresh()
            u.unify(f[2], ArrowT(a[2], res))
            return (ctx, term, res, (f, a))
        if isinstance(term, Lam):
            dom = u.fresh()
            body = walk(term.body, ctx_extend(ctx, term.binder, dom))
            return (ctx, term, ArrowT(dom, body[2]), (body,))
        if isinstance(term, Fix):
            ty = u.fresh()
            body = walk(term.body, ctx_extend(ctx, term.binder, ty))
            u.unify(body[2], ty)
            return (ctx, term, ty, (body,))
        raise TypeError(term)

    raw = walk(t, ctx0)

    def build(node):
        ctx, term, ty, prem = node
        gctx = tuple((n, u.ground(x)) for n, x in ctx)
        return PcfDerivation(gctx, term, u.ground(ty),
                             tuple(build(p) for p in prem), _RULE_TAGS[type(term)])

    return build(raw)


def check_derivation(d: PcfDerivation) -> bool:
    """Validates every rule instance of a ground PCF derivation."""
    for node in d.nodes():
        t, ty, ctx, prem = node.subject, node.type, node.context, node.premises
        if node.rule != _RULE_TAGS[type(t)]:
            return False
        if isinstance(t, Var):
            if dict(ctx).get(t.name) != ty:
                return False
        elif isinstance(t, Num):
            if ty != NatT():
                return False
        elif isinstance(t, (Succ, Pred)):
            if ty != NatT() or prem[0].type != NatT() or prem[0].subject != t.arg:
                return False
        elif isinstance(t, Ifz):
            if prem[0].type != NatT() or prem[1].type != ty or prem[2].type != ty:
                return False
        elif isinstance(t, App):
            if prem[0].type != ArrowT(prem[1].type, ty):
                return False
        elif isinstance(t, Lam):
            if not isinstance(ty, ArrowT) or prem[0].type != ty.cod:
                return False
            if prem[0].context != ctx_extend(ctx, t.binder, ty.dom):
                return False
        elif isinstance(t, Fix):
            if prem[0].type != ty or prem[0].context != ctx_extend(ctx, t.binder, ty):
                return False
        if not isinstance(t, (Lam, Fix)):
            if any(p.context != ctx for p in prem):
                return False
        if tuple(p.subject for p in prem) != children(t):
            return False
    return True


# ------------------------------------------------- source-level reduction

def substitute(t: Term, x: str, v: Term) -> Term:
    """Capture-avoiding t{v/x}."""
    fv = free_vars(v)

    def go(u):
        if isinstance(u, Var):
            return v if u.name == x else u
        if isinstance(u, Num):
            return u
        if isinstance(u, (Lam, Fix)):
            if u.binder == x:
                return u
            binder, body = u.binder, u.body
            if binder in fv:
                new = _fresh_name(binder, fv | free_vars(body) | {x})
                body = substitute(body, binder, Var(new))
                binder = new
            return type(u)(binder, go(body))
        if isinstance(u, App):
            return App(go(u.fun), go(u.arg))
        if isinstance(u, Succ):
            return Succ(go(u.arg))
        if isinstance(u, Pred):
            return Pred(go(u.arg))
        return Ifz(go(u.scrutinee), go(u.zero_branch), go(u.succ_branch))

    return go(t)


def _fresh_name(base: str, avoid) -> str:
    for k in itertools.count(1):
        cand = f"{base}{k}"
        if cand not in avoid:
            return cand
    raise AssertionError


def cbv_step(t: Term) -> Term | None:
    """One call-by-value reduction step (leftmost, function first), or None."""
    if isinstance(t, App):
        if not is_value(t.fun):
            r = cbv_step(t.fun)
            return None if r is None else App(r, t.arg)
        if not is_value(t.arg):
            r = cbv_step(t.arg)
            return None if r is None else App(t.fun, r)
        if isinstance(t.fun, Lam):
            return substitute(t.fun.body, t.fun.binder, t.arg)
        if isinstance(t.fun, Fix):
            return App(substitute(t.fun.body, t.fun.binder, t.fun), t.arg)
        return None
    if isinstance(t, (Succ, Pred)):
        if isinstance(t.arg, Num):
            n = t.arg.n + 1 if isinstance(t, Succ) else max(t.arg.n - 1, 0)
            return Num(n)
        r = cbv_step(t.arg)
        return None if r is None else type(t)(r)
    if isinstance(t, Ifz):
        if isinstance(t.scrutinee, Num):
            return t.zero_branch if t.scrutinee.n == 0 else t.succ_branch
        r = cbv_step(t.scrutinee)
        return None if r is None else Ifz(r, t.zero_branch, t.succ_branch)
    return None

"""Command-line entry point: parse, type, eval, infer, check, export."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .checker_export import check_bound, export_obligations, export_view
from .dlpcf_types import show_condition, show_judgement
from .index_lang import (IndexParseError, default_fuel, parse_index, show_index,
                         show_program)
from .inference import (HigherOrderCompletionUnsupported, IllTyped, NotClosed, UnsupportedFix,
                        check_condition, infer, symbol_rows)
from .machines import Stuck, Timeout, numeral, run, show_process
from .pcf_syntax import (ParseError, UnboundVariable, UnificationFailure, infer_pcf_type,
                         parse_term, pretty)

OK, USAGE, BAD_INPUT, COUNTEREXAMPLE, INCONCLUSIVE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_term(text)
    except ParseError as e:
        raise _Fail(BAD_INPUT, f"{path}:{e.line}:{e.col}: {e.msg}") from None


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _infer(t, path):
    try:
        return infer(t)
    except (NotClosed, IllTyped, UnsupportedFix, HigherOrderCompletionUnsupported) as e:
        raise _Fail(BAD_INPUT, f"{path}: {type(e).__name__}: {e}") from None


def cmd_parse(a) -> int:
    t = _load(a.file)
    print(repr(t) if a.ast else pretty(t))
    return OK


def cmd_type(a) -> int:
    t = _load(a.file)
    try:
        print(infer_pcf_type(t).type)
    except (UnificationFailure, UnboundVariable) as e:
        raise _Fail(BAD_INPUT, f"{a.file}: {type(e).__name__}: {e}") from None
    return OK


def cmd_eval(a) -> int:
    t = _load(a.file)
    trace = (lambda p, kind: print(f"{show_process(p)}    [{kind}]")) if a.trace else None
    try:
        r = run(t, a.machine, a.fuel, trace, args=a.args)
    except Timeout as e:
        print(f"timeout after {e.fuel} steps", file=sys.stderr)
        return INCONCLUSIVE
    except Stuck as e:
        raise _Fail(BAD_INPUT, f"{a.file}: stuck: {e}") from None
    n = numeral(r)
    print(f"value: {n if n is not None else pretty(r.value.term)}")
    print(f"total steps: {r.counters.total}")
    print(f"instantiation steps: {r.counters.instantiation}")
    print(f"lookups and unfoldings: {r.counters.lookups}")
    return OK


def cmd_infer(a) -> int:
    t = _load(a.file)
    out, comp = _infer(t, a.file)
    raw, completed = export_view(out, comp, not a.no_simplify)
    print("# judgement")
    print(show_judgement(out.judgement))
    print(f"weight: {show_index(out.judgement.weight)}")
    if comp.result is not None:
        print(f"result at instance 0: {show_index(comp.result)}")
    print("\n# equations")
    print(show_program(raw))
    print("\n# completion (first-order)")
    extra = [r for r in completed.rules if r not in raw.rules]
    print(show_program(type(raw)(completed.signature, tuple(extra))))
    for note in comp.notes:
        print(f"note: {note}")
    print("\n# side conditions")
    for c in out.conds:
        print(show_condition(c))
    print("\n# symbols")
    for f, n, term, case in symbol_rows(out):
        print(f"{f}/{n}\t{case}\t{term}")
    return OK


def cmd_check(a) -> int:
    t = _load(a.file)
    out, comp = _infer(t, a.file)
    fuel = a.fuel if a.fuel is not None else default_fuel()
    p = None
    if a.bound:
        try:
            p = parse_index(a.bound)
        except IndexParseError as e:
            raise _Fail(USAGE, f"--bound: {e}") from None
    states = []
    print("# side conditions")
    for k, c in enumerate(out.conds):
        r = check_condition(c, comp.program, a.range, fuel)
        states.append(r.status)
        where = f" at {r.counterexample}" if r.counterexample else ""
        print(f"[{k}] {r.status}{where}: {show_condition(c)}")
    rep = check_bound(t, out, comp, p, a.range, fuel, cond_range=0)
    print("\n# bounds")
    print(f"size |t| = {rep.size}")
    bad = unknown = 0
    for pt in rep.points:
        if pt.weight is None or pt.total_steps is None or (p is not None and pt.budget is None):
            flag = "inconclusive"
            unknown += 1
        elif pt.ok_bound and pt.ok_machine:
            flag = "ok"
        else:
            flag = "VIOLATION"
            bad += 1
        budget = f" p={pt.budget}" if p is not None else ""
        print(f"args={list(pt.args)} K={pt.weight} (|t|+2)(K+1)={pt.bound}{budget} "
              f"steps={pt.total_steps} inst={pt.instantiation_steps} {flag}")
    print(f"\nconditions: {len(states)} checked, "
          f"{states.count('counterexample')} counterexamples, "
          f"{states.count('inconclusive')} inconclusive; bound violations: {bad}, "
          f"inconclusive points: {unknown}")
    if "counterexample" in states or bad:
        return COUNTEREXAMPLE
    if "inconclusive" in states or unknown:
        return INCONCLUSIVE
    return OK


def cmd_export(a) -> int:
    t = _load(a.file)
    out, comp = _infer(t, a.file)
    _, completed = export_view(out, comp, not a.no_simplify)
    text = export_obligations(completed, out.conds, a.format)
    if a.output and a.output != "-":
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dlpcf", description="Linear dependent type inference for PCF.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse and pretty-print a term")
    p.add_argument("file")
    p.add_argument("--ast", action="store_true", help="print the syntax tree")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("type", help="print the PCF type")
    p.add_argument("file")
    p.set_defaults(fn=cmd_type)

    p = sub.add_parser("eval", help="run an abstract machine")
    p.add_argument("file")
    p.add_argument("--machine", choices=("cek", "kam"), default="cek")
    p.add_argument("--fuel", type=int, default=10 ** 6)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--args", type=int, nargs="*", default=[])
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("infer", help="infer a judgement, equations and side conditions")
    p.add_argument("file")
    p.add_argument("--no-simplify", action="store_true")
    p.set_defaults(fn=cmd_infer)

    p = sub.add_parser("check", help="check side conditions and complexity bounds")
    p.add_argument("file")
    p.add_argument("--range", type=int, required=True)
    p.add_argument("--fuel", type=int, default=None)
    p.add_argument("--bound", default=None, help="index over a1..an bounding the steps")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("export", help="export the obligations")
    p.add_argument("file")
    p.add_argument("--format", choices=("smtlib2", "plain"), default="smtlib2")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--no-simplify", action="store_true")
    p.set_defaults(fn=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _Fail as e:
        print(str(e), file=sys.stderr)
        return e.code
    except FileNotFoundError as e:
        print(str(e), file=sys.stderr)
        return USAGE
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return OK


if __name__ == "__main__":
    sys.exit(main())

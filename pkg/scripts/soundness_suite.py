"""Step counts against the inferred weight for every corpus program.

For each program and argument tuple in [0, span)^arity, runs the CEK machine
and prints the worst ratios instantiation/K and total/((|t|+2)(K+1)).
"""
import argparse
import itertools

from dlpcf.checker_export import step_bound
from dlpcf.corpus import PROGRAMS
from dlpcf.index_lang import Defined, Evaluator
from dlpcf.inference import infer, weight_of
from dlpcf.machines import run
from dlpcf.pcf_syntax import apply_args, term_size


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--span", type=int, default=6)
    span = ap.parse_args().span
    print(f"{'program':10} {'points':>6} {'viol':>4} {'inst/K':>7} {'total/bound':>11}")
    total_viol = 0
    for p in PROGRAMS:
        out, comp = infer(p.term)
        ev = Evaluator(comp.program)
        n = viol = 0
        inst_ratio = step_ratio = 0.0
        for args in itertools.product(range(span), repeat=len(comp.fiv)):
            w = weight_of(out, comp, args, evaluator=ev)
            r = run(p.term, "cek", args=args)
            n += 1
            if not isinstance(w, Defined):
                viol += 1
                continue
            bound = step_bound(term_size(apply_args(p.term, args)), w.n)
            viol += r.counters.instantiation > w.n or r.counters.total > bound
            inst_ratio = max(inst_ratio, r.counters.instantiation / max(w.n, 1))
            step_ratio = max(step_ratio, r.counters.total / bound)
        total_viol += viol
        print(f"{p.name:10} {n:>6} {viol:>4} {inst_ratio:>7.2f} {step_ratio:>11.3f}")
    print(f"violations: {total_viol}")
    return 1 if total_viol else 0


if __name__ == "__main__":
    raise SystemExit(main())

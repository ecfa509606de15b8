"""Inferred weight, result index and CEK counters side by side."""
import argparse
import itertools

from dlpcf.corpus import PROGRAMS
from dlpcf.index_lang import Evaluator, show_index
from dlpcf.inference import infer, result_of, weight_of
from dlpcf.machines import numeral, run


def _n(v):
    return getattr(v, "n", "undef")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--span", type=int, default=4)
    ap.add_argument("names", nargs="*", help="corpus programs (default: all)")
    a = ap.parse_args()
    for p in PROGRAMS:
        if a.names and p.name not in a.names:
            continue
        out, comp = infer(p.term)
        ev = Evaluator(comp.program)
        print(f"# {p.name}: weight {show_index(out.judgement.weight)}")
        print("args      K  result  value  inst  lookups  total")
        for args in itertools.product(range(a.span), repeat=len(comp.fiv)):
            r = run(p.term, "cek", args=args)
            w = weight_of(out, comp, args, evaluator=ev)
            res = result_of(comp, args, evaluator=ev) if comp.result is not None else None
            c = r.counters
            print(f"{str(list(args)):8} {_n(w):>2} {_n(res):>7} {numeral(r):>6} "
                  f"{c.instantiation:>5} {c.lookups:>8} {c.total:>6}")
        print()


if __name__ == "__main__":
    main()

"""Write <name>.smt2 and <name>.obligations.txt for every corpus program."""
import argparse
from pathlib import Path

from dlpcf.checker_export import export_view, write_exports
from dlpcf.corpus import PROGRAMS
from dlpcf.inference import infer


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-d", "--directory", default="exports")
    ap.add_argument("--no-simplify", action="store_true")
    a = ap.parse_args()
    Path(a.directory).mkdir(parents=True, exist_ok=True)
    for p in PROGRAMS:
        out, comp = infer(p.term)
        _, prog = export_view(out, comp, not a.no_simplify)
        for path in write_exports(prog, out.conds, p.name, a.directory):
            print(path)


if __name__ == "__main__":
    main()

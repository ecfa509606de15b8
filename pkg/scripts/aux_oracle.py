"""Random oracle check of the auxiliary equation generators."""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from aux_oracle import run_suite  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200, help="cases per algorithm")
    n = ap.parse_args().n
    t0 = time.perf_counter()
    bad = 0
    for alg, (cases, positions, problems) in run_suite(n).items():
        bad += len(problems)
        print(f"{alg:9} cases={cases} positions={positions} violations={len(problems)}")
        for p in problems[:3]:
            print(f"    {p}")
    print(f"{time.perf_counter() - t0:.1f} s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())

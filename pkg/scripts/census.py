"""Count equivalence classes of generating hyperplanes for every catalog family."""

import argparse
import time

from subfinsler.catalog import REPRESENTATIVES, build_algebra
from subfinsler.equivalence import census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2000, help="random draws per family")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    bad = 0
    for fam in REPRESENTATIVES:
        t0 = time.perf_counter()
        c = census(build_algebra(fam), args.n, seed=args.seed)
        bad += not c.ok
        flag = "ok" if c.ok else "MISMATCH"
        print(f"{fam.label:<18} {c.n_classes:>2} / {c.expected:<2} {flag:<8} {time.perf_counter() - t0:5.2f}s")
    print(f"{len(REPRESENTATIVES) - bad}/{len(REPRESENTATIVES)} families match")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()

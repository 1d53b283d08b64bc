"""Tabulate case label against the seminorm-free verdict over sampled subspaces.

Each row is one family; each entry reads case -> kind/condition: count.
"""

import argparse
from collections import Counter

import numpy as np

from subfinsler.abnormality import classify_abnormal
from subfinsler.catalog import REPRESENTATIVES, build_algebra
from subfinsler.convex_gauge import Ellipsoid
from subfinsler.equivalence import AlgebraData, ideal_seeds, lattice_seeds, random_subspace, theorem4_case
from subfinsler.lie_core import generates


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=60, help="Gaussian subspaces per family")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    ball = Ellipsoid(np.eye(3))
    for fam in REPRESENTATIVES:
        C = build_algebra(fam)
        qs = [random_subspace(rng) for _ in range(args.random)]
        qs += ideal_seeds(C, rng, AlgebraData.of(C), 4) + lattice_seeds(C)[::5]
        tab = Counter()
        for q in qs:
            if q.dim != 3 or not generates(C, q):
                continue
            v = classify_abnormal(C, q, ball)
            case = theorem4_case(C, q)
            tab[(case, v.kind.value, v.condition.value)] += 1
        cells = ", ".join(f"{c or '-'} -> {k}/{cond}: {n}" for (c, k, cond), n in sorted(tab.items(), key=str))
        print(f"{fam.label:<18} {cells or 'no generating subspaces'}")


if __name__ == "__main__":
    main()

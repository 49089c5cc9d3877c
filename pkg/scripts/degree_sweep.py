"""Observed eliminant degree and g2 size against 3(2^n - 1), several seeds per n.

    python3 scripts/degree_sweep.py --ns 5-13 --seeds 10 --out sweep.csv
"""

import argparse
import csv
import sys

from gmvsolve.cli import DEFAULT_P, _parse_ns
from gmvsolve.errors import DegenerateLeadingCoefficient
from gmvsolve.ff import PrimeField
from gmvsolve.gmv import generate, initialize
from gmvsolve.solver import build_plan, precompute, predicted_degrees, solve_for_t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", default="5-11")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--p", type=int, default=DEFAULT_P)
    ap.add_argument("--plan", default="balanced")
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    field = PrimeField(args.p)
    rows = []
    for n in _parse_ns(args.ns):
        want = predicted_degrees(n)
        plan = build_plan(n, args.plan)
        for seed in range(args.seeds):
            s = generate(field, n, seed)
            try:
                init = initialize(s)
            except DegenerateLeadingCoefficient:
                continue
            state = precompute(init, plan)
            rep = solve_for_t(state, s)
            rows.append(dict(n=n, seed=seed, deg_u=rep.deg_u, predicted=want.deg_u, g2_terms=rep.g2_terms,
                             roots=len(rep.roots), part1_s=f"{state.seconds:.4f}", part2_s=f"{rep.timings['total']:.4f}"))
            print(" ".join(f"{k}={v}" for k, v in rows[-1].items()), flush=True)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    misses = sum(r["deg_u"] != r["predicted"] for r in rows)
    print(f"{len(rows) - misses}/{len(rows)} runs match the predicted degree")
    return 0 if not misses else 1


if __name__ == "__main__":
    sys.exit(main())

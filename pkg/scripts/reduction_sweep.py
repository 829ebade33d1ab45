"""Reduce every exponent vector with entries below a cutoff and summarize.

    python3 scripts/reduction_sweep.py --p 3 --n 2 --top 27 --oracle-fraction 0.05
"""

import argparse
import collections
import itertools
import random
import time

from dickson_steenrod.dickson import DicksonWord, generators
from dickson_steenrod.reduction import reduce_full


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--top", type=int, default=None, help="exclusive cutoff, default p^3")
    ap.add_argument("--oracle-fraction", type=float, default=0.0)
    ap.add_argument("--degree-cap", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    p, n = args.p, args.n
    top = args.top or p**3
    rng = random.Random(args.seed)
    gens = generators(p, n) if args.oracle_fraction else None
    lengths = collections.Counter()
    finals = collections.Counter()
    checked = words = 0
    t = time.perf_counter()
    for K in itertools.product(range(top), repeat=n):
        if not any(K):
            continue
        use = rng.random() < args.oracle_fraction
        tr = reduce_full(DicksonWord(K), p, oracle=use, degree_cap=args.degree_cap, gens=gens)
        words += 1
        checked += tr.oracle_checked
        lengths[len(tr.steps)] += 1
        finals[tr.m] += 1
    print(f"p={p} n={n} entries < {top}: {words} words in {time.perf_counter() - t:.2f}s")
    print(f"oracle-checked steps: {checked}")
    print("steps  count")
    for k in sorted(lengths):
        print(f"{k:5d}  {lengths[k]}")
    print("final exponent p^m: " + ", ".join(f"m={m}: {c}" for m, c in sorted(finals.items())))


if __name__ == "__main__":
    main()

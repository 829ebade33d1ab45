"""Run atomic_check over a grid of domains and bounds and print one row each.

    python3 scripts/atomicity_table.py [--json]
"""

import argparse
import json
import time

from dickson_steenrod.atomicity import ResourceLimit, atomic_check, make_domain

GRID = [
    ("classical", 2, 2, 12), ("classical", 2, 2, 24), ("classical", 2, 3, 14), ("classical", 2, 3, 28),
    ("classical", 3, 2, 48), ("extended", 3, 2, 40), ("extended", 3, 2, 60), ("SD", 3, 2, 40),
    ("I", 3, 2, 40), ("SD", 3, 3, 60), ("I", 3, 3, 60),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for kind, p, n, bound in GRID:
        t = time.perf_counter()
        try:
            rep = atomic_check(make_domain(kind, p, n), bound)
            row = {"domain": kind, "p": p, "n": n, "bound": bound, "window": rep.window,
                   "solution_dim": rep.solution_dim, "verdict": rep.verdict, "method": rep.method}
        except ResourceLimit as e:
            row = {"domain": kind, "p": p, "n": n, "bound": bound, "verdict": f"SKIPPED ({e})"}
        row["seconds"] = round(time.perf_counter() - t, 2)
        rows.append(row)
        if not args.json:
            print(f"{kind:9s} p={p} n={n} bound={bound:3d} window={row.get('window', '-')!s:>4} "
                  f"dim={row.get('solution_dim', '-')!s:>3} {row['verdict']} ({row['seconds']}s)")
    if args.json:
        print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()

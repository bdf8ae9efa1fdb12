"""Solver cost against bag size and bound on random graphs.

Prints one row per (n, m, L): decomposition width, table entries, median time,
and whether the oracle agreed (when the graph is small enough for it).
"""
import argparse
import random
import statistics
from dataclasses import dataclass

from lbcut.corpus import random_connected_graph
from lbcut.errors import ResourceLimitError
from lbcut.dp import solve_mlbc
from lbcut.oracle import brute_force_mlbc


@dataclass
class ScalingConfig:
    sizes: tuple = ((6, 8), (8, 11), (10, 14), (14, 20), (20, 28))
    bounds: tuple = (1, 2, 3, 4)
    reps: int = 5
    seed: int = 0
    cap: int = 10**7


def run(cfg: ScalingConfig):
    rng = random.Random(cfg.seed)
    print("n\tm\tL\twidth\tentries\tms\toracle\trefused")
    for n, m in cfg.sizes:
        for L in cfg.bounds:
            times, widths, entries, agree = [], [], [], []
            refused = 0
            for _ in range(cfg.reps):
                g = random_connected_graph(rng, n, m)
                try:
                    sol = solve_mlbc(g, 1, n, L, cap=cfg.cap)
                except ResourceLimitError:
                    refused += 1
                    continue
                times.append(sol.stats["elapsed_ms"])
                widths.append(sol.stats["width"])
                entries.append(sol.stats["table_entries"])
                if g.m <= 16:
                    agree.append(brute_force_mlbc(g, 1, n, L)[0] == sol.size)
            ms = f"{statistics.median(times):.1f}" if times else "-"
            ent = max(entries) if entries else "-"
            ora = f"{sum(agree)}/{len(agree)}" if agree else "skipped"
            width = max(widths) if widths else "-"
            print(f"{n}\t{m}\t{L}\t{width}\t{ent}\t{ms}\t{ora}\t{refused}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=10**7)
    args = ap.parse_args(argv)
    run(ScalingConfig(reps=args.reps, seed=args.seed, cap=args.cap))


if __name__ == "__main__":
    main()

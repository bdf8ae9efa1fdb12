"""Sizes and decomposition widths of the clique reduction.

For each (k, N, M) builds a planted instance, checks the witness cut by BFS
and reports graph size, L, budget and path-decomposition width.
"""
import argparse
from dataclasses import dataclass
from itertools import product

from lbcut.decomp import validate_decomposition
from lbcut.graph import bfs_distances
from lbcut.hardgen import (
    random_multicolor_instance,
    reduce_clique_to_mlbc,
    reduction_path_decomposition,
    ridge_set_for_clique,
)
from lbcut.oracle import find_multicolor_clique


@dataclass
class SizesConfig:
    ks: tuple = (2, 3)
    ns: tuple = (1, 2, 3)
    ms: tuple = (1, 2)
    seed: int = 0


def run(cfg: SizesConfig):
    print("k\tN\tM\tvertices\tedges\tL\tbudget\twitness_dist\twidth\tvalid")
    for k, N, M in product(cfg.ks, cfg.ns, cfg.ms):
        if M > N * N:
            continue
        inst = random_multicolor_instance(k, N, M, True, cfg.seed)
        out = reduce_clique_to_mlbc(inst)
        cut = ridge_set_for_clique(out, find_multicolor_clique(inst))
        d = bfs_distances(out.graph, out.s, cut)[out.t]
        td = reduction_path_decomposition(out)
        ok = not validate_decomposition(out.graph, td)
        print(f"{k}\t{N}\t{M}\t{out.graph.n}\t{out.graph.m}\t{out.L}\t{out.budget}\t{d}\t{td.width}\t{ok}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)
    run(SizesConfig(tuple(a.k), tuple(a.n), tuple(a.m), a.seed))


if __name__ == "__main__":
    main()

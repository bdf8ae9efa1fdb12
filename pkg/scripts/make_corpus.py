"""Write benchmark corpora of two-terminal instances.

    python3 scripts/make_corpus.py --out corpus/exhaustive --max-n 5 --L 2
    python3 scripts/make_corpus.py --out corpus/random --random 50 --seed 1
"""
import argparse
import random
from dataclasses import dataclass

from lbcut.corpus import random_connected_graph, small_connected_graphs, write_corpus


@dataclass
class CorpusConfig:
    out: str
    max_n: int = 5
    L: int = 2
    random: int = 0
    seed: int = 0
    n: int = 7
    m: int = 11


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", required=True)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--L", type=int, default=2)
    ap.add_argument("--random", type=int, default=0, help="number of random graphs instead of the exhaustive list")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--m", type=int, default=11)
    cfg = CorpusConfig(**vars(ap.parse_args(argv)))
    if cfg.random:
        rng = random.Random(cfg.seed)
        graphs = [random_connected_graph(rng, cfg.n, cfg.m) for _ in range(cfg.random)]
        print(f"seed: {cfg.seed}")
    else:
        graphs = small_connected_graphs(cfg.max_n)
    paths = write_corpus(cfg.out, graphs, cfg.L)
    print(f"wrote {len(paths)} instances to {cfg.out}")


if __name__ == "__main__":
    main()

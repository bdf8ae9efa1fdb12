"""Command-line front end.

Exit codes: 0 success, 1 input error or failed validation, 2 resource refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .decomp import heuristic_decomposition, parse_td, validate_decomposition, write_td
from .dp import DEFAULT_TABLE_CAP, solve_instance
from .errors import DecompositionError, ParseError, ResourceLimitError
from .graph import CutInstance, Graph, dump_edges, read_graph, read_instance, verify_cut, write_instance
from .hardgen import (
    and_compose,
    butte_graph,
    butte_path_decomposition,
    highland_graph,
    highland_path_decomposition,
    random_multicolor_instance,
    reduce_clique_to_mlbc,
    reduction_path_decomposition,
    ridge_edges,
    ridge_set_for_clique,
)
from .oracle import DEFAULT_EDGE_CAP, MulticolorInstance, brute_force_instance, find_multicolor_clique

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit code 2 is reserved for resource refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    graph: Path | None = None
    instance: Path | None = None
    td: Path | None = None
    terminals: list[int] = field(default_factory=list)
    constraints: dict[tuple[int, int], int] = field(default_factory=dict)
    L: int | None = None
    cap: int = DEFAULT_TABLE_CAP
    seed: int = 0
    fmt: str = "text"
    threads: int = 1
    check: bool = False
    out: Path | None = None

    def __post_init__(self):
        if self.cap < 1:
            raise InputError("--cap must be positive")
        if self.threads < 1:
            raise InputError("--threads must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        s, t = getattr(args, "s", None), getattr(args, "t", None)
        terms = list(getattr(args, "terminals", None) or [])
        cons = {}
        for u, v, b in getattr(args, "constraint", None) or []:
            cons[(min(u, v), max(u, v))] = b
        L = getattr(args, "L", None)
        if s is not None or t is not None:
            if s is None or t is None or L is None:
                raise InputError("-s, -t and -L go together")
            terms = [s, t]
        return cls(
            command=args.command,
            graph=_path(getattr(args, "graph", None)),
            instance=_path(getattr(args, "instance", None)),
            td=_path(getattr(args, "td", None)),
            terminals=terms,
            constraints=cons,
            L=L,
            cap=getattr(args, "cap", DEFAULT_TABLE_CAP),
            seed=getattr(args, "seed", 0),
            fmt="json" if getattr(args, "json", False) else "text",
            threads=getattr(args, "threads", 1),
            check=getattr(args, "check", False),
            out=_path(getattr(args, "out", None)),
        )

    def cut_instance(self) -> CutInstance:
        if self.instance is not None:
            return read_instance(self.instance)
        if self.graph is None:
            raise InputError("need --graph or --instance")
        g = read_graph(self.graph)
        if self.L is not None:
            if len(self.terminals) != 2:
                raise InputError("-L needs exactly the two terminals -s and -t")
            return CutInstance.two_terminal(g, self.terminals[0], self.terminals[1], self.L)
        if not self.terminals:
            raise InputError("need terminals (-s/-t/-L or --terminals)")
        lim = max(self.constraints.values(), default=1)
        return CutInstance(g, tuple(self.terminals), self.constraints, lim)


def _path(p):
    return None if p is None else Path(p)


def _emit(cfg: RunConfig, payload: dict, text_lines: list[str]) -> None:
    if cfg.out is not None:
        cfg.out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if cfg.fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _fmt_cut(cut) -> str:
    return " ".join(f"{u}-{v}" for u, v in cut) or "(empty)"


# ---------------------------------------------------------------- solve / oracle


def cmd_solve(cfg: RunConfig) -> int:
    inst = cfg.cut_instance()
    td = parse_td(cfg.td.read_bytes()) if cfg.td is not None else None
    sol = solve_instance(inst, td, cap=cfg.cap, threads=cfg.threads)
    if cfg.check and not (len(sol.cut) == sol.size and verify_cut(inst, sol.cut)):
        print("check failed: returned cut does not satisfy the bounds", file=sys.stderr)
        return EXIT_INPUT
    st = sol.stats
    _emit(cfg, sol.to_json(), [
        f"size: {sol.size}",
        f"cut: {_fmt_cut(sol.cut)}",
        "stats: " + " ".join(f"{k}={st[k]}" for k in sorted(st)),
    ])
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, edge_cap: int = DEFAULT_EDGE_CAP) -> int:
    inst = cfg.cut_instance()
    size, cut = brute_force_instance(inst, edge_cap)
    if cfg.check and not verify_cut(inst, cut):
        print("check failed: oracle cut does not satisfy the bounds", file=sys.stderr)
        return EXIT_INPUT
    _emit(cfg, {"size": size, "cut": dump_edges(cut)}, [f"size: {size}", f"cut: {_fmt_cut(cut)}"])
    return EXIT_OK


# ---------------------------------------------------------------- generators


def _write_bundle(prefix: Path, inst: CutInstance, td=None) -> list[Path]:
    prefix.parent.mkdir(parents=True, exist_ok=True)
    js = prefix.with_suffix(".json")
    write_instance(inst, js)
    out = [prefix.with_suffix(".gr"), js]
    if td is not None:
        prefix.with_suffix(".td").write_text(write_td(td, inst.graph.n))
        out.append(prefix.with_suffix(".td"))
    return out


def _mcc_to_json(inst: MulticolorInstance) -> dict:
    return {
        "k": inst.k,
        "parts": [list(p) for p in inst.parts],
        "edges": [{"i": i, "j": j, "pairs": [list(e) for e in lst]} for (i, j), lst in sorted(inst.edges.items())],
    }


def _dump(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_gen(args: argparse.Namespace) -> int:
    prefix = Path(args.out)
    kind = args.kind
    written: list[Path] = []
    if kind == "butte":
        g, b = butte_graph(args.h, args.q)
        inst = CutInstance.two_terminal(g, b.s, b.t, args.h + 1)
        written = _write_bundle(prefix, inst, butte_path_decomposition(b, g.n) if args.td else None)
        print(f"butte h={args.h} Q={args.q}: n={g.n} m={g.m} ridge={len(ridge_edges(b))}")
    elif kind == "highland":
        g, hl = highland_graph(args.x, args.heights)
        X, Y = args.x, len(args.heights)
        inst = CutInstance.two_terminal(g, hl.s, hl.t, 2 * (X + Y) + X**4 + X**2 + X - 1)
        written = _write_bundle(prefix, inst, highland_path_decomposition(hl, g.n) if args.td else None)
        print(f"highland X={X} Y={Y}: n={g.n} m={g.m} L={inst.constraints[(hl.s, hl.t)] - 1}")
    elif kind in ("reduction", "mcc"):
        mcc = random_multicolor_instance(args.k, args.n, args.m, args.plant, args.seed)
        print(f"seed: {args.seed}")
        prefix.parent.mkdir(parents=True, exist_ok=True)
        mpath = prefix.with_suffix(".mcc.json")
        _dump(mpath, _mcc_to_json(mcc))
        written = [mpath]
        if kind == "reduction":
            red = reduce_clique_to_mlbc(mcc)
            inst = CutInstance.two_terminal(red.graph, red.s, red.t, red.L)
            td = reduction_path_decomposition(red) if args.td or args.plant else None
            written += _write_bundle(prefix, inst, td)
            print(f"reduction k={mcc.k} N={mcc.N} M={mcc.M}: n={red.graph.n} m={red.graph.m} "
                  f"L={red.L} budget={red.budget}")
            if args.plant:
                clique = find_multicolor_clique(mcc)
                cut = ridge_set_for_clique(red, clique)
                wpath = prefix.with_suffix(".witness.json")
                _dump(wpath, {"clique": list(clique), "size": len(cut), "budget": red.budget,
                              "cut": dump_edges(cut)})
                written.append(wpath)
        else:
            print(f"mcc k={mcc.k} N={mcc.N} M={mcc.M}")
    elif kind == "compose":
        parts = [read_instance(p) for p in args.inputs]
        Ls = set()
        pairs = []
        for p in parts:
            if len(p.terminals) != 2:
                raise InputError("compose needs two-terminal instances")
            s, t = p.terminals
            Ls.add(p.bound(s, t) - 1)
            pairs.append((p.graph, s, t))
        if len(Ls) != 1:
            raise InputError(f"inputs disagree on L: {sorted(Ls)}")
        L = Ls.pop()
        comp = and_compose(pairs, L, args.K)
        inst = CutInstance.two_terminal(comp.graph, comp.s, comp.t, L)
        written = _write_bundle(prefix, inst, comp.decomposition)
        print(f"compose x{len(parts)}: n={comp.graph.n} m={comp.graph.m} L={L} K={comp.K}")
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


# ---------------------------------------------------------------- decompositions and validation


def cmd_td(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    if args.action == "compute":
        td = heuristic_decomposition(g)
        text = write_td(td, g.n)
        if args.out:
            Path(args.out).write_text(text)
            print(f"width {td.width}, {len(td.bags)} bags; wrote {args.out}")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    return _report_td(g, Path(args.td))


def _report_td(g: Graph, path: Path) -> int:
    td = parse_td(path.read_bytes())
    problems = validate_decomposition(g, td)
    if problems:
        for p in problems:
            print(f"violation: {p}")
        return EXIT_INPUT
    print(f"valid decomposition: {len(td.bags)} bags, width {td.width}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    if args.td is not None:
        if args.graph is None:
            raise InputError("--td needs --graph")
        return _report_td(read_graph(args.graph), Path(args.td))
    if args.instance is None or args.cut is None:
        raise InputError("need --graph/--td or --instance/--cut")
    inst = read_instance(args.instance)
    data = json.loads(Path(args.cut).read_text())
    cut = [tuple(e) for e in data["cut"]]
    missing = [e for e in cut if not inst.graph.has_edge(*e)]
    if missing:
        print(f"violation: cut lists non-edges {missing}")
        return EXIT_INPUT
    ok = verify_cut(inst, cut)
    budget = args.budget if args.budget is not None else data.get("budget")
    if budget is not None and len(cut) > budget:
        print(f"violation: cut size {len(cut)} exceeds budget {budget}")
        return EXIT_INPUT
    if not ok:
        print("violation: some terminal pair is still too close")
        return EXIT_INPUT
    print(f"valid cut of size {len(cut)}")
    return EXIT_OK


# ---------------------------------------------------------------- bench


def bench_rows(corpus: Path, cap: int = DEFAULT_TABLE_CAP, oracle_cap: int = DEFAULT_EDGE_CAP,
               threads: int = 1) -> list[dict]:
    rows = []
    for path in sorted(corpus.glob("*.json")):
        row = {"instance": path.name}
        try:
            inst = read_instance(path)
            sol = solve_instance(inst, cap=cap, threads=threads)
            st = sol.stats
            row.update(n=inst.graph.n, m=inst.graph.m, width=st["width"], lim=st["lim"],
                       table_entries=st["table_entries"], ms=st["elapsed_ms"], size=sol.size)
            if inst.graph.m <= oracle_cap:
                row["oracle"] = "agree" if brute_force_instance(inst, oracle_cap)[0] == sol.size else "DISAGREE"
            else:
                row["oracle"] = "skipped"
        except (ParseError, DecompositionError, ResourceLimitError, ValueError, KeyError, OSError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise InputError(f"no such corpus directory: {corpus}")
    rows = bench_rows(corpus, args.cap, args.oracle_cap, args.threads)
    cols = ["instance", "n", "m", "width", "lim", "table_entries", "ms", "size", "oracle"]
    print("\t".join(cols))
    for r in rows:
        if "error" in r:
            print(f"{r['instance']}\t{r['error']}")
        else:
            print("\t".join(str(r.get(c, "")) for c in cols))
    checked = [r for r in rows if r.get("oracle") in ("agree", "DISAGREE")]
    if checked:
        agree = sum(r["oracle"] == "agree" for r in checked)
        print(f"oracle agreement: {agree}/{len(checked)}")
    if args.json:
        _dump(Path(args.json), {"rows": rows})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help=".gr graph file")
    p.add_argument("--instance", help="instance JSON (overrides --graph and terminal flags)")
    p.add_argument("-s", type=int, help="source vertex")
    p.add_argument("-t", type=int, help="sink vertex")
    p.add_argument("-L", type=int, help="length bound: afterwards s-t distance is at least L+1")
    p.add_argument("--terminals", type=int, nargs="+", help="terminal set for multicut")
    p.add_argument("--constraint", type=int, nargs=3, action="append", metavar=("U", "V", "BOUND"),
                   help="pairwise distance lower bound (repeatable)")
    p.add_argument("--check", action="store_true", help="re-verify the returned cut")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--out", help="also write the result JSON here")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lbcut", description="Length-bounded cuts on graphs of bounded treewidth.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("solve", "minimum L-cut via the tree-decomposition DP"),
                           ("multicut", "minimum multi-terminal length-bounded cut via the DP")):
        p = sub.add_parser(name, help=helptext)
        _add_instance_args(p)
        p.add_argument("--td", help="PACE .td decomposition to use (validated first)")
        p.add_argument("--cap", type=int, default=DEFAULT_TABLE_CAP, help="max projected entries per table")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("oracle", help="exhaustive ground truth")
    _add_instance_args(p)
    p.add_argument("--edge-cap", type=int, default=DEFAULT_EDGE_CAP)

    p = sub.add_parser("gen", help="generate gadget instances")
    gsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = gsub.add_parser("butte")
    g.add_argument("--h", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g = gsub.add_parser("highland")
    g.add_argument("--x", type=int, required=True)
    g.add_argument("--heights", type=int, nargs="+", required=True)
    for kind in ("reduction", "mcc"):
        g = gsub.add_parser(kind)
        g.add_argument("--k", type=int, required=True)
        g.add_argument("--n", type=int, required=True)
        g.add_argument("--m", type=int, required=True)
        g.add_argument("--plant", action="store_true")
        g.add_argument("--seed", type=int, default=0)
    g = gsub.add_parser("compose")
    g.add_argument("--inputs", nargs="+", required=True, help="two-terminal instance JSON files")
    g.add_argument("--K", type=int, required=True, help="per-instance cut target")
    for g in gsub.choices.values():
        g.add_argument("--out", required=True, help="output prefix")
        g.add_argument("--td", action="store_true", help="also write a path decomposition")

    p = sub.add_parser("td", help="tree decompositions")
    tsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = tsub.add_parser("compute")
    t.add_argument("--graph", required=True)
    t.add_argument("--out")
    t = tsub.add_parser("validate")
    t.add_argument("--graph", required=True)
    t.add_argument("--td", required=True)

    p = sub.add_parser("validate", help="check a decomposition or a cut witness")
    p.add_argument("--graph")
    p.add_argument("--td")
    p.add_argument("--instance")
    p.add_argument("--cut", help="JSON file with a 'cut' list")
    p.add_argument("--budget", type=int)

    p = sub.add_parser("bench", help="solve every instance JSON in a directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--json", help="write rows as JSON")
    p.add_argument("--cap", type=int, default=DEFAULT_TABLE_CAP)
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_EDGE_CAP)
    p.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        if args.command in ("solve", "multicut"):
            return cmd_solve(RunConfig.from_args(args))
        if args.command == "oracle":
            return cmd_oracle(RunConfig.from_args(args), args.edge_cap)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "td":
            return cmd_td(args)
        if args.command == "validate":
            return cmd_validate(args)
        return cmd_bench(args)
    except ResourceLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, ParseError, DecompositionError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``cforest <command> ...``.

Every command except ``dot`` prints one JSON result document. Exit status is
0 on success, 1 on bad input and 2 when m * k exceeds the tree size (or no
forest of that shape exists at all).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import bench, io, oracle
from .centers import central_k_tree, jordan_center, m_center_exact
from .forest import InfeasibleError, cf
from .tree import set_eccentricity

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cforest", description="Central forests and related structures in trees.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("center", help="Jordan center")
    s.add_argument("file")

    s = sub.add_parser("mcenter", help="exact m-center by exhaustive search")
    s.add_argument("file")
    s.add_argument("-m", type=int, required=True)

    s = sub.add_parser("cktree", help="central k-tree by leaf pruning")
    s.add_argument("file")
    s.add_argument("-k", type=int, required=True)

    s = sub.add_parser("cforest", help="central forest C(T;m,k)")
    s.add_argument("file")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--vm", type=_int_list, help="centers, e.g. 1,4,13 (default: exact m-center)")
    s.add_argument("--spread", action="store_true",
                   help="use farthest-point centers instead of the exact m-center")

    s = sub.add_parser("oracle", help="exhaustive optimum and audit for one instance")
    s.add_argument("file")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--vm", type=_int_list)

    s = sub.add_parser("audit", help="audit every feasible instance on small trees")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--out", help="also write the full report here")

    s = sub.add_parser("count-trees", help="number of nonisomorphic trees of order k")
    s.add_argument("-k", type=int, required=True)

    s = sub.add_parser("bench", help="time cf on growing trees")
    s.add_argument("--sizes", type=_int_list, required=True)
    s.add_argument("-m", type=int, default=4)
    s.add_argument("-k", type=int, default=4)
    s.add_argument("--shape", choices=["random", "path", "star"], default="random")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--repeat", type=int, default=3)

    s = sub.add_parser("dot", help="Graphviz rendering, optionally with a forest")
    s.add_argument("file")
    s.add_argument("--forest", help="result document of a cforest run")
    return p


def _centers(tree, labels, m):
    if labels is None:
        return None
    if len(labels) != m:
        raise ValueError(f"--vm lists {len(labels)} centers but m={m}")
    return io.from_labels(labels, tree.n)


def _check_positive(**values):
    for name, v in values.items():
        if v is not None and v < 1:
            raise ValueError(f"{name} must be positive, got {v}")


def run(args) -> dict:
    cmd = args.command
    if cmd == "count-trees":
        _check_positive(k=args.k)
        return {"input": {"k": args.k}, "outcome": {"kind": "count", "count": oracle.count_trees(args.k)}}
    if cmd == "audit":
        report = oracle.audit_corpus(args.max_n)
        io.validate_audit(report)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(io.dumps(report))
        return {"input": {"max_n": args.max_n}, "outcome": {"kind": "audit", **report}}
    if cmd == "bench":
        _check_positive(m=args.m, k=args.k, **{f"size {i}": s for i, s in enumerate(args.sizes)})
        rows, slope = bench.bench_scaling(args.sizes, args.m, args.k, args.shape, args.seed, args.repeat)
        return {
            "input": {"m": args.m, "k": args.k, "shape": args.shape, "seed": args.seed},
            "outcome": {"kind": "bench", "exponent": slope,
                        "rows": [{"n": r.n, "seconds": r.seconds, "result": r.outcome} for r in rows]},
        }

    tree = io.read_tree(args.file)
    inp = {"n": tree.n}
    if cmd == "center":
        c = jordan_center(tree)
        return {"input": inp, "outcome": {"kind": "center", "nodes": io.to_labels(c),
                                          "eccentricity": set_eccentricity(tree, c)}}
    if cmd == "mcenter":
        _check_positive(m=args.m)
        mc = m_center_exact(tree, args.m)
        inp["m"] = args.m
        return {"input": inp, "outcome": {"kind": "mcenter", "nodes": io.to_labels(mc.nodes),
                                          "eccentricity": mc.eccentricity}}
    if cmd == "cktree":
        _check_positive(k=args.k)
        ckt = central_k_tree(tree, args.k)
        inp["k"] = args.k
        return {"input": inp, "outcome": {"kind": "central_k_tree", "nodes": io.to_labels(ckt.nodes),
                                          "eccentricity": ckt.eccentricity}}
    if cmd in ("cforest", "oracle"):
        _check_positive(m=args.m, k=args.k)
        inp.update(m=args.m, k=args.k)
        if args.m * args.k > tree.n:
            raise InfeasibleError(f"m*k = {args.m * args.k} exceeds n = {tree.n}")
        v_m = _centers(tree, args.vm, args.m)
        if v_m is None:
            if cmd == "cforest" and args.spread:
                v_m = bench.spread_centers(tree, args.m)
            else:
                v_m = list(m_center_exact(tree, args.m).nodes)
        inp["v_m"] = [c + 1 for c in v_m]
        if cmd == "cforest":
            out = cf(tree, v_m, args.k)
            doc = io.forest_outcome(out)
            if out.forest is None:
                doc["stalled_min"] = out.stalled_min
            return {"input": inp, "outcome": doc}
        rep = oracle.audit_instance(tree, args.m, args.k, v_m)
        if rep.optimum is None:
            raise InfeasibleError(f"no {args.m} disjoint connected {args.k}-node subtrees exist")
        body = rep.to_json()
        outcome = {"kind": "oracle", "eccentricity": rep.optimum, "optimum_count": rep.optimum_count,
                   "subtrees": [io.to_labels(s) for s in rep.optimal_forests[0].subtrees],
                   "cf": body["cf"], "checks": body["checks"]}
        return {"input": inp, "outcome": outcome}
    raise UsageError(f"unknown command {cmd}")


def _dot(args) -> str:
    tree = io.read_tree(args.file)
    subtrees, centers = (), ()
    if args.forest:
        with open(args.forest) as fh:
            doc = json.load(fh)
        subtrees = [io.from_labels(s, tree.n) for s in doc.get("outcome", {}).get("subtrees", [])]
        centers = io.from_labels(doc.get("input", {}).get("v_m", []), tree.n)
    return io.to_dot(tree, subtrees, centers)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"cforest: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.perf_counter()
    try:
        if args.command == "dot":
            sys.stdout.write(_dot(args))
            return EXIT_OK
        doc = run(args)
    except InfeasibleError as e:
        print(f"cforest: infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError, UsageError, json.JSONDecodeError) as e:
        print(f"cforest: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    doc = {"command": args.command, **doc, "timing_ms": round((time.perf_counter() - t0) * 1000, 3)}
    io.validate_result(doc)
    sys.stdout.write(io.dumps(doc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

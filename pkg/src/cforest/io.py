"""Edge-list tree files, JSON result documents and DOT export.

Tree files::

    # comment
    5          <- node count
    1 2        <- one edge per line, 1-based
    2 3
    ...

Everything written out (JSON, DOT) uses 1-based node labels as well.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Iterable, Sequence

import jsonschema

from .tree import Tree


class ParseError(ValueError):
    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{kind}: {message}")


def _nat(token: str) -> int | None:
    if not (token.isascii() and token.isdigit()):
        return None
    return int(token)


def parse_tree(text: str) -> Tree:
    n = None
    edges = []
    parent = []
    seen = set()

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 1 or _nat(tokens[0]) is None or _nat(tokens[0]) < 1:
                raise ParseError("bad token", f"expected a positive node count, got {line!r}", lineno)
            n = int(tokens[0])
            parent = list(range(n))
            continue
        if len(tokens) != 2 or None in (_nat(tokens[0]), _nat(tokens[1])):
            raise ParseError("bad token", f"expected 'u v', got {line!r}", lineno)
        u, v = _nat(tokens[0]), _nat(tokens[1])
        for w in (u, v):
            if not 1 <= w <= n:
                raise ParseError("count mismatch", f"node {w} outside 1..{n}", lineno)
        if u == v:
            raise ParseError("self-loop", f"edge {u} {v}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError("duplicate edge", f"edge {u} {v} repeated", lineno)
        seen.add(key)
        ru, rv = find(u - 1), find(v - 1)
        if ru == rv:
            raise ParseError("cycle", f"edge {u} {v} closes a cycle", lineno)
        parent[ru] = rv
        edges.append((u - 1, v - 1))
    if n is None:
        raise ParseError("count mismatch", "missing node count")
    roots = len({find(i) for i in range(n)})
    if roots != 1:
        raise ParseError("disconnected", f"{roots} components")
    return Tree(n, edges)


def format_tree(tree: Tree) -> str:
    lines = [str(tree.n)] + [f"{u + 1} {v + 1}" for u, v in tree.edges]
    return "\n".join(lines) + "\n"


def read_tree(path) -> Tree:
    with open(path) as fh:
        return parse_tree(fh.read())


def fixture(name: str) -> Tree:
    """Bundled example trees: ``fig2``, ``fig8``, ``fig9``."""
    text = resources.files("cforest").joinpath("data", f"{name}.tree").read_text()
    return parse_tree(text)


def to_labels(nodes: Iterable[int]) -> list[int]:
    return sorted(v + 1 for v in nodes)


def from_labels(labels: Iterable[int], n: int) -> list[int]:
    out = []
    for lab in labels:
        if not 1 <= lab <= n:
            raise ValueError(f"node {lab} outside 1..{n}")
        out.append(lab - 1)
    return out


RESULT_SCHEMA = {
    "type": "object",
    "required": ["command", "input", "outcome", "timing_ms"],
    "properties": {
        "command": {"type": "string"},
        "input": {
            "type": "object",
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "m": {"type": "integer", "minimum": 1},
                "k": {"type": "integer", "minimum": 1},
                "v_m": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
        "outcome": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"type": "string"},
                "subtrees": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                },
                "eccentricity": {"type": "integer", "minimum": 0},
                "max_k": {"type": "integer", "minimum": 1},
            },
        },
        "timing_ms": {"type": "number", "minimum": 0},
    },
}

AUDIT_INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["instance", "optimum", "optimum_count", "cf", "checks"],
    "properties": {
        "instance": {
            "type": "object",
            "required": ["n", "edges", "m", "k", "v_m"],
            "properties": {
                "n": {"type": "integer"},
                "edges": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
                "m": {"type": "integer"},
                "k": {"type": "integer"},
                "v_m": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "optimum": {"type": ["integer", "null"]},
        "optimum_count": {"type": "integer", "minimum": 0},
        "cf": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["forest", "max_k"]},
                "eccentricity": {"type": "integer"},
                "max_k": {"type": "integer"},
            },
        },
        "checks": {
            "type": "object",
            "required": ["prop6", "prop7", "thm8", "thm9_optimal"],
            "properties": {
                "prop6": {"type": "boolean"},
                "prop7": {"type": "boolean"},
                "thm8": {
                    "type": "object",
                    "required": ["holds"],
                    "properties": {"holds": {"type": "boolean"}, "witness": {"type": "object"}},
                },
                "thm9_optimal": {"type": "boolean"},
            },
        },
    },
}

AUDIT_SCHEMA = {
    "type": "object",
    "required": ["max_n", "summary", "instances"],
    "properties": {
        "max_n": {"type": "integer"},
        "summary": {"type": "object"},
        "instances": {"type": "array", "items": AUDIT_INSTANCE_SCHEMA},
    },
}


def validate_result(doc: dict) -> None:
    jsonschema.validate(doc, RESULT_SCHEMA)


def validate_audit(doc: dict) -> None:
    jsonschema.validate(doc, AUDIT_SCHEMA)


def dumps(doc: dict) -> str:
    """Canonical serialization; ``dumps(json.loads(dumps(d))) == dumps(d)``."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def forest_outcome(outcome) -> dict:
    if outcome.forest is not None:
        subtrees = [to_labels(s) for s in outcome.forest.subtrees]
        return {"kind": "forest", "subtrees": subtrees, "eccentricity": outcome.forest.eccentricity}
    return {"kind": "max_k", "max_k": outcome.max_k}


def to_dot(tree: Tree, subtrees: Sequence[Iterable[int]] = (), centers: Iterable[int] = ()) -> str:
    """Undirected DOT; each subtree becomes a cluster, centers get a double ring."""
    centers = set(centers)
    out = ["graph T {", "  node [shape=circle];"]
    placed = set()
    for i, sub in enumerate(subtrees):
        out.append(f"  subgraph cluster_{i} {{")
        out.append('    style=rounded; color=gray40;')
        for v in sorted(sub):
            placed.add(v)
            out.append(f"    {_dot_node(v, centers)}")
        out.append("  }")
    for v in range(tree.n):
        if v not in placed:
            out.append(f"  {_dot_node(v, centers)}")
    for u, v in tree.edges:
        out.append(f"  {u + 1} -- {v + 1};")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_node(v: int, centers: set) -> str:
    return f"{v + 1} [shape=doublecircle];" if v in centers else f"{v + 1};"

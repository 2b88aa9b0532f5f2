"""Exhaustive ground truth for small trees.

Everything here enumerates; nothing calls into the extension/pruning code
except :func:`audit_instance`, which compares the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator

from .centers import m_center_exact, peel_layers
from .forest import Forest, InfeasibleError, cf
from .tree import Tree, is_connected_subset, multi_source_distances, set_eccentricity

FOREST_CAP = 12
SWEEP_CAP = 9
CORPUS_CAP = 12


def _cap(default: int) -> int:
    env = os.environ.get("CF_ORACLE_CAP")
    return int(env) if env else default


def connected_subsets(tree: Tree, k: int) -> Iterator[frozenset]:
    """Every connected k-node subset exactly once.

    Grows sets from their smallest member, only ever adding larger nodes
    from the exclusive neighbourhood of the newest member (ESU scheme).
    """
    if k < 1:
        return
    adj = tree.adj

    def grow(sub: frozenset, frontier: set, reach: set, root: int):
        if len(sub) == k:
            yield sub
            return
        frontier = set(frontier)
        while frontier:
            w = frontier.pop()
            new = {u for u in adj[w] if u > root and u not in reach}
            yield from grow(sub | {w}, frontier | new, reach | new, root)

    for v in range(tree.n):
        start = {u for u in adj[v] if u > v}
        yield from grow(frozenset([v]), start, start | {v}, v)


def enumerate_forests(tree: Tree, m: int, k: int) -> Iterator[Forest]:
    if m < 1 or m * k > tree.n:
        return
    subs = sorted((tuple(sorted(s)) for s in connected_subsets(tree, k)))
    subs = [frozenset(s) for s in subs]

    def pick(start: int, used: frozenset, chosen: list):
        if len(chosen) == m:
            yield tuple(chosen)
            return
        for i in range(start, len(subs)):
            if not (subs[i] & used):
                chosen.append(subs[i])
                yield from pick(i + 1, used | subs[i], chosen)
                chosen.pop()

    for combo in pick(0, frozenset(), []):
        union = frozenset().union(*combo)
        yield Forest(combo, set_eccentricity(tree, union))


def optimal_forests(tree: Tree, m: int, k: int, max_n: int | None = None) -> tuple[int | None, list[Forest]]:
    """Optimum eccentricity and every forest attaining it (None, [] if none exist)."""
    cap = max_n if max_n is not None else _cap(FOREST_CAP)
    if tree.n > cap:
        raise ValueError(f"forest enumeration capped at n <= {cap} (got n={tree.n})")
    best, winners = None, []
    for f in enumerate_forests(tree, m, k):
        if best is None or f.eccentricity < best:
            best, winners = f.eccentricity, [f]
        elif f.eccentricity == best:
            winners.append(f)
    return best, winners


def optimal_eccentricity(tree: Tree, m: int, k: int, max_n: int | None = None) -> tuple[int, int]:
    if m * k > tree.n:
        raise InfeasibleError(f"m*k = {m * k} exceeds n = {tree.n}")
    best, winners = optimal_forests(tree, m, k, max_n)
    if best is None:
        raise InfeasibleError(f"no {m} disjoint connected {k}-node subtrees exist")
    return best, len(winners)


def best_connected_subset(tree: Tree, k: int) -> tuple[int, frozenset]:
    """Minimum eccentricity over connected k-subsets, by plain combinations."""
    best = None
    for combo in combinations(range(tree.n), k):
        if not is_connected_subset(tree, combo):
            continue
        ecc = set_eccentricity(tree, combo)
        if best is None or ecc < best[0]:
            best = (ecc, frozenset(combo))
    return best


def contains_smaller(big: Forest, small: Forest) -> bool:
    """Each subtree of ``small`` sits inside its own subtree of ``big``."""
    hosts = set()
    for s in small.subtrees:
        host = next((i for i, b in enumerate(big.subtrees) if s <= b), None)
        if host is None or host in hosts:
            return False
        hosts.add(host)
    return True


def containment_counterexample(tree: Tree, m: int, k: int, cache=None) -> Forest | None:
    """First optimal forest of order k holding no optimal forest of order k-1."""
    if k < 2:
        return None
    get = cache or (lambda mm, kk: optimal_forests(tree, mm, kk))
    _, big = get(m, k)
    _, small = get(m, k - 1)
    for f in big:
        if not any(contains_smaller(f, g) for g in small):
            return f
    return None


# -- counting and generating free trees --------------------------------------

@lru_cache(maxsize=None)
def _rooted_counts(limit: int) -> tuple[int, ...]:
    # r[n]: rooted unlabeled trees on n nodes, from T(x) = x exp(sum T(x^i)/i)
    r = [0, 1]
    for n in range(1, limit):
        total = 0
        for j in range(1, n + 1):
            s = sum(d * r[d] for d in range(1, j + 1) if j % d == 0)
            total += s * r[n - j + 1]
        r.append(total // n)
    return tuple(r)


def count_trees(k: int) -> int:
    """Nonisomorphic free trees on k nodes (Otter's dissimilarity formula)."""
    if k < 1:
        raise ValueError("order must be positive")
    r = _rooted_counts(k)
    # A(x) = 1 + T(x) - T(x)^2 / 2 + T(x^2) / 2, coefficient of x^k
    square = sum(r[i] * r[k - i] for i in range(1, k))
    half = r[k // 2] if k % 2 == 0 else 0
    value = Fraction(r[k]) - Fraction(square, 2) + Fraction(half, 2)
    assert value.denominator == 1
    return int(value)


def combination_bound(x: int, m: int) -> int:
    """Ordered choices of a tree type for each of m subtrees."""
    if x < 1 or m < 1:
        raise ValueError("x and m must be positive")
    return x ** m


def type_multisets(x: int, m: int) -> int:
    """Unordered mixes of tree types among m subtrees."""
    return comb(x + m - 1, m)


def type_mixes(x: int, m: int) -> int:
    """Nonempty sets of tree types that can occur together among m subtrees."""
    return sum(comb(x, j) for j in range(1, min(x, m) + 1))


def canonical_form(tree: Tree) -> str:
    center = peel_layers(tree, range(tree.n))[-1]
    return min(_encode(tree, c, -1) for c in center)


def _encode(tree: Tree, root: int, parent: int) -> str:
    # iterative AHU encoding; recursion depth would hit path-shaped trees
    order, parents = [root], {root: parent}
    for u in order:
        for w in tree.adj[u]:
            if w != parents[u]:
                parents[w] = u
                order.append(w)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[w] for w in tree.adj[u] if w != parents[u])
        code[u] = "(" + "".join(kids) + ")"
    return code[root]


@dataclass
class TreeCorpus:
    max_n: int
    trees: list = field(default_factory=list)

    def of_order(self, n: int) -> list[Tree]:
        return [t for t in self.trees if t.n == n]

    def counts(self) -> dict[int, int]:
        out = {n: 0 for n in range(1, self.max_n + 1)}
        for t in self.trees:
            out[t.n] += 1
        return out


def generate_corpus(max_n: int, cap: int | None = None) -> TreeCorpus:
    """All free trees up to ``max_n`` nodes, one per isomorphism class.

    Order n+1 is built by hanging a leaf on every node of every order-n tree
    and keeping one tree per canonical string.
    """
    cap = cap if cap is not None else _cap(CORPUS_CAP)
    if max_n > cap:
        raise ValueError(f"corpus capped at {cap} nodes")
    if max_n < 1:
        return TreeCorpus(max_n, [])
    level = [Tree(1, [])]
    trees = list(level)
    for n in range(2, max_n + 1):
        found: dict[str, Tree] = {}
        for t in level:
            for v in range(t.n):
                bigger = Tree(n, list(t.edges) + [(v, n - 1)])
                found.setdefault(canonical_form(bigger), bigger)
        level = [found[key] for key in sorted(found)]
        trees.extend(level)
    return TreeCorpus(max_n, trees)


# -- audits --------------------------------------------------------------------

@dataclass
class OracleReport:
    tree: Tree
    m: int
    k: int
    v_m: tuple
    optimum: int | None
    optimum_count: int
    optimal_forests: list
    cf_result: object
    cf_matches_optimum: bool
    prop6: bool
    prop7: bool
    thm8_holds: bool
    thm8_witness: Forest | None = None

    def to_json(self) -> dict:
        out = self.cf_result
        cf_doc = ({"kind": "forest", "eccentricity": out.forest.eccentricity}
                  if out.forest is not None else {"kind": "max_k", "max_k": out.max_k})
        thm8 = {"holds": self.thm8_holds}
        if self.thm8_witness is not None:
            thm8["witness"] = {"forest": [sorted(v + 1 for v in s) for s in self.thm8_witness.subtrees],
                               "eccentricity": self.thm8_witness.eccentricity}
        return {
            "instance": {
                "n": self.tree.n,
                "edges": [[u + 1, v + 1] for u, v in self.tree.edges],
                "m": self.m,
                "k": self.k,
                "v_m": [c + 1 for c in self.v_m],
            },
            "optimum": self.optimum,
            "optimum_count": self.optimum_count,
            "cf": cf_doc,
            "checks": {
                "prop6": self.prop6,
                "prop7": self.prop7,
                "thm8": thm8,
                "thm9_optimal": self.cf_matches_optimum,
            },
        }


class _TreeCache:
    """Per-tree memo of optimal forests and exact centers."""

    def __init__(self, tree: Tree, max_n: int | None = None):
        self.tree = tree
        self.max_n = max_n
        self._opt: dict = {}
        self._mc: dict = {}
        self._ckt: dict = {}

    def optimal(self, m: int, k: int):
        key = (m, k)
        if key not in self._opt:
            self._opt[key] = optimal_forests(self.tree, m, k, self.max_n)
        return self._opt[key]

    def mcenter(self, m: int):
        if m not in self._mc:
            self._mc[m] = m_center_exact(self.tree, m)
        return self._mc[m]

    def best_subtree(self, k: int):
        if k not in self._ckt:
            self._ckt[k] = best_connected_subset(self.tree, k)
        return self._ckt[k]


def audit_instance(tree: Tree, m: int, k: int, v_m=None, keep: int = 10, cache: _TreeCache | None = None) -> OracleReport:
    if m * k > tree.n:
        raise InfeasibleError(f"m*k = {m * k} exceeds n = {tree.n}")
    cache = cache or _TreeCache(tree)
    optimum, winners = cache.optimal(m, k)
    opt1, _ = cache.optimal(m, 1)
    prop6 = opt1 == cache.mcenter(m).eccentricity
    optk, _ = cache.optimal(1, k)
    prop7 = optk == cache.best_subtree(k)[0]
    witness = containment_counterexample(tree, m, k, cache.optimal) if optimum is not None else None
    if v_m is None:
        v_m = cache.mcenter(m).nodes
    result = cf(tree, v_m, k)
    matches = (result.forest is not None and optimum is not None
               and result.forest.eccentricity == optimum)
    return OracleReport(tree, m, k, tuple(v_m), optimum, len(winners), winners[:keep],
                        result, matches, prop6, prop7, witness is None, witness)


def audit_corpus(max_n: int) -> dict:
    """Audit every feasible (tree, m, k) on all trees with at most ``max_n`` nodes."""
    cap = _cap(FOREST_CAP)
    if max_n > cap:
        raise ValueError(f"audit capped at {cap} nodes")
    corpus = generate_corpus(max_n)
    instances = []
    forests = optimal_hits = thm8_fail = prop_fail = no_forest = 0
    counterexamples = []
    for tree in corpus.trees:
        cache = _TreeCache(tree, max_n)
        for m in range(1, tree.n + 1):
            for k in range(1, tree.n // m + 1):
                rep = audit_instance(tree, m, k, cache=cache)
                instances.append(rep.to_json())
                if rep.optimum is None:
                    no_forest += 1
                if rep.cf_result.forest is not None:
                    forests += 1
                optimal_hits += rep.cf_matches_optimum
                if not (rep.prop6 and rep.prop7):
                    prop_fail += 1
                if not rep.thm8_holds:
                    thm8_fail += 1
                    if len(counterexamples) < 20:
                        counterexamples.append(instances[-1])
    solvable = len(instances) - no_forest
    summary = {
        "trees": len(corpus.trees),
        "instances": len(instances),
        "instances_without_forest": no_forest,
        "cf_forest_outcomes": forests,
        "cf_optimal": optimal_hits,
        "cf_optimality_rate": round(optimal_hits / solvable, 6) if solvable else None,
        "special_case_failures": prop_fail,
        "containment_counterexamples": thm8_fail,
        "containment_examples": counterexamples,
    }
    return {"max_n": max_n, "summary": summary, "instances": instances}

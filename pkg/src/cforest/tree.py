"""Unweighted trees, hop distances and set eccentricity.

Nodes are ``0..n-1`` internally. Anything user-facing (files, CLI, JSON)
uses 1-based labels; conversion happens in :mod:`cforest.io`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class TreeError(ValueError):
    """Raised when an edge list does not describe a tree."""


@dataclass(frozen=True, init=False)
class Tree:
    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 1:
            raise TreeError("a tree needs at least one node")
        norm = []
        seen = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise TreeError(f"edge ({u}, {v}) has a node out of range")
            if u == v:
                raise TreeError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
            nbrs[u].append(v)
            nbrs[v].append(u)
        if len(norm) != n - 1:
            raise TreeError(f"expected {n - 1} edges, got {len(norm)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in nbrs))
        if n > 1 and len(components(self, range(n))) != 1:
            raise TreeError("edge list is not connected")

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max(len(a) for a in self.adj)

    @classmethod
    def path(cls, n: int) -> Tree:
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, leaves: int) -> Tree:
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> Tree:
        """Node ``i + 1`` hangs off ``parents[i]``."""
        return cls(len(parents) + 1, [(p, i + 1) for i, p in enumerate(parents)])


def _check_nodes(tree: Tree, nodes: Iterable[int]) -> list[int]:
    out = list(nodes)
    for v in out:
        if not 0 <= v < tree.n:
            raise ValueError(f"node {v} out of range for a tree on {tree.n} nodes")
    return out


def bfs_distances(tree: Tree, source: int) -> list[int]:
    return multi_source_distances(tree, [source])


def multi_source_distances(tree: Tree, sources: Iterable[int]) -> list[int]:
    """Distance from every node to the nearest source, one BFS sweep."""
    sources = _check_nodes(tree, sources)
    if not sources:
        raise ValueError("need at least one source")
    dist = [-1] * tree.n
    queue = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    adj = tree.adj
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def set_eccentricity(tree: Tree, nodes: Iterable[int]) -> int:
    """Max over all nodes of the distance to the nearest member of ``nodes``."""
    nodes = list(nodes)
    if not nodes:
        raise ValueError("eccentricity of an empty set is undefined")
    return max(multi_source_distances(tree, nodes))


def eccentricity(tree: Tree, v: int) -> int:
    return max(bfs_distances(tree, v))


def components(tree: Tree, nodes: Iterable[int]) -> list[set[int]]:
    """Connected components of the subgraph induced by ``nodes``."""
    members = set(nodes)
    comps = []
    unseen = set(members)
    while unseen:
        start = unseen.pop()
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in tree.adj[u]:
                if w in unseen:
                    unseen.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def is_connected_subset(tree: Tree, nodes: Iterable[int]) -> bool:
    nodes = set(_check_nodes(tree, nodes))
    if not nodes:
        raise ValueError("connectivity of an empty set is undefined")
    return len(components(tree, nodes)) == 1


def leaves(tree: Tree, restricted_to: Iterable[int] | None = None) -> set[int]:
    """Nodes of degree <= 1 in the subtree induced by ``restricted_to``."""
    if restricted_to is None:
        members = set(range(tree.n))
    else:
        members = set(_check_nodes(tree, restricted_to))
        if not members:
            raise ValueError("empty restriction")
        if len(components(tree, members)) != 1:
            raise ValueError("restriction does not induce a connected subtree")
    return _leaves_of(tree, members)


def _leaves_of(tree: Tree, members: set[int]) -> set[int]:
    # no connectivity check; callers inside the package pass subtrees
    out = set()
    for v in members:
        deg = 0
        for w in tree.adj[v]:
            if w in members:
                deg += 1
                if deg > 1:
                    break
        if deg <= 1:
            out.add(v)
    return out

"""Jordan center, exact m-center and the leaf-pruning central-k-tree."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .tree import Tree, bfs_distances, set_eccentricity

log = logging.getLogger(__name__)

# chooser(candidates, count, core, tree) -> `count` members of `candidates`
SubsetChooser = Callable[[Sequence[int], int, frozenset, Tree], list]

MCENTER_CAP = 20


def smallest_adjacent_first(candidates: Sequence[int], count: int, core: frozenset, tree: Tree) -> list[int]:
    """Default chooser: repeatedly take the smallest candidate touching the
    current core (or the smallest overall when the core is empty)."""
    pool = sorted(candidates)
    picked: list[int] = []
    grown = set(core)
    while len(picked) < count:
        pick = None
        for c in pool:
            if not grown or any(w in grown for w in tree.adj[c]):
                pick = c
                break
        if pick is None:
            # only reachable with a hand-written candidate list; keep going
            pick = pool[0]
        pool.remove(pick)
        picked.append(pick)
        grown.add(pick)
    return picked


def peel_layers(tree: Tree, members: Iterable[int]) -> list[list[int]]:
    """Leaf layers of the subtree induced by ``members``.

    ``layers[0]`` holds its leaves, ``layers[1]`` the leaves left after
    removing ``layers[0]`` all at once, and so on. The last layer is the
    Jordan center of the subtree. Runs in linear time.
    """
    members = set(members)
    if not members:
        return []
    deg = {v: sum(1 for w in tree.adj[v] if w in members) for v in members}
    layer_of: dict[int, int] = {}
    queue = deque()
    for v in sorted(members):
        if deg[v] <= 1:
            layer_of[v] = 0
            queue.append(v)
    while queue:
        u = queue.popleft()
        for w in tree.adj[u]:
            if w in members and w not in layer_of:
                deg[w] -= 1
                if deg[w] <= 1:
                    layer_of[w] = layer_of[u] + 1
                    queue.append(w)
    layers: list[list[int]] = [[] for _ in range(max(layer_of.values()) + 1)]
    for v in sorted(members):
        layers[layer_of[v]].append(v)
    return layers


@dataclass(frozen=True)
class PruneResult:
    nodes: frozenset
    layers: tuple  # every leaf layer of the pruned subtree, as frozensets
    stop: int  # index of the last layer stripped
    filler: tuple  # subset drawn from layers[stop] to reach exactly k

    @property
    def stripped(self) -> tuple:
        """L(0), ..., L(stop)."""
        return self.layers[:self.stop + 1]

    @property
    def cores(self) -> tuple:
        """T(1), ..., T(stop + 1): what is left after each strip."""
        out = []
        for i in range(1, self.stop + 2):
            out.append(frozenset().union(*self.layers[i:]))
        return tuple(out)


def prune_to_order(tree: Tree, members: Iterable[int], k: int,
                   chooser: SubsetChooser | None = None) -> PruneResult:
    """Strip leaf layers until at most ``k`` nodes remain, then refill from
    the last stripped layer to exactly ``k``."""
    chooser = chooser or smallest_adjacent_first
    layers = peel_layers(tree, members)
    total = sum(len(x) for x in layers)
    if not 1 <= k <= total:
        raise ValueError(f"order {k} outside 1..{total}")
    remaining = total
    i = 0
    while True:
        remaining -= len(layers[i])
        if remaining <= k:
            break
        i += 1
    core = frozenset(v for layer in layers[i + 1:] for v in layer)
    filler = chooser(layers[i], k - remaining, core, tree)
    if len(filler) != k - remaining or not set(filler) <= set(layers[i]):
        raise ValueError("chooser returned an invalid subset")
    return PruneResult(core | frozenset(filler), tuple(frozenset(x) for x in layers), i, tuple(filler))


def jordan_center(tree: Tree) -> frozenset:
    return frozenset(peel_layers(tree, range(tree.n))[-1])


@dataclass(frozen=True)
class MCenter:
    m: int
    nodes: tuple
    eccentricity: int


def distance_matrix(tree: Tree) -> list[list[int]]:
    return [bfs_distances(tree, v) for v in range(tree.n)]


def degree_guard(tree: Tree, m: int) -> bool:
    """False when m exceeds the maximum degree.

    On a star with fewer limbs than centers some limb must hold two centers;
    this is only reported, never enforced.
    """
    ok = m <= tree.max_degree() or tree.n == 1
    if not ok:
        log.info("m=%d exceeds max degree %d; some limb must hold two centers", m, tree.max_degree())
    return ok


def m_center_exact(tree: Tree, m: int, max_n: int = MCENTER_CAP,
                   dist: list[list[int]] | None = None) -> MCenter:
    """Exhaustive m-center; ties go to the lexicographically smallest set."""
    n = tree.n
    if not 1 <= m <= n:
        raise ValueError(f"m={m} outside 1..{n}")
    if m >= 2 and n > max_n:
        raise ValueError(f"exhaustive m-center capped at n <= {max_n} (got n={n})")
    degree_guard(tree, m)
    if m == n:
        return MCenter(m, tuple(range(n)), 0)
    dist = dist or distance_matrix(tree)
    best, best_ecc = None, n
    for combo in combinations(range(n), m):
        ecc = max(map(min, zip(*(dist[c] for c in combo))))
        if ecc < best_ecc:
            best, best_ecc = combo, ecc
            if ecc == 1 and m < n:
                # 0 needs m == n, handled above
                break
    return MCenter(m, best, best_ecc)


@dataclass(frozen=True)
class CentralKTree:
    k: int
    nodes: frozenset
    eccentricity: int
    trace: PruneResult


def central_k_tree(tree: Tree, k: int, chooser: SubsetChooser | None = None) -> CentralKTree:
    if not 1 <= k <= tree.n:
        raise ValueError(f"k={k} outside 1..{tree.n}")
    res = prune_to_order(tree, range(tree.n), k, chooser)
    return CentralKTree(k, res.nodes, set_eccentricity(tree, res.nodes), res)

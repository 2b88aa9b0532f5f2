"""Central forests: m disjoint k-node subtrees of minimum eccentricity.

The pipeline is

1. :func:`build_st` splits the tree into m rows around the given centers,
2. :func:`extend_st` grows a short row by pulling hanging subtrees out of
   neighbouring rows (recursively, if the neighbour is short itself),
3. :func:`prune_st` cuts every row down to a k-node subtree by leaf
   stripping,

and :func:`cf` drives the three, reporting the largest reachable order when
some row cannot be grown to k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .centers import SubsetChooser, prune_to_order, smallest_adjacent_first
from .tree import Tree, bfs_distances, components, set_eccentricity

log = logging.getLogger(__name__)


class InfeasibleError(ValueError):
    """m * k exceeds the number of nodes."""


@dataclass
class STMatrix:
    """Partition of the nodes into rows; row i starts with center i."""

    rows: list[list[int]]
    row_of: list[int]

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence[int]]) -> STMatrix:
        row_of = [-1] * n
        for i, row in enumerate(rows):
            for v in row:
                row_of[v] = i
        return cls([list(r) for r in rows], row_of)

    def copy(self) -> STMatrix:
        return STMatrix([list(r) for r in self.rows], list(self.row_of))

    def sizes(self) -> list[int]:
        return [len(r) for r in self.rows]

    def as_sets(self) -> list[frozenset]:
        return [frozenset(r) for r in self.rows]

    def move(self, nodes: Sequence[int], src: int, dst: int) -> None:
        gone = set(nodes)
        self.rows[src] = [v for v in self.rows[src] if v not in gone]
        self.rows[dst].extend(nodes)
        for v in nodes:
            self.row_of[v] = dst


def _check_centers(tree: Tree, v_m: Sequence[int]) -> list[int]:
    v_m = list(v_m)
    if not v_m:
        raise ValueError("need at least one center")
    if len(set(v_m)) != len(v_m):
        raise ValueError("duplicate centers")
    for c in v_m:
        if not 0 <= c < tree.n:
            raise ValueError(f"center {c} out of range")
    return v_m


def build_st(tree: Tree, v_m: Sequence[int], repairs: list | None = None) -> STMatrix:
    """Assign every node to its nearest center.

    Nodes tied between several centers wait until all others are placed,
    then go (in id order) to the currently smallest tied row, lowest index
    on equal size. A final pass moves any tied node that ended up cut off
    from its row's center into the row of its neighbour on the way to that
    center; moves are appended to ``repairs`` as ``(node, old_row, new_row)``.
    """
    v_m = _check_centers(tree, v_m)
    m = len(v_m)
    dist = [bfs_distances(tree, c) for c in v_m]
    centers = set(v_m)
    rows = [[c] for c in v_m]
    tied = []
    for v in range(tree.n):
        if v in centers:
            continue
        best = min(d[v] for d in dist)
        near = [i for i in range(m) if dist[i][v] == best]
        if len(near) == 1:
            rows[near[0]].append(v)
        else:
            tied.append((v, near))
    for v, near in tied:
        row = min(near, key=lambda i: (len(rows[i]), i))
        rows[row].append(v)
    st = STMatrix.from_rows(tree.n, rows)
    if tied:
        _repair(tree, st, dist, tied, repairs)
    return st


def _repair(tree: Tree, st: STMatrix, dist: list[list[int]], tied, repairs) -> None:
    # closer nodes first, so a node's step toward its center is already final
    order = sorted(tied, key=lambda t: (dist[t[1][0]][t[0]], t[0]))
    for _ in range(len(order) + 1):
        moved = False
        for v, _near in order:
            row = st.row_of[v]
            step = next(w for w in tree.adj[v] if dist[row][w] == dist[row][v] - 1)
            if st.row_of[step] != row:
                new = st.row_of[step]
                st.move([v], row, new)
                log.debug("repair: node %d row %d -> %d", v, row, new)
                if repairs is not None:
                    repairs.append((v, row, new))
                moved = True
        if not moved:
            return
    raise RuntimeError("row repair did not converge")


def nodes_to_be_removed(tree: Tree, st: STMatrix, row: int, v: int) -> list[int]:
    """Part of ``row`` that hangs off ``v`` away from the row's center, ``v`` first."""
    if st.row_of[v] != row:
        raise ValueError(f"node {v} is not in row {row}")
    anchor = st.rows[row][0]
    if v == anchor:
        raise ValueError("a row's center cannot be removed")
    members = set(st.rows[row])
    members.discard(v)
    # everything still attached to the anchor stays
    stay = {anchor}
    stack = [anchor]
    while stack:
        u = stack.pop()
        for w in tree.adj[u]:
            if w in members and w not in stay:
                stay.add(w)
                stack.append(w)
    out = [v]
    seen = {v}
    i = 0
    while i < len(out):
        for w in tree.adj[out[i]]:
            if w in members and w not in stay and w not in seen:
                seen.add(w)
                out.append(w)
        i += 1
    return out


@dataclass
class ExtendState:
    """Bookkeeping of one extension request (one outer CF iteration)."""

    gray: set = field(default_factory=set)
    candidates: list = field(default_factory=list)  # archived (rows, added, fulfilled)
    owed: dict = field(default_factory=dict)  # row -> nodes it is handing over
    events: list = field(default_factory=list)
    max_depth: int = 0


class _Extender:
    def __init__(self, tree: Tree, st: STMatrix, k: int, y: int, centers: set,
                 state: ExtendState, chooser: SubsetChooser):
        self.tree = tree
        self.st = st
        self.k = k
        self.y = y
        self.centers = centers
        self.state = state
        self.chooser = chooser
        self.active = [y]
        self.stop = True

    def extend(self, l: int) -> int | None:
        """Grow row ``l``; returns nodes added, or None once row y is full."""
        st, k, state = self.st, self.k, self.state
        start = len(st.rows[l])
        owed = set(state.owed.get(l, ()))
        idx = 0
        while idx < len(st.rows[l]):
            u = st.rows[l][idx]
            idx += 1
            if u in owed:
                continue
            for v in self.tree.adj[u]:
                r = st.row_of[v]
                if r == l or v in state.gray or v in self.centers or r in self.active:
                    continue
                self.stop = False
                x = nodes_to_be_removed(self.tree, st, r, v)
                state.owed[r] = x
                left = len(st.rows[r]) - len(x)
                if left >= k:
                    self._transfer(x, r, l)
                    state.gray.add(v)
                    if len(st.rows[l]) - len(owed) >= k:
                        return None if l == self.y else len(st.rows[l]) - start
                    continue
                self.active.append(r)
                state.max_depth = max(state.max_depth, len(self.active))
                assert len(self.active) <= len(st.rows)
                got = self.extend(r)
                self.active.pop()
                if left + got >= k:
                    self._transfer(x, r, l)
                    if len(st.rows[l]) - len(owed) >= k:
                        return None if l == self.y else len(st.rows[l]) - start
                else:
                    state.gray.add(v)
        return len(st.rows[l]) - start

    def _transfer(self, x, src, dst):
        self.st.move(x, src, dst)
        self.state.events.append(("transfer", tuple(x), src, dst, len(self.active)))


def _trial_score(tree: Tree, rows, k: int, chooser: SubsetChooser) -> int:
    picked = []
    for row in rows:
        picked.extend(prune_to_order(tree, row, min(k, len(row)), chooser).nodes)
    return set_eccentricity(tree, picked)


def extend_st(tree: Tree, st: STMatrix, y: int, k: int, centers: Sequence[int],
              state: ExtendState | None = None,
              chooser: SubsetChooser | None = None) -> tuple[STMatrix, int]:
    """Try to bring row ``y`` up to ``k`` nodes.

    Every way of filling the row that the exploration finds is archived; the
    archive entry whose trial-pruned forest has the smallest eccentricity
    wins (earliest on ties). If no entry fills the row, the one that added
    the most nodes wins. Returns the new matrix and the nodes added to row y.
    """
    chooser = chooser or smallest_adjacent_first
    state = state if state is not None else ExtendState()
    old = st.copy()
    base = len(old.rows[y])
    while True:
        work = old.copy()
        ext = _Extender(tree, work, k, y, set(centers), state, chooser)
        state.owed = {}
        ext.extend(y)
        if ext.stop:
            break
        added = len(work.rows[y]) - base
        state.candidates.append((work, added, len(work.rows[y]) >= k))
        state.events.append(("store", len(state.candidates) - 1, added))
    if not state.candidates:
        return old, 0
    full = [i for i, c in enumerate(state.candidates) if c[2]]
    if full:
        scores = [_trial_score(tree, state.candidates[i][0].rows, k, chooser) for i in full]
        pick = full[scores.index(min(scores))]
    else:
        adds = [c[1] for c in state.candidates]
        pick = adds.index(max(adds))
    state.events.append(("select", pick))
    chosen, added, _ = state.candidates[pick]
    return chosen, added


def prune_st(tree: Tree, st: STMatrix, k: int, chooser: SubsetChooser | None = None) -> list[frozenset]:
    out = []
    for i, row in enumerate(st.rows):
        if len(row) < k:
            raise ValueError(f"row {i} has {len(row)} < {k} nodes")
        out.append(prune_to_order(tree, row, k, chooser).nodes)
    return out


@dataclass(frozen=True)
class Forest:
    subtrees: tuple  # frozensets, one per row
    eccentricity: int

    @property
    def nodes(self) -> frozenset:
        return frozenset().union(*self.subtrees)


@dataclass
class CFOutcome:
    forest: Forest | None = None
    max_k: int | None = None
    stalled_min: int | None = None
    st: STMatrix | None = None
    events: list = field(default_factory=list)
    repairs: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        return "forest" if self.forest is not None else "max_k"


def feasibility_bound(tree: Tree, m: int, k: int) -> bool:
    return m * k <= tree.n


def cf(tree: Tree, v_m: Sequence[int], k: int, chooser: SubsetChooser | None = None) -> CFOutcome:
    """Central forest of ``len(v_m)`` subtrees of order ``k`` grown around ``v_m``.

    When some row cannot be grown to ``k`` the outcome carries ``max_k``, the
    largest order below ``k`` for which the same procedure does finish, and
    ``stalled_min``, the smallest row size at the moment growth stalled.
    """
    v_m = _check_centers(tree, v_m)
    if k < 1:
        raise ValueError("k must be positive")
    if not feasibility_bound(tree, len(v_m), k):
        raise InfeasibleError(f"m*k = {len(v_m) * k} exceeds n = {tree.n}")
    out = _run(tree, v_m, k, chooser)
    if out.forest is None:
        # order 1 never needs growth, so the scan always ends
        for q in range(k - 1, 0, -1):
            if _run(tree, v_m, q, chooser).forest is not None:
                out.max_k = q
                break
    return out


def _run(tree: Tree, v_m: list[int], k: int, chooser: SubsetChooser | None) -> CFOutcome:
    out = CFOutcome()
    st = build_st(tree, v_m, out.repairs)
    while min(st.sizes()) < k:
        sizes = st.sizes()
        l = sizes.index(min(sizes))
        state = ExtendState()
        st, added = extend_st(tree, st, l, k, v_m, state, chooser)
        out.events.append(("extend", l, added))
        out.events.extend(state.events)
        if added == 0:
            out.stalled_min = min(st.sizes())
            out.st = st
            return out
    subtrees = prune_st(tree, st, k, chooser)
    out.forest = Forest(tuple(subtrees), set_eccentricity(tree, frozenset().union(*subtrees)))
    out.st = st
    return out


def adjacent_center_bound(tree: Tree, v_m: Sequence[int]) -> int | None:
    """Smallest piece left after cutting the edges between connected centers.

    None when the centers do not induce a connected subtree.
    """
    v_m = _check_centers(tree, v_m)
    if len(components(tree, v_m)) != 1:
        return None
    centers = set(v_m)
    rest = set(range(tree.n)) - centers
    sizes = {c: 1 for c in v_m}
    for comp in components(tree, rest):
        # a hanging piece touches exactly one center
        touch = {w for v in comp for w in tree.adj[v] if w in centers}
        (c,) = touch
        sizes[c] += len(comp)
    return min(sizes.values())

"""Wall-clock scaling of :func:`cforest.forest.cf` on generated trees."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .centers import jordan_center
from .forest import cf
from .tree import Tree, multi_source_distances


def random_tree(n: int, rng: random.Random) -> Tree:
    """Random recursive tree: node i attaches to a uniform earlier node."""
    return Tree.from_parents([rng.randrange(i + 1) for i in range(n - 1)])


def make_tree(shape: str, n: int, rng: random.Random) -> Tree:
    if shape == "path":
        return Tree.path(n)
    if shape == "star":
        return Tree.star(n - 1)
    if shape == "random":
        return random_tree(n, rng)
    raise ValueError(f"unknown shape {shape!r}")


def spread_centers(tree: Tree, m: int) -> list[int]:
    """Farthest-point centers seeded at the Jordan center.

    Heuristic (within a factor 2 of the best m-center radius), used where
    exhaustive search is out of reach.
    """
    centers = [min(jordan_center(tree))]
    while len(centers) < m:
        dist = multi_source_distances(tree, centers)
        far = max(range(tree.n), key=lambda v: (dist[v], -v))
        if dist[far] == 0:
            break
        centers.append(far)
    return centers


@dataclass
class BenchRow:
    n: int
    seconds: float
    outcome: str


def bench_scaling(sizes, m: int = 4, k: int = 4, shape: str = "random",
                  seed: int = 0, repeat: int = 3) -> tuple[list[BenchRow], float | None]:
    """Time cf per size (best of ``repeat``); returns rows and the fitted
    log-log slope of time against n * (m + k)."""
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    rng = random.Random(seed)
    rows = []
    for n in sizes:
        tree = make_tree(shape, n, rng)
        v_m = spread_centers(tree, m)
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            out = cf(tree, v_m, k)
            best = min(best, time.perf_counter() - t0)
        rows.append(BenchRow(n, best, out.kind))
    return rows, fit_exponent([r.n * (m + k) for r in rows], [r.seconds for r in rows])


def fit_exponent(xs, ys) -> float | None:
    if len(xs) < 2:
        return None
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)

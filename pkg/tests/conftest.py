import pytest
from hypothesis import strategies as st

from cforest.io import fixture
from cforest.oracle import generate_corpus
from cforest.tree import Tree

FIG9_CENTERS = [1, 4, 13, 16, 21, 27]


def zero(labels):
    return [v - 1 for v in labels]


def one(nodes):
    return sorted(v + 1 for v in nodes)


@pytest.fixture(scope="session")
def fig9():
    return fixture("fig9")


@pytest.fixture(scope="session")
def fig9_centers():
    return zero(FIG9_CENTERS)


@pytest.fixture(scope="session")
def fig2():
    return fixture("fig2")


@pytest.fixture(scope="session")
def corpus9():
    return generate_corpus(9)


def all_pairs(tree):
    """Floyd-Warshall on the edge list; independent of the BFS code."""
    n = tree.n
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in tree.edges:
        d[u][v] = d[v][u] = 1
    for w in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][w] + d[w][j] < d[i][j]:
                    d[i][j] = d[i][w] + d[w][j]
    return d


@st.composite
def trees(draw, min_n=1, max_n=30):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i)) for i in range(n - 1)]
    perm = draw(st.permutations(range(n)))
    return Tree(n, [(perm[p], perm[i + 1]) for i, p in enumerate(parents)])

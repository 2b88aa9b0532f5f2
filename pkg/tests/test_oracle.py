import json
from itertools import combinations

import pytest
from hypothesis import given, settings

from cforest.centers import central_k_tree, m_center_exact
from cforest.forest import Forest, InfeasibleError
from cforest.io import validate_audit
from cforest.oracle import (
    audit_corpus,
    audit_instance,
    best_connected_subset,
    canonical_form,
    combination_bound,
    connected_subsets,
    containment_counterexample,
    contains_smaller,
    count_trees,
    enumerate_forests,
    generate_corpus,
    optimal_eccentricity,
    type_mixes,
    type_multisets,
)
from cforest.tree import Tree, is_connected_subset

from conftest import one, trees

KNOWN = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159]


def test_connected_subsets_match_combinations(corpus9):
    for tree in corpus9.trees:
        if tree.n > 8:
            continue
        for k in range(1, tree.n + 1):
            got = list(connected_subsets(tree, k))
            assert len(got) == len(set(got))
            ref = {frozenset(c) for c in combinations(range(tree.n), k) if is_connected_subset(tree, c)}
            assert set(got) == ref


def test_enumerate_forests_examples():
    p3 = Tree.path(3)
    assert sorted(one(f.subtrees[0]) for f in enumerate_forests(p3, 1, 2)) == [[1, 2], [2, 3]]
    p4 = Tree.path(4)
    got = [[one(s) for s in f.subtrees] for f in enumerate_forests(p4, 2, 2)]
    assert got == [[[1, 2], [3, 4]]]
    assert len(list(enumerate_forests(Tree.star(3), 1, 2))) == 3


def test_enumerate_forests_infeasible_is_empty():
    assert list(enumerate_forests(Tree.path(3), 2, 2)) == []


@settings(max_examples=40, deadline=None)
@given(trees(max_n=8))
def test_enumerate_forests_distinct_and_valid(tree):
    for m in range(1, tree.n + 1):
        for k in range(1, tree.n // m + 1):
            seen = set()
            for f in enumerate_forests(tree, m, k):
                key = frozenset(f.subtrees)
                assert key not in seen
                seen.add(key)
                assert len(f.subtrees) == m
                assert len(f.nodes) == m * k
                assert all(is_connected_subset(tree, s) for s in f.subtrees)


def test_optimal_eccentricity_examples():
    assert optimal_eccentricity(Tree.path(7), 2, 1)[0] == 2
    ecc, count = optimal_eccentricity(Tree.path(5), 1, 3)
    assert (ecc, count) == (1, 1)
    best, witness = best_connected_subset(Tree.path(5), 3)
    assert (best, one(witness)) == (1, [2, 3, 4])
    assert optimal_eccentricity(Tree.path(6), 3, 2)[0] == 0


def test_optimal_eccentricity_errors():
    with pytest.raises(InfeasibleError):
        optimal_eccentricity(Tree.path(3), 2, 2)
    # a star cannot be split into two edges
    with pytest.raises(InfeasibleError):
        optimal_eccentricity(Tree.star(3), 2, 2)
    with pytest.raises(ValueError):
        optimal_eccentricity(Tree.path(13), 1, 1)


def test_count_trees_sequence():
    assert [count_trees(k) for k in range(1, 15)] == KNOWN
    with pytest.raises(ValueError):
        count_trees(0)


def test_combination_counts():
    assert combination_bound(2, 3) == 8
    assert combination_bound(1, 7) == 1
    assert combination_bound(count_trees(4), 2) == 4
    assert type_multisets(count_trees(4), 2) == 3
    assert type_mixes(2, 2) == 3
    with pytest.raises(ValueError):
        combination_bound(0, 2)


def test_corpus_sizes():
    assert len(generate_corpus(4).trees) == 5
    assert len(generate_corpus(6).trees) == 14
    (single,) = generate_corpus(1).trees
    assert single.n == 1
    with pytest.raises(ValueError):
        generate_corpus(13)


def test_corpus_counts_match_formula():
    corpus = generate_corpus(10)
    assert corpus.counts() == {n: count_trees(n) for n in range(1, 11)}
    assert len({canonical_form(t) for t in corpus.trees}) == len(corpus.trees)


@given(trees(max_n=12))
def test_canonical_form_ignores_labels(tree):
    perm = list(reversed(range(tree.n)))
    relabelled = Tree(tree.n, [(perm[u], perm[v]) for u, v in tree.edges])
    assert canonical_form(tree) == canonical_form(relabelled)


def test_canonical_form_separates():
    assert canonical_form(Tree.path(4)) != canonical_form(Tree.star(3))


def test_m_center_matches_oracle(corpus9):
    for tree in corpus9.trees:
        for m in range(1, tree.n + 1):
            assert optimal_eccentricity(tree, m, 1)[0] == m_center_exact(tree, m).eccentricity


def test_best_subtree_matches_oracle(corpus9):
    for tree in corpus9.trees:
        for k in range(1, tree.n + 1):
            best, _ = best_connected_subset(tree, k)
            assert optimal_eccentricity(tree, 1, k)[0] == best
            assert central_k_tree(tree, k).eccentricity == best


def test_contains_smaller():
    big = Forest((frozenset({0, 1, 2}), frozenset({3, 4, 5})), 0)
    assert contains_smaller(big, Forest((frozenset({0, 1}), frozenset({4, 5})), 0))
    assert not contains_smaller(big, Forest((frozenset({0, 1}), frozenset({1, 2})), 0))
    assert not contains_smaller(big, Forest((frozenset({2, 3}),), 0))


def test_containment_counterexample_found():
    # optimal 3-node pair {1,2,4},{3,5,7} holds no optimal 2-node pair
    t = Tree(8, [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (2, 6), (0, 7)])
    witness = containment_counterexample(t, 2, 3)
    assert witness is not None
    assert sorted(one(s) for s in witness.subtrees) == [[1, 2, 4], [3, 5, 7]]
    assert containment_counterexample(t, 2, 1) is None


def test_audit_instance_examples():
    rep = audit_instance(Tree.path(7), 2, 1)
    assert rep.prop6 and rep.optimum == 2 and rep.cf_matches_optimum
    rep = audit_instance(Tree.path(5), 1, 3)
    assert rep.prop7 and rep.optimum == 1
    doc = rep.to_json()
    assert doc["instance"]["edges"][0] == [1, 2]
    with pytest.raises(InfeasibleError):
        audit_instance(Tree.path(3), 2, 2)


def test_audit_corpus_small():
    report = audit_corpus(5)
    validate_audit(report)
    s = report["summary"]
    expected = sum(t.n // m for t in generate_corpus(5).trees for m in range(1, t.n + 1))
    assert s["instances"] == expected == len(report["instances"])
    assert s["special_case_failures"] == 0
    assert 0 <= s["cf_optimality_rate"] <= 1
    json.dumps(report)


def test_audit_cap():
    with pytest.raises(ValueError):
        audit_corpus(13)

import random

import pytest

from conftest import ids, small_corpus
from reggraph.corpus import random_regression_graph, random_retyping
from reggraph.errors import NodeSetMismatch, TooLarge
from reggraph.graph import EdgeKind, RegressionGraph
from reggraph.oracle import (
    enumerate_simple_paths,
    first_difference,
    independence_structure,
    separates_bruteforce,
    structures_equal,
)
from reggraph.separation import IndependenceStatement
from reggraph.textio import parse


def test_paths_two_block(two_block):
    i, k = two_block.index("3"), two_block.index("5")
    paths = [tuple(two_block.labels[x] for x in p) for p in enumerate_simple_paths(two_block, i, k)]
    assert sorted(paths) == [("3", "1", "2", "5"), ("3", "4", "5")]


def test_paths_trivial_cases():
    g = RegressionGraph.from_edges(3, [(0, 1, EdgeKind.DASHED)])
    assert enumerate_simple_paths(g, 0, 1) == [(0, 1)]
    assert enumerate_simple_paths(g, 0, 2) == []
    with pytest.raises(ValueError):
        enumerate_simple_paths(g, 0, 0)


def test_paths_are_lexicographic():
    g = RegressionGraph.from_edges(4, [(a, b, EdgeKind.DASHED) for a, b in [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)]])
    paths = enumerate_simple_paths(g, 0, 3)
    assert paths == sorted(paths) and len(paths) == 4


def test_bruteforce_examples(two_block):
    a, b = ids(two_block, "3"), ids(two_block, "5")
    assert separates_bruteforce(two_block, a, b, set())
    assert not separates_bruteforce(two_block, a, b, ids(two_block, "4"))
    assert not separates_bruteforce(two_block, ids(two_block, "3"), ids(two_block, "4"), set())


def test_size_guards():
    big = RegressionGraph.from_edges(13, [])
    with pytest.raises(TooLarge):
        separates_bruteforce(big, {0}, {1}, set())
    with pytest.raises(TooLarge):
        independence_structure(RegressionGraph.from_edges(9, []))
    with pytest.raises(TooLarge):
        independence_structure(RegressionGraph.from_edges(7, []), set_valued=True)


def test_structure_examples(two_block):
    assert len(independence_structure(parse("1 ~~ 2"))) == 0
    two = independence_structure(RegressionGraph.from_edges(2, []))
    assert two.to_text() == "{0} _||_ {1} | {}\n"
    s = independence_structure(two_block)
    i, k = two_block.index("3"), two_block.index("5")
    assert IndependenceStatement.of({i}, {k}) in s
    assert IndependenceStatement.of({i}, {k}, {two_block.index("4")}) not in s


def test_structures_equal_examples(two_block):
    assert structures_equal(two_block, two_block)
    # replacing 1 ~~ 2 by 2 -> 1 makes (1,2,5) a transmitting V
    variant = parse("nodes: 1 2 3 5 4\ncontext:\n2 -> 1\n3 -> 1\n5 -> 2\n4 ~~ 3\n4 ~~ 5\n")
    assert not structures_equal(two_block, variant)
    assert first_difference(two_block, variant) is not None
    assert structures_equal(RegressionGraph.from_edges(4, []), RegressionGraph.from_edges(4, []))


def test_node_set_mismatch():
    with pytest.raises(NodeSetMismatch):
        structures_equal(parse("a ~~ b"), parse("a ~~ c"))
    with pytest.raises(NodeSetMismatch):
        structures_equal(parse("a ~~ b"), parse("b ~~ a"))


def test_structure_text_is_sorted(two_block):
    text = independence_structure(two_block).to_text()
    lines = text.splitlines()
    assert lines == sorted(lines) and len(lines) == len(independence_structure(two_block))


@pytest.mark.parametrize("seed", range(3))
def test_set_valued_statements_follow_from_singletons(seed):
    """Graph structures satisfy decomposition, weak union and composition."""
    for g in small_corpus(20, 500 + seed, n_max=5):
        single = independence_structure(g)
        for s in independence_structure(g, set_valued=True).statements:
            for i in s.a:
                for k in s.b:
                    assert IndependenceStatement.of({i}, {k}, s.c) in single
                    weak = s.c | (s.a - {i}) | (s.b - {k})
                    assert IndependenceStatement.of({i}, {k}, weak) in single


def test_equivalence_relation_spot_check():
    rng = random.Random(9)
    for _ in range(30):
        g1 = random_regression_graph(5, rng)
        g2, g3 = random_retyping(g1, rng), random_retyping(g1, rng)
        e12, e23, e13 = structures_equal(g1, g2), structures_equal(g2, g3), structures_equal(g1, g3)
        assert structures_equal(g2, g1) == e12
        if e12 and e23:
            assert e13

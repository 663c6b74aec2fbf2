import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ids, small_corpus
from reggraph.corpus import random_regression_graph
from reggraph.errors import BadSets, NotAPath
from reggraph.graph import EdgeKind, Mark, RegressionGraph, UndirectedGraph, build_graph
from reggraph.oracle import separates_bruteforce
from reggraph.separation import (
    CollisionType,
    IndependenceStatement,
    NodeClass,
    all_vs,
    classify_inner,
    collision_vs,
    is_active_path,
    marginal_independent,
    node_mark,
    pairwise_independences,
    separates,
    transmitting_vs,
    undirected_separates,
    v_config,
)

A, D, F = EdgeKind.ARROW, EdgeKind.DASHED, EdgeKind.FULL


def subsets(nodes):
    nodes = sorted(nodes)
    for r in range(len(nodes) + 1):
        yield from (frozenset(c) for c in combinations(nodes, r))


def test_two_block_collision_vs(two_block):
    got = {(frozenset((two_block.labels[v.h], two_block.labels[v.k])), two_block.labels[v.inner]) for v in collision_vs(two_block)}
    expected = {(frozenset(("3", "5")), "4"), (frozenset(("1", "5")), "2"), (frozenset(("2", "3")), "1")}
    assert got == expected


def test_node_marks(two_block):
    e = two_block.edge(two_block.index("3"), two_block.index("1"))
    assert node_mark(two_block, e, two_block.index("1")) is Mark.HEAD
    assert node_mark(two_block, two_block.edge(two_block.index("1"), two_block.index("2")), two_block.index("2")) is Mark.HEAD
    ctx = build_graph(["P", "Q"], ["P", "Q"], [("P", "Q", F)])
    assert node_mark(ctx, ctx.edge(0, 1), 0) is Mark.TAIL


def test_subtypes(two_block):
    v = v_config(two_block, two_block.index("3"), two_block.index("4"), two_block.index("5"))
    assert v.cls is NodeClass.COLLISION and v.subtype is CollisionType.UNDIRECTED
    v = v_config(two_block, two_block.index("1"), two_block.index("2"), two_block.index("5"))
    assert v.subtype is CollisionType.SEMI_DIRECTED
    chain = build_graph(["1", "2", "3"], [], [("3", "2", A), ("2", "1", A)])
    assert classify_inner(chain, 2, 1, 0) is NodeClass.TRANSMITTING
    sink = build_graph(["1", "2", "3"], [], [("1", "2", A), ("3", "2", A)])
    assert v_config(sink, 0, 1, 2).subtype is CollisionType.DIRECTED


# the six two-edge patterns at an inner response node i, seen from h and k
PATTERNS = {
    "dashed-dashed": ([("h", "i", D), ("i", "k", D)], True),
    "arrow-in arrow-in": ([("h", "i", A), ("k", "i", A)], True),
    "arrow-in dashed": ([("h", "i", A), ("i", "k", D)], True),
    "arrow-out arrow-out": ([("i", "h", A), ("i", "k", A)], False),
    "arrow-in arrow-out": ([("h", "i", A), ("i", "k", A)], False),
    "arrow-out dashed": ([("i", "h", A), ("i", "k", D)], False),
}


@pytest.mark.parametrize("name", sorted(PATTERNS))
def test_mark_table(name):
    edges, is_collision = PATTERNS[name]
    try:
        g = build_graph(["h", "i", "k"], [], edges)
    except Exception:
        pytest.skip("pattern is not a valid regression graph")
    cls = classify_inner(g, 0, 1, 2)
    assert (cls is NodeClass.COLLISION) == is_collision


def test_full_line_patterns_transmit():
    g = build_graph(["h", "i", "k"], ["h", "i", "k"], [("h", "i", F), ("i", "k", F)])
    assert classify_inner(g, 0, 1, 2) is NodeClass.TRANSMITTING
    g = build_graph(["h", "i", "k"], ["i"], [("i", "h", A), ("i", "k", A)])
    assert classify_inner(g, 0, 1, 2) is NodeClass.TRANSMITTING


def test_complete_graph_has_no_vs():
    g = RegressionGraph.from_edges(4, [(i, k, D) for i, k in combinations(range(4), 2)])
    assert all_vs(g) == [] and collision_vs(g) == set()
    assert pairwise_independences(g) == []


def test_concentration_graph_has_no_collisions():
    for seed in range(5):
        rng = random.Random(seed)
        g = random_regression_graph(6, rng, p_context=1.0)
        assert collision_vs(g) == set()
        assert len(transmitting_vs(g)) == len(all_vs(g))


def test_active_path_examples(two_block):
    p = [two_block.index(x) for x in "345"]
    a, b = ids(two_block, "3"), ids(two_block, "5")
    assert not is_active_path(two_block, p, a, b, set())
    assert is_active_path(two_block, p, a, b, ids(two_block, "4"))
    assert not is_active_path(two_block, [two_block.index(x) for x in "3125"], a, b, set())
    assert is_active_path(two_block, list(reversed(p)), a, b, ids(two_block, "4"))


def test_active_path_rejects_non_paths(two_block):
    a, b = ids(two_block, "3"), ids(two_block, "5")
    with pytest.raises(NotAPath):
        is_active_path(two_block, [two_block.index("3"), two_block.index("5")], a, b, set())
    with pytest.raises(NotAPath):
        is_active_path(two_block, [two_block.index("3")], a, b, set())


def test_separates_examples(two_block):
    a, b = ids(two_block, "3"), ids(two_block, "5")
    assert separates(two_block, a, b, set())
    assert not separates(two_block, a, b, ids(two_block, "4"))
    with pytest.raises(BadSets):
        separates(two_block, a, a, set())
    with pytest.raises(BadSets):
        separates(two_block, set(), b, set())


def test_adjacent_never_separated(two_block):
    i, k = two_block.index("3"), two_block.index("4")
    rest = set(range(two_block.n)) - {i, k}
    for c in subsets(rest):
        assert not separates(two_block, {i}, {k}, c)


def test_pairwise_two_block(two_block):
    lines = [s.format(two_block.labels) for s in pairwise_independences(two_block)]
    assert "{3} _||_ {5} | {}" in lines
    assert len(lines) == 5


def test_pairwise_context_rule():
    g = build_graph(["P", "Q", "B"], ["P", "Q", "B"], [("P", "B", F), ("Q", "B", F)])
    (s,) = pairwise_independences(g)
    assert s.format(g.labels) == "{P} _||_ {Q} | {B}"


def test_statement_format_and_validation():
    s = IndependenceStatement.of({3}, {1}, {0})
    assert s.a == {1} and s.format(["a", "b", "c", "d"]) == "{b} _||_ {d} | {a}"
    with pytest.raises(BadSets):
        IndependenceStatement.of({1}, {1})


@pytest.mark.parametrize("seed", range(6))
def test_matches_bruteforce_all_queries(seed):
    for g in small_corpus(25, 100 + seed, n_max=6):
        nodes = range(g.n)
        for a in subsets(nodes):
            if not a:
                continue
            for b in subsets(set(nodes) - a):
                if not b or min(b) < min(a):
                    continue
                for c in subsets(set(nodes) - a - b):
                    assert separates(g, a, b, c) == separates_bruteforce(g, a, b, c), (g, a, b, c)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6), st.sampled_from([0.3, 0.5, 0.7]))
def test_singleton_queries_match_bruteforce(n, seed, p):
    rng = random.Random(seed)
    g = random_regression_graph(n, rng, p_edge=p)
    i, k = rng.sample(range(n), 2)
    rest = [x for x in range(n) if x not in (i, k)]
    for c in subsets(rest):
        assert separates(g, {i}, {k}, c) == separates_bruteforce(g, {i}, {k}, c)


def _uncoupled_vs(g, cls):
    return [v for v in all_vs(g) if v.cls is cls]


@pytest.mark.parametrize("seed", range(3))
def test_collision_inner_never_in_separator(seed):
    for g in small_corpus(40, 200 + seed, n_max=7):
        for v in _uncoupled_vs(g, NodeClass.COLLISION):
            rest = set(range(g.n)) - {v.h, v.k, v.inner}
            for c in subsets(rest):
                assert not separates(g, {v.h}, {v.k}, c | {v.inner})


@pytest.mark.parametrize("seed", range(3))
def test_transmitting_inner_always_in_separator(seed):
    for g in small_corpus(40, 300 + seed, n_max=7):
        for v in _uncoupled_vs(g, NodeClass.TRANSMITTING):
            rest = set(range(g.n)) - {v.h, v.k}
            for c in subsets(rest):
                if separates(g, {v.h}, {v.k}, c):
                    assert v.inner in c


@pytest.mark.parametrize("seed", range(3))
def test_every_uncoupled_pair_has_a_statement(seed):
    for g in small_corpus(60, 400 + seed, n_max=7):
        for s in pairwise_independences(g):
            assert separates(g, s.a, s.b, s.c)
        uncoupled = {(i, k) for i, k in combinations(range(g.n), 2) if not g.adjacent(i, k)}
        listed = {(min(s.a), min(s.b)) for s in pairwise_independences(g)}
        assert listed == uncoupled


def test_marginal_independent_examples():
    u = UndirectedGraph.from_pairs(3, [(0, 1), (1, 2)], flavor="covariance")
    assert marginal_independent(u, {0}, {2})
    assert not marginal_independent(u, {0, 1}, {2})
    assert marginal_independent(UndirectedGraph.from_pairs(4, []), {0, 1}, {2, 3})
    with pytest.raises(BadSets):
        marginal_independent(u, {0}, {0})


def _random_undirected(rng, n, flavor):
    pairs = [p for p in combinations(range(n), 2) if rng.random() < 0.4]
    return UndirectedGraph.from_pairs(n, pairs, flavor=flavor)


@pytest.mark.parametrize("flavor", ["covariance", "concentration"])
def test_undirected_separation_matches_regression_view(flavor):
    rng = random.Random(7)
    for _ in range(60):
        u = _random_undirected(rng, rng.randint(2, 6), flavor)
        g = u.as_regression_graph()
        i, k = rng.sample(range(u.n), 2)
        for c in subsets(set(range(u.n)) - {i, k}):
            assert undirected_separates(u, {i}, {k}, c) == separates(g, {i}, {k}, c)


def test_concentration_separation_is_path_blocking():
    u = UndirectedGraph.from_pairs(3, [(0, 1), (1, 2)], flavor="concentration")
    assert not undirected_separates(u, {0}, {2}, set())
    assert undirected_separates(u, {0}, {2}, {1})
    cov = u.with_flavor("covariance")
    assert undirected_separates(cov, {0}, {2}, set())
    assert not undirected_separates(cov, {0}, {2}, {1})

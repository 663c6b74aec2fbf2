"""Reference verdicts for the class-membership flags.

Every verdict here is derived from independence structures (brute-force
paths) or from vanishing partial correlations in a numerically simulated
chain graph, never from the graphical criteria under test.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product

from reggraph.errors import CycleViolation
from reggraph.gaussian import chain_graph_covariance, partial_correlation
from reggraph.graph import Edge, EdgeKind, RegressionGraph, UndirectedGraph, skeleton
from reggraph.oracle import masks_to_sets, singleton_separations, structures_equal

NUMERIC_ZERO = 1e-9


def _structure_key(g: RegressionGraph) -> tuple[bool, ...]:
    seps = singleton_separations(g)
    return tuple(seps[q] for q in sorted(seps))


def _acyclic_orientations(g: RegressionGraph):
    pairs = [e.pair for e in g.edges()]
    for bits in product((0, 1), repeat=len(pairs)):
        edges = [Edge(u, v, EdgeKind.ARROW) if b else Edge(v, u, EdgeKind.ARROW) for (u, v), b in zip(pairs, bits)]
        try:
            yield RegressionGraph(g.labels, (), edges)
        except CycleViolation:
            continue


def exists_equivalent_dag(g: RegressionGraph) -> bool:
    """Search every acyclic orientation of the skeleton (equivalent graphs share it)."""
    target = _structure_key(g)
    return any(_structure_key(d) == target for d in _acyclic_orientations(g))


def concentration_oracle(g: RegressionGraph) -> bool:
    return structures_equal(g, skeleton(g).with_flavor("concentration").as_regression_graph(), set_valued=False)


def covariance_oracle(g: RegressionGraph) -> bool:
    return structures_equal(g, skeleton(g).with_flavor("covariance").as_regression_graph(), set_valued=False)


def cov_con_oracle(u: UndirectedGraph) -> bool:
    cov = u.with_flavor("covariance").as_regression_graph()
    con = u.with_flavor("concentration").as_regression_graph()
    return structures_equal(cov, con, set_valued=False)


def chain_graph_oracle(g: RegressionGraph, interpretation: str, draws: int = 3) -> bool:
    """Same components read as an AMP or LWF chain graph: do the implied structures agree?"""
    covs = [chain_graph_covariance(g, interpretation, seed).sigma for seed in range(draws)]
    for (i, k, cmask), separated in singleton_separations(g).items():
        c = masks_to_sets(cmask)
        vanishes = max(abs(partial_correlation(s, i, k, c)) for s in covs) < NUMERIC_ZERO
        if vanishes != separated:
            return False
    return True


def oracle_flags(g: RegressionGraph) -> dict[str, bool]:
    return {
        "dag_orientable": exists_equivalent_dag(g),
        "concentration_equivalent": concentration_oracle(g),
        "covariance_equivalent": covariance_oracle(g),
        "amp_same_components": chain_graph_oracle(g, "amp"),
        "lwf_same_components": chain_graph_oracle(g, "lwf"),
        "cov_con_equivalent": cov_con_oracle(skeleton(g)),
    }


# -- exhaustive enumeration ----------------------------------------------------


def _pair_options(i: int, k: int, ctx: frozenset[int]):
    ci, ck = i in ctx, k in ctx
    if ci and ck:
        return (None, Edge(i, k, EdgeKind.FULL))
    if ci:
        return (None, Edge(i, k, EdgeKind.ARROW))
    if ck:
        return (None, Edge(k, i, EdgeKind.ARROW))
    return (None, Edge(i, k, EdgeKind.DASHED), Edge(i, k, EdgeKind.ARROW), Edge(k, i, EdgeKind.ARROW))


def _code(n: int, ctx: frozenset[int], edges, perm) -> tuple:
    kinds = {}
    for e in edges:
        u, v = perm[e.u], perm[e.v]
        if e.kind is EdgeKind.ARROW:
            kinds[(u, v)] = 1
        else:
            kinds[(min(u, v), max(u, v))] = 2 if e.kind is EdgeKind.DASHED else 3
    return (
        tuple(sorted(perm[x] for x in ctx)),
        tuple(kinds.get((x, y), 0) for x in range(n) for y in range(n) if x != y),
    )


@lru_cache(maxsize=None)
def all_graphs_up_to_isomorphism(n: int) -> tuple[RegressionGraph, ...]:
    """One representative per isomorphism class of regression graphs on ``n`` nodes."""
    labels = [str(x + 1) for x in range(n)]
    perms = list(permutations(range(n)))
    pairs = list(combinations(range(n), 2))
    seen: set[tuple] = set()
    reps: list[RegressionGraph] = []
    for r in range(n + 1):
        for ctx_t in combinations(range(n), r):
            ctx = frozenset(ctx_t)
            for choice in product(*(_pair_options(i, k, ctx) for i, k in pairs)):
                edges = [e for e in choice if e is not None]
                canon = min(_code(n, ctx, edges, p) for p in perms)
                if canon in seen:
                    continue
                seen.add(canon)
                try:
                    reps.append(RegressionGraph(labels, ctx, edges))
                except CycleViolation:
                    continue
    return tuple(reps)


__all__ = ["all_graphs_up_to_isomorphism", "exists_equivalent_dag", "oracle_flags"]

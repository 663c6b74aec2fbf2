"""Markov equivalence and membership in neighbouring model classes."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NodeSetMismatch
from .graph import Edge, EdgeKind, RegressionGraph, UndirectedGraph, skeleton
from .separation import NodeClass, VConfig, all_vs, collision_vs


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    skeleton_mismatch: tuple[int, int] | None = None
    collision_mismatch: tuple[int, int, int] | None = None

    def describe(self, labels: Sequence[str]) -> str:
        if self.equivalent:
            return "equivalent"
        if self.skeleton_mismatch is not None:
            u, v = self.skeleton_mismatch
            return f"not equivalent: skeletons differ at edge {labels[u]}-{labels[v]}"
        h, i, k = self.collision_mismatch
        return f"not equivalent: collision V ({labels[h]},{labels[i]},{labels[k]}) is in only one graph"


@dataclass(frozen=True)
class CollisionPath4:
    nodes: tuple[int, int, int, int]
    semi_directed: bool

    def format(self, g: RegressionGraph) -> str:
        parts = [g.labels[self.nodes[0]]]
        for x, y in zip(self.nodes, self.nodes[1:]):
            e = g.edge(x, y)
            if e.kind is EdgeKind.ARROW:
                tok = "->" if e.u == x else "<-"
            else:
                tok = "~" if e.kind is EdgeKind.DASHED else "-"
            parts.append(tok + g.labels[y])
        return "".join(parts)


@dataclass(frozen=True)
class Verdict:
    """Boolean answer plus the obstruction that decided it, if any."""

    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ChordalityResult:
    chordal: bool
    ordering: tuple[int, ...] = ()
    cycle: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.chordal


@dataclass(frozen=True)
class ClassReport:
    dag_orientable: bool
    concentration_equivalent: bool
    covariance_equivalent: bool
    amp_same_components: bool
    lwf_same_components: bool
    cov_con_equivalent: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    FLAGS = (
        "dag_orientable",
        "concentration_equivalent",
        "covariance_equivalent",
        "amp_same_components",
        "lwf_same_components",
        "cov_con_equivalent",
    )

    def to_lines(self) -> list[str]:
        lines = [f"{name}: {str(getattr(self, name)).lower()}" for name in self.FLAGS]
        for name in self.FLAGS:
            if name in self.witnesses:
                lines.append(f"{name}_witness: {self.witnesses[name]}")
        return lines


def align(g: RegressionGraph, labels: Sequence[str]) -> RegressionGraph:
    """Re-index ``g`` so that its nodes follow ``labels``."""
    if tuple(labels) == g.labels:
        return g
    if sorted(labels) != sorted(g.labels):
        raise NodeSetMismatch("graphs have different node sets")
    pos = {lab: i for i, lab in enumerate(labels)}
    m = [pos[lab] for lab in g.labels]
    edges = [Edge(m[e.u], m[e.v], e.kind) for e in g.edges()]
    return RegressionGraph(labels, (m[i] for i in g.context), edges)


def markov_equivalent(g1: RegressionGraph, g2: RegressionGraph) -> EquivalenceReport:
    """Same skeleton and same collision Vs, whatever the edge types."""
    g2 = align(g2, g1.labels)
    sk = skeleton(g1).edges ^ skeleton(g2).edges
    if sk:
        return EquivalenceReport(False, skeleton_mismatch=min(sk))
    cv = {v.triple for v in collision_vs(g1)} ^ {v.triple for v in collision_vs(g2)}
    if cv:
        return EquivalenceReport(False, collision_mismatch=min(cv))
    return EquivalenceReport(True)


# -- chordality ----------------------------------------------------------


def max_cardinality_search(u: UndirectedGraph, seed: int | None = None) -> list[int]:
    """Visit order of maximum cardinality search.

    The next node always has the most already-visited neighbours; ties go
    to the smallest index.  Disconnected graphs are handled by restarting
    at the smallest unvisited index.
    """
    n = u.n
    nb = u.neighbors()
    weight = [0] * n
    visited = [False] * n
    heap = [(0, i) for i in range(n)]
    heapq.heapify(heap)
    order: list[int] = []

    def visit(x: int) -> None:
        visited[x] = True
        order.append(x)
        for y in nb[x]:
            if not visited[y]:
                weight[y] += 1
                heapq.heappush(heap, (-weight[y], y))

    if seed is not None and n:
        visit(seed)
    while len(order) < n:
        w, x = heapq.heappop(heap)
        if not visited[x] and w == -weight[x]:
            visit(x)
    return order


def _earlier_neighbours_clique(nb: list[set[int]], order: Sequence[int]) -> int | None:
    """First node (in visit order) whose earlier neighbours are not a clique."""
    pos = {x: i for i, x in enumerate(order)}
    for x in order:
        earlier = [y for y in nb[x] if pos[y] < pos[x]]
        if len(earlier) < 2:
            continue
        p = max(earlier, key=pos.__getitem__)
        for y in earlier:
            if y != p and y not in nb[p]:
                return x
    return None


def _chordless_cycle(nb: list[set[int]]) -> tuple[int, ...] | None:
    n = len(nb)
    for v in range(n):
        nv = sorted(nb[v])
        for a_i, a in enumerate(nv):
            for b in nv[a_i + 1 :]:
                if b in nb[a]:
                    continue
                banned = (nb[v] | {v}) - {a, b}
                prev = {a: None}
                queue = deque([a])
                while queue and b not in prev:
                    x = queue.popleft()
                    for y in sorted(nb[x]):
                        if y not in prev and y not in banned:
                            prev[y] = x
                            queue.append(y)
                if b in prev:
                    path = [b]
                    while path[-1] != a:
                        path.append(prev[path[-1]])
                    return (v,) + tuple(reversed(path))
    return None


def is_chordal(u: UndirectedGraph) -> ChordalityResult:
    nb = u.neighbors()
    order = max_cardinality_search(u)
    if _earlier_neighbours_clique(nb, order) is None:
        return ChordalityResult(True, tuple(order))
    return ChordalityResult(False, tuple(order), _chordless_cycle(nb))


def context_graph(g: RegressionGraph) -> UndirectedGraph:
    """Full-line subgraph, read as a concentration graph."""
    pairs = [e.pair for e in g.edges() if e.kind is EdgeKind.FULL]
    return UndirectedGraph(g.labels, frozenset(pairs), "concentration")


# -- collision paths in four nodes ----------------------------------------------


def _canonical4(p: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    r = p[::-1]
    return min(p, r)


def iter_collision_paths4(g: RegressionGraph, semi_directed_only: bool = False):
    """Chordless four-node paths whose two inner nodes are collisions.

    Both inner nodes need a head on the middle edge, so the middle edge is
    always a dashed line.
    """
    seen = set()
    for e in g.edges():
        if e.kind is not EdgeKind.DASHED:
            continue
        for k1, k2 in ((e.u, e.v), (e.v, e.u)):
            left = sorted(
                x for x in (g.parents[k1] | g.dashed_nbrs[k1]) if x != k2 and x not in g.adj[k2]
            )
            if not left:
                continue
            right = sorted(
                y for y in (g.parents[k2] | g.dashed_nbrs[k2]) if y != k1 and y not in g.adj[k1]
            )
            for k0 in left:
                for k3 in right:
                    semi = k0 in g.parents[k1] or k3 in g.parents[k2]
                    if semi_directed_only and not semi:
                        continue
                    key = _canonical4((k0, k1, k2, k3))
                    if key in seen:
                        continue
                    seen.add(key)
                    yield CollisionPath4(key, semi)


def find_collision_paths4(g: RegressionGraph, semi_directed_only: bool = False) -> list[CollisionPath4]:
    return sorted(iter_collision_paths4(g, semi_directed_only), key=lambda p: p.nodes)


def dag_orientable(g: RegressionGraph) -> Verdict:
    """Chordal context graph and no chordless collision path in four nodes."""
    ch = is_chordal(context_graph(g))
    if not ch:
        cyc = "-".join(g.labels[x] for x in ch.cycle) if ch.cycle else ""
        return Verdict(False, ch.cycle, f"context graph has chordless cycle {cyc}")
    paths = find_collision_paths4(g)
    if paths:
        return Verdict(False, paths[0], f"chordless collision path {paths[0].format(g)}")
    return Verdict(True)


def concentration_equivalent(g: RegressionGraph) -> Verdict:
    cv = sorted(collision_vs(g))
    if cv:
        return Verdict(False, cv[0], f"collision V {cv[0].format(g.labels)}")
    return Verdict(True)


def covariance_equivalent(g: RegressionGraph) -> Verdict:
    for v in all_vs(g):
        if v.cls is NodeClass.TRANSMITTING:
            return Verdict(False, v, f"transmitting V {v.format(g.labels)}")
    return Verdict(True)


def _undirected_components(u: UndirectedGraph) -> list[list[int]]:
    nb = u.neighbors()
    comp = [-1] * u.n
    out = []
    for s in range(u.n):
        if comp[s] >= 0:
            continue
        comp[s] = len(out)
        members, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if comp[y] < 0:
                    comp[y] = comp[s]
                    members.append(y)
                    queue.append(y)
        out.append(sorted(members))
    return out


def cov_con_equivalent(u: UndirectedGraph) -> Verdict:
    """Every connected component complete."""
    for members in _undirected_components(u):
        for x_i, x in enumerate(members):
            for y in members[x_i + 1 :]:
                if not u.has_edge(x, y):
                    return Verdict(False, (x, y), f"{u.labels[x]} and {u.labels[y]} share a component but are uncoupled")
    return Verdict(True)


def amp_same_components(g: RegressionGraph) -> Verdict:
    for comp in g.ordered_components():
        if min(comp) in g.context:
            continue
        members = sorted(comp)
        for x_i, x in enumerate(members):
            for y in members[x_i + 1 :]:
                if y not in g.dashed_nbrs[x]:
                    return Verdict(
                        False, (x, y), f"response component misses dashed line {g.labels[x]}~{g.labels[y]}"
                    )
    return Verdict(True)


def semi_directed_collision_vs(g: RegressionGraph) -> list[VConfig]:
    return sorted(
        v for v in collision_vs(g) if v.subtype is not None and v.subtype.value == "semi-directed"
    )


def lwf_same_components(g: RegressionGraph) -> Verdict:
    """Complete response components whose members all share the same parents.

    With complete components this is the same as having no semi-directed
    collision V; a semi-directed chordless collision path in four nodes
    always contains one.
    """
    amp = amp_same_components(g)
    if not amp:
        return amp
    sv = semi_directed_collision_vs(g)
    if sv:
        return Verdict(False, sv[0], f"semi-directed collision V {sv[0].format(g.labels)}")
    return Verdict(True)


def covariance_dag_obstruction(u: UndirectedGraph) -> tuple[int, int, int, int] | None:
    """A chordless path in four nodes of ``u``, if there is one."""
    nb = u.neighbors()
    best = None
    for k1, k2 in sorted(u.edges):
        for a, b in ((k1, k2), (k2, k1)):
            for k0 in nb[a]:
                if k0 == b or k0 in nb[b]:
                    continue
                for k3 in nb[b]:
                    if k3 == a or k3 in nb[a] or k3 == k0:
                        continue
                    cand = _canonical4((k0, a, b, k3))
                    if best is None or cand < best:
                        best = cand
    return best


def classify(g: RegressionGraph) -> ClassReport:
    verdicts = {
        "dag_orientable": dag_orientable(g),
        "concentration_equivalent": concentration_equivalent(g),
        "covariance_equivalent": covariance_equivalent(g),
        "amp_same_components": amp_same_components(g),
        "lwf_same_components": lwf_same_components(g),
        "cov_con_equivalent": cov_con_equivalent(skeleton(g)),
    }
    witnesses = {k: v.reason for k, v in verdicts.items() if not v and v.reason}
    return ClassReport(**{k: bool(v) for k, v in verdicts.items()}, witnesses=witnesses)

"""Brute-force reference answers for small graphs.

Everything here enumerates simple paths explicitly and applies the
active-path rule node by node.  It is slow by design and shares no
traversal code with :mod:`reggraph.separation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable

from .errors import BadSets, NodeSetMismatch, TooLarge
from .graph import RegressionGraph
from .separation import IndependenceStatement, is_active_path

MAX_BRUTEFORCE_NODES = 12
MAX_SINGLETON_NODES = 8
MAX_SET_VALUED_NODES = 6


def enumerate_simple_paths(g: RegressionGraph, i: int, k: int) -> list[tuple[int, ...]]:
    """All simple ``i``-``k`` paths, in lexicographic order."""
    if i == k:
        raise ValueError("endpoints must differ")
    out: list[tuple[int, ...]] = []
    path = [i]
    on_path = {i}

    def walk(x: int) -> None:
        for y in sorted(g.adj[x]):
            if y == k:
                out.append(tuple(path) + (k,))
            elif y not in on_path:
                path.append(y)
                on_path.add(y)
                walk(y)
                path.pop()
                on_path.discard(y)

    walk(i)
    return sorted(out)


def separates_bruteforce(g: RegressionGraph, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> bool:
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    if g.n > MAX_BRUTEFORCE_NODES:
        raise TooLarge(f"brute-force separation is limited to {MAX_BRUTEFORCE_NODES} nodes")
    if not a or not b or a & b or a & c or b & c:
        raise BadSets("a, b and c must be pairwise disjoint; a and b nonempty")
    for x in sorted(a):
        for y in sorted(b):
            for p in enumerate_simple_paths(g, x, y):
                if is_active_path(g, p, a, b, c):
                    return False
    return True


class _PathTable:
    """Every simple path of a small graph, pre-digested into bit masks.

    A path is active given ``c`` iff none of its transmitting inner nodes
    lies in a|b|c and every collision inner node, or one of its
    descendants, lies in ``c``.
    """

    def __init__(self, g: RegressionGraph):
        n = g.n
        desc = [0] * n
        for x in range(n):
            seen, stack = 0, list(g.children[x])
            while stack:
                y = stack.pop()
                if seen >> y & 1:
                    continue
                seen |= 1 << y
                stack.extend(g.children[y])
            desc[x] = seen | (1 << x)
        self.n = n
        self.paths: dict[tuple[int, int], list[tuple[int, tuple[int, ...]]]] = {}
        for i, k in combinations(range(n), 2):
            rows = []
            for p in enumerate_simple_paths(g, i, k):
                tmask, cols = 0, []
                for h, x, y in zip(p, p[1:], p[2:]):
                    head_h = h in g.parents[x] or h in g.dashed_nbrs[x]
                    head_y = y in g.parents[x] or y in g.dashed_nbrs[x]
                    if head_h and head_y:
                        cols.append(desc[x])
                    else:
                        tmask |= 1 << x
                rows.append((tmask, tuple(cols)))
            self.paths[(i, k)] = rows

    def connected(self, i: int, k: int, blocked: int, c: int) -> bool:
        key = (i, k) if i < k else (k, i)
        for tmask, cols in self.paths[key]:
            if tmask & blocked:
                continue
            if all(cm & c for cm in cols):
                return True
        return False

    def separated(self, a: int, b: int, c: int) -> bool:
        blocked = a | b | c
        for i in _bits(a):
            for k in _bits(b):
                if self.connected(i, k, blocked, c):
                    return False
        return True


def _bits(mask: int) -> list[int]:
    out, x = [], 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def _mask(nodes: Iterable[int]) -> int:
    m = 0
    for x in nodes:
        m |= 1 << x
    return m


@dataclass(frozen=True)
class IndependenceStructure:
    """Implied statements, stored as ``(a_mask, b_mask, c_mask)`` with ``a_mask < b_mask``."""

    labels: tuple[str, ...]
    set_valued: bool
    masks: frozenset[tuple[int, int, int]] = field(repr=False)

    @cached_property
    def statements(self) -> list[IndependenceStatement]:
        stmts = [IndependenceStatement.of(_bits(a), _bits(b), _bits(c)) for a, b, c in self.masks]
        return sorted(stmts, key=IndependenceStatement.sort_key)

    def __contains__(self, s: IndependenceStatement) -> bool:
        a, b = _mask(s.a), _mask(s.b)
        return (min(a, b), max(a, b), _mask(s.c)) in self.masks

    def __len__(self) -> int:
        return len(self.masks)

    def to_text(self) -> str:
        lines = sorted(s.format(self.labels) for s in self.statements)
        return "".join(line + "\n" for line in lines)


def _singleton_queries(n: int):
    full = (1 << n) - 1
    for i, k in combinations(range(n), 2):
        rest = full & ~(1 << i) & ~(1 << k)
        sub = rest
        while True:
            yield (1 << i, 1 << k, sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest


def _set_queries(n: int):
    # each node goes to a, b, c or m; keep a < b to list each unordered pair once
    for assign in product(range(4), repeat=n):
        a = b = c = 0
        for x, slot in enumerate(assign):
            if slot == 0:
                a |= 1 << x
            elif slot == 1:
                b |= 1 << x
            elif slot == 2:
                c |= 1 << x
        if a and b and a < b:
            yield (a, b, c)


def independence_structure(g: RegressionGraph, set_valued: bool = False) -> IndependenceStructure:
    limit = MAX_SET_VALUED_NODES if set_valued else MAX_SINGLETON_NODES
    if g.n > limit:
        raise TooLarge(f"independence structure enumeration is limited to {limit} nodes in this mode")
    table = _PathTable(g)
    queries = _set_queries(g.n) if set_valued else _singleton_queries(g.n)
    found = frozenset(q for q in queries if table.separated(*q))
    return IndependenceStructure(g.labels, set_valued, found)


def _check_pair(g1: RegressionGraph, g2: RegressionGraph) -> None:
    if g1.labels != g2.labels:
        if sorted(g1.labels) == sorted(g2.labels):
            raise NodeSetMismatch("graphs must list their nodes in the same order")
        raise NodeSetMismatch("graphs have different node sets")
    if g1.n > MAX_SINGLETON_NODES:
        raise TooLarge(f"structure comparison is limited to {MAX_SINGLETON_NODES} nodes")


def structures_equal(g1: RegressionGraph, g2: RegressionGraph, set_valued: bool | None = None) -> bool:
    """Do both graphs imply exactly the same statements?

    Set-valued comparison is used up to six nodes unless ``set_valued`` says
    otherwise; singleton statements are compared first so that most
    inequivalent pairs are rejected cheaply.
    """
    _check_pair(g1, g2)
    if set_valued is None:
        set_valued = g1.n <= MAX_SET_VALUED_NODES
    t1, t2 = _PathTable(g1), _PathTable(g2)
    for q in _singleton_queries(g1.n):
        if t1.separated(*q) != t2.separated(*q):
            return False
    if set_valued:
        if g1.n > MAX_SET_VALUED_NODES:
            raise TooLarge(f"set-valued comparison is limited to {MAX_SET_VALUED_NODES} nodes")
        for q in _set_queries(g1.n):
            if t1.separated(*q) != t2.separated(*q):
                return False
    return True


def first_difference(g1: RegressionGraph, g2: RegressionGraph) -> IndependenceStatement | None:
    """A singleton statement implied by exactly one of the graphs, if any."""
    _check_pair(g1, g2)
    t1, t2 = _PathTable(g1), _PathTable(g2)
    for a, b, c in _singleton_queries(g1.n):
        if t1.separated(a, b, c) != t2.separated(a, b, c):
            return IndependenceStatement.of(_bits(a), _bits(b), _bits(c))
    return None


def singleton_separations(g: RegressionGraph) -> dict[tuple[int, int, int], bool]:
    """Separation verdict for every ``(i, k, c_mask)`` with ``i < k``."""
    table = _PathTable(g)
    out = {}
    for a, b, c in _singleton_queries(g.n):
        out[(_bits(a)[0], _bits(b)[0], c)] = table.separated(a, b, c)
    return out


def masks_to_sets(mask: int) -> frozenset[int]:
    return frozenset(_bits(mask))


__all__ = [
    "IndependenceStructure",
    "enumerate_simple_paths",
    "first_difference",
    "independence_structure",
    "separates_bruteforce",
    "singleton_separations",
    "structures_equal",
]


"""Definition-literal checkers and exhaustive enumeration.

These deliberately share no code with :mod:`localcolor.coloring` or
:mod:`localcolor.solver`; the test suite uses them to cross-check the fast paths.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import combinations, product

from .coloring import Mode
from .graph import Graph


def _edge_set(g: Graph) -> set[frozenset[int]]:
    return {frozenset(e) for e in g.edges}


def naive_proper(g: Graph, phi: Sequence[int], k: int) -> bool:
    edges = _edge_set(g)
    for color in range(1, k + 1):
        cls = [v for v in range(g.n) if phi[v] == color]
        if any(frozenset(p) in edges for p in combinations(cls, 2)):
            return False
    return True


def naive_semi_matching(g: Graph, phi: Sequence[int], k: int) -> bool:
    if not naive_proper(g, phi, k):
        return False
    edges = _edge_set(g)
    for i in range(1, k):
        union = [v for v in range(g.n) if phi[v] in (i, i + 1)]
        for v in union:
            if sum(frozenset((v, u)) in edges for u in union if u != v) > 1:
                return False
    return True


def naive_local(g: Graph, phi: Sequence[int], k: int) -> bool:
    edges = _edge_set(g)
    for size in (2, 3):
        for s in combinations(range(g.n), size):
            inside = sum(frozenset(p) in edges for p in combinations(s, 2))
            if not any(abs(phi[u] - phi[v]) >= inside for u, v in combinations(s, 2)):
                return False
    return True


NAIVE = {
    Mode.PROPER: naive_proper,
    Mode.SEMI_MATCHING: naive_semi_matching,
    Mode.LOCAL: naive_local,
}


def naive_valid(g: Graph, phi: Sequence[int], k: int, mode: Mode) -> bool:
    if len(phi) != g.n or any(not 1 <= c <= k for c in phi):
        return False
    return NAIVE[mode](g, phi, k)


def all_valid(g: Graph, k: int, mode: Mode) -> Iterator[tuple[int, ...]]:
    """Every valid assignment, in lexicographic order."""
    for phi in product(range(1, k + 1), repeat=g.n):
        if NAIVE[mode](g, phi, k):
            yield phi


def first_valid(g: Graph, k: int, mode: Mode) -> tuple[int, ...] | None:
    return next(all_valid(g, k, mode), None)


def brute_chromatic(g: Graph, mode: Mode, k_max: int) -> int | None:
    for k in range(1, k_max + 1):
        if first_valid(g, k, mode) is not None:
            return k
    return None

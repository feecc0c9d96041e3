"""Finite simple undirected graphs and the constructors the gadgets are built from."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``. ``labels`` is an
    optional tag per vertex (gadget ports, literal names).
    """

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()
    labels: Mapping[int, str] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(norm))
        for u in self.labels:
            if not 0 <= u < self.n:
                raise GraphError(f"label on missing vertex {u}")
        object.__setattr__(self, "labels", dict(self.labels))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Mapping[int, str] | None = None
    ) -> Graph:
        return cls(n, frozenset(edges), dict(labels or {}))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.neighbors[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def induced(self, keep: Sequence[int]) -> Graph:
        """Induced subgraph on ``keep``; vertex ``keep[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(keep)}
        edges = [
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        ]
        labels = {index[v]: t for v, t in self.labels.items() if v in index}
        return Graph.from_edges(len(keep), edges, labels)


def complete_graph(n: int) -> Graph:
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    return Graph.from_edges(n, combinations(range(n), 2))


def removed_matching(r: int) -> list[tuple[int, int]]:
    """The canonical matching ``(0,1), (2,3), ...`` deleted by :func:`c_graph`."""
    return [(2 * i, 2 * i + 1) for i in range(r)]


def c_graph(n: int, r: int) -> Graph:
    """Complete graph on ``n`` vertices minus ``r`` pairwise disjoint edges."""
    if r < 0 or n < 2 * r:
        raise GraphError(f"C(n, r) needs n >= 2r >= 0, got n={n}, r={r}")
    gone = set(removed_matching(r))
    return Graph.from_edges(n, (e for e in combinations(range(n), 2) if e not in gone))


def disjoint_union(parts: Sequence[Graph]) -> tuple[Graph, list[int]]:
    offsets = []
    edges = []
    labels = {}
    base = 0
    for g in parts:
        offsets.append(base)
        edges.extend((u + base, v + base) for u, v in g.edges)
        labels.update({v + base: t for v, t in g.labels.items()})
        base += g.n
    return Graph.from_edges(base, edges, labels), offsets


def add_vertex_joined(
    g: Graph, targets: Iterable[int], label: str | None = None
) -> tuple[Graph, int]:
    targets = set(targets)
    bad = [t for t in targets if not 0 <= t < g.n]
    if bad:
        raise GraphError(f"join targets out of range: {sorted(bad)}")
    new = g.n
    labels = dict(g.labels)
    if label is not None:
        labels[new] = label
    return Graph.from_edges(g.n + 1, list(g.edges) + [(t, new) for t in targets], labels), new


def add_edges(g: Graph, extra: Iterable[tuple[int, int]]) -> Graph:
    return Graph.from_edges(g.n, list(g.edges) + list(extra), g.labels)


def remove_vertices(g: Graph, s: Iterable[int]) -> Graph:
    s = set(s)
    bad = [v for v in s if not 0 <= v < g.n]
    if bad:
        raise GraphError(f"vertices out of range: {sorted(bad)}")
    return g.induced([v for v in range(g.n) if v not in s])


# --- text format -----------------------------------------------------------
#   p edge <n> <m>
#   e <u> <v>            (1-based)
#   c label <u> <text>   (optional, 1-based)
#   c ...                (other comments ignored)


def format_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    for v in sorted(g.labels):
        lines.append(f"c label {v + 1} {g.labels[v]}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = m = None
    edges = []
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "c":
            if len(tok) >= 3 and tok[1] == "label":
                parts = line.split(None, 3)
                v = _int(parts[2], lineno)
                labels[v - 1] = parts[3] if len(parts) > 3 else ""
            continue
        if tok[0] == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(tok) != 4 or tok[1] != "edge":
                raise GraphFormatError("expected 'p edge <n> <m>'", lineno)
            n, m = _int(tok[2], lineno), _int(tok[3], lineno)
            continue
        if tok[0] == "e":
            if n is None:
                raise GraphFormatError("edge before header", lineno)
            if len(tok) != 3:
                raise GraphFormatError("expected 'e <u> <v>'", lineno)
            u, v = _int(tok[1], lineno), _int(tok[2], lineno)
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise GraphFormatError(f"bad edge {u} {v} for n={n}", lineno)
            edges.append((u - 1, v - 1))
            continue
        raise GraphFormatError(f"unknown line type {tok[0]!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p edge' header")
    g = Graph.from_edges(n, edges, labels)
    if g.m != m:
        raise GraphFormatError(f"header declares {m} edges, found {g.m} distinct")
    return g


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected integer, got {tok!r}", lineno) from None

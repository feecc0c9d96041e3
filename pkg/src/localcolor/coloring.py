"""Colorings and the three validity predicates: proper, semi-matching, local."""

from __future__ import annotations

import enum
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph


class ColoringError(ValueError):
    pass


class Mode(enum.Enum):
    PROPER = "proper"
    LOCAL = "local"
    SEMI_MATCHING = "semi-matching"

    @classmethod
    def parse(cls, text: str) -> Mode:
        key = text.strip().lower().replace("_", "-")
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown mode {text!r}; expected one of {[m.value for m in cls]}")


@dataclass(frozen=True)
class KColoring:
    """A total map from vertices ``0..n-1`` to colors ``1..k``."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ColoringError(f"k must be positive, got {self.k}")
        colors = tuple(int(c) for c in self.colors)
        for v, c in enumerate(colors):
            if not 1 <= c <= self.k:
                raise ColoringError(f"vertex {v} has color {c} outside 1..{self.k}")
        object.__setattr__(self, "colors", colors)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def with_k(self, k: int) -> KColoring:
        return KColoring(k, self.colors)

    def reversed(self) -> KColoring:
        return KColoring(self.k, tuple(self.k + 1 - c for c in self.colors))

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "edge" | "triple" | "classes"
    vertices: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return self.detail


def edges_within(g: Graph, s: Sequence[int]) -> int:
    s = list(s)
    if len(s) not in (2, 3) or len(set(s)) != len(s):
        raise ColoringError(f"expected 2 or 3 distinct vertices, got {s}")
    return sum(g.has_edge(u, v) for u, v in combinations(s, 2))


def _check_size(g: Graph, c: KColoring) -> None:
    if len(c) != g.n:
        raise ColoringError(f"coloring covers {len(c)} vertices, graph has {g.n}")


def _proper_violation(g: Graph, phi: Sequence[int]) -> Violation | None:
    for u, v in g.sorted_edges():
        if phi[u] == phi[v]:
            return Violation(
                "edge", (u, v), f"edge ({u + 1}, {v + 1}) is monochromatic with color {phi[u]}"
            )
    return None


def _semi_matching_violation(g: Graph, phi: Sequence[int]) -> Violation | None:
    # Given properness, the union of classes i and i+1 fails to be a matching
    # iff some vertex sees two neighbors in the adjacent class.
    for w in range(g.n):
        for d in (phi[w] - 1, phi[w] + 1):
            hits = sorted(u for u in g.neighbors[w] if phi[u] == d)
            if len(hits) >= 2:
                lo, hi = sorted((phi[w], d))
                return Violation(
                    "classes",
                    (w, hits[0], hits[1]),
                    f"classes {lo} and {hi} do not induce a matching: vertex {w + 1} is "
                    f"adjacent to {hits[0] + 1} and {hits[1] + 1}",
                )
    return None


def _local_violation(g: Graph, phi: Sequence[int]) -> Violation | None:
    # Triples with no internal edge, or exactly one, are settled by properness;
    # every triple with >= 2 edges has a vertex adjacent to the other two.
    for w in range(g.n):
        nb = sorted(g.neighbors[w])
        for u, v in combinations(nb, 2):
            cols = (phi[u], phi[v], phi[w])
            gap = max(cols) - min(cols)
            need = 3 if g.has_edge(u, v) else 2
            if gap < need:
                tri = tuple(sorted((u, v, w)))
                return Violation(
                    "triple",
                    tri,
                    f"vertices {tuple(x + 1 for x in tri)} span {need} edges but colors "
                    f"{tuple(phi[x] for x in tri)} have max gap {gap}",
                )
    return None


def find_violation(g: Graph, c: KColoring, mode: Mode) -> Violation | None:
    """First violated constraint of ``mode``, or None if ``c`` is valid."""
    _check_size(g, c)
    phi = c.colors
    bad = _proper_violation(g, phi)
    if bad is not None or mode is Mode.PROPER:
        return bad
    if mode is Mode.SEMI_MATCHING:
        return _semi_matching_violation(g, phi)
    return _local_violation(g, phi)


def is_proper(g: Graph, c: KColoring) -> bool:
    return find_violation(g, c, Mode.PROPER) is None


def is_semi_matching(g: Graph, c: KColoring) -> bool:
    return find_violation(g, c, Mode.SEMI_MATCHING) is None


def is_local(g: Graph, c: KColoring) -> bool:
    return find_violation(g, c, Mode.LOCAL) is None


def validate(g: Graph, c: KColoring, mode: Mode) -> bool:
    return find_violation(g, c, mode) is None


# --- text format -----------------------------------------------------------
#   s <k>
#   v <vertex (1-based)> <color>


def format_coloring(c: KColoring) -> str:
    lines = [f"s {c.k}"]
    lines.extend(f"v {v + 1} {col}" for v, col in enumerate(c.colors))
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, n: int | None = None) -> KColoring:
    k = None
    assigned: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s" and len(tok) == 2:
                k = int(tok[1])
            elif tok[0] == "v" and len(tok) == 3:
                v, col = int(tok[1]), int(tok[2])
                if v < 1 or v - 1 in assigned:
                    raise ColoringError(f"line {lineno}: bad or repeated vertex {v}")
                assigned[v - 1] = col
            else:
                raise ColoringError(f"line {lineno}: unrecognized line {raw.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, ColoringError):
                raise
            raise ColoringError(f"line {lineno}: expected integers") from None
    if k is None:
        raise ColoringError("missing 's <k>' line")
    size = n if n is not None else len(assigned)
    missing = [v + 1 for v in range(size) if v not in assigned]
    if missing or len(assigned) != size:
        raise ColoringError(f"coloring does not cover vertices 1..{size} (missing {missing[:5]})")
    return KColoring(k, tuple(assigned[v] for v in range(size)))


def coloring_from_map(k: int, n: int, assignment: Mapping[int, int]) -> KColoring:
    return KColoring(k, tuple(assignment[v] for v in range(n)))

"""Exact backtracking search for proper, semi-matching and local k-colorings.

Local and semi-matching validity both reduce to three families of small
constraints, which the search propagates by forward checking:

* edges: endpoints differ;
* cherries u-w-v with u, v non-adjacent: not (phi(u) == phi(v) and
  |phi(w) - phi(u)| == 1)  (semi-matching and local);
* triangles: colors not within a window of width 2  (local only).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .coloring import KColoring, Mode
from .graph import Graph

DEFAULT_BUDGET = 10**8


class BudgetExhausted(RuntimeError):
    """The node budget ran out before the search reached a decision."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


@dataclass(frozen=True)
class SolverConfig:
    mode: Mode
    k: int
    node_budget: int | None = DEFAULT_BUDGET
    deterministic: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.node_budget is not None and self.node_budget <= 0:
            raise ValueError("node budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class SearchStats:
    nodes: int = 0


@dataclass(frozen=True)
class ConstrainedInstance:
    """A graph plus vertex groups that must each be monochromatic in {1, k}."""

    g: Graph
    groups: tuple[frozenset[int], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        groups = tuple(frozenset(u) for u in self.groups)
        for i, grp in enumerate(groups):
            if not grp:
                raise ValueError(f"group {i} is empty")
            if any(not 0 <= v < self.g.n for v in grp):
                raise ValueError(f"group {i} has vertices outside the graph")
        object.__setattr__(self, "groups", groups)


class _Search:
    def __init__(
        self,
        g: Graph,
        mode: Mode,
        k: int,
        eq_classes: Sequence[Sequence[int]] = (),
        domain_mask: Mapping[int, int] | None = None,
        limit: int | None = None,
        stats: SearchStats | None = None,
    ):
        n = g.n
        self.n, self.k, self.mode = n, k, mode
        self.adj = [sorted(g.neighbors[v]) for v in range(n)]
        adjset = g.neighbors
        full = ((1 << (k + 1)) - 1) & ~1
        self.full = full
        self.dom = [full] * n
        for v, mask in (domain_mask or {}).items():
            self.dom[v] &= mask
        self.col = [0] * n
        self.trail: list[tuple[int, int]] = []
        self.stats = stats if stats is not None else SearchStats()
        self.limit = limit
        # failure counts per vertex, for dom/wdeg-style selection
        self.weight = [1] * n
        # branching tie-break: descending degree, then index
        self.rank = [0] * n
        for r, v in enumerate(sorted(range(n), key=lambda v: (-len(self.adj[v]), v))):
            self.rank[v] = r

        self.cherry_end: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.tri: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        if mode is not Mode.PROPER:
            for v in range(n):
                for w in self.adj[v]:
                    for u in self.adj[w]:
                        if u != v and u not in adjset[v]:
                            self.cherry_end[v].append((w, u))
        if mode is Mode.LOCAL:
            for v in range(n):
                nb = self.adj[v]
                for i, a in enumerate(nb):
                    for b in nb[i + 1 :]:
                        if b in adjset[a]:
                            self.tri[v].append((a, b))

        self.eq: list[list[int]] = [[] for _ in range(n)]
        for cls in eq_classes:
            for v in cls:
                self.eq[v] = [u for u in cls if u != v]

    # -- domain bookkeeping ------------------------------------------------
    def _prune(self, u: int, mask: int) -> bool:
        d = self.dom[u]
        nd = d & ~mask
        if nd != d:
            self.trail.append((u, d))
            self.dom[u] = nd
            if not nd:
                self.weight[u] += 1
                return False
        return True

    def _restrict(self, u: int, mask: int) -> bool:
        return self._prune(u, ~mask & self.full)

    def _window(self, lo: int, hi: int) -> int:
        lo = max(lo, 1)
        hi = min(hi, self.k)
        if lo > hi:
            return 0
        return ((1 << (hi + 1)) - 1) & ~((1 << lo) - 1)

    def assign(self, v: int, c: int) -> bool:
        """Color ``v`` with ``c`` and forward-check; False on a wipeout."""
        col = self.col
        self.trail.append((v, self.dom[v]))
        self.trail.append((~v, 0))
        self.dom[v] = 1 << c
        col[v] = c
        bit = 1 << c
        for u in self.eq[v]:
            if not col[u] and not self._restrict(u, bit):
                return False
        for u in self.adj[v]:
            if not col[u] and not self._prune(u, bit):
                return False
        if self.mode is Mode.PROPER:
            return True
        near = (bit << 1) | (bit >> 1)
        # v as an end of a cherry u-w-v
        for w, u in self.cherry_end[v]:
            cw, cu = col[w], col[u]
            if cw and not cu:
                if (cw - c == 1 or c - cw == 1) and not self._prune(u, bit):
                    return False
            elif cu and not cw:
                if cu == c and not self._prune(w, near):
                    return False
        # v as the center of a cherry
        seen = 0
        for u in self.adj[v]:
            cu = col[u]
            if cu and (cu - c == 1 or c - cu == 1):
                seen |= 1 << cu
        if seen:
            for u in self.adj[v]:
                if not col[u] and not self._prune(u, seen):
                    return False
        # a triangle already spread by >= 3 constrains nothing further
        for a, b in self.tri[v]:
            ca, cb = col[a], col[b]
            if ca and not cb:
                if -3 < ca - c < 3 and not self._prune(
                    b, self._window(max(c, ca) - 2, min(c, ca) + 2)
                ):
                    return False
            elif cb and not ca:
                if -3 < cb - c < 3 and not self._prune(
                    a, self._window(max(c, cb) - 2, min(c, cb) + 2)
                ):
                    return False
        return True

    def undo(self, mark: int) -> None:
        trail, dom, col = self.trail, self.dom, self.col
        while len(trail) > mark:
            u, d = trail.pop()
            if u < 0:
                col[~u] = 0
            else:
                dom[u] = d

    def _select(self, vertices: Sequence[int]) -> int:
        col, dom, rank, weight = self.col, self.dom, self.rank, self.weight
        best, best_key = -1, None
        for v in vertices:
            if col[v]:
                continue
            key = (dom[v].bit_count() / weight[v], rank[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def solve(self, vertices: Sequence[int]) -> bool:
        v = self._select(vertices)
        if v < 0:
            return True
        d = self.dom[v]
        stats = self.stats
        for c in range(1, self.k + 1):
            if not d >> c & 1:
                continue
            stats.nodes += 1
            if self.limit is not None and stats.nodes > self.limit:
                raise BudgetExhausted(stats.nodes)
            mark = len(self.trail)
            if self.assign(v, c):
                if self.solve(vertices):
                    return True
            else:
                self.weight[v] += 1
            self.undo(mark)
        return False


def _units(g: Graph, eq_classes: Iterable[Sequence[int]]) -> list[list[int]]:
    """Connected components of the graph with equality classes glued together."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        parent[find(u)] = find(v)
    for cls in eq_classes:
        for u in cls[1:]:
            parent[find(u)] = find(cls[0])
    comps: dict[int, list[int]] = {}
    for v in range(g.n):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _decide(
    g: Graph,
    mode: Mode,
    k: int,
    fixed: Mapping[int, int],
    eq_classes: Sequence[Sequence[int]],
    domain_mask: Mapping[int, int],
    limit: int | None,
    stats: SearchStats,
) -> tuple[int, ...] | None:
    s = _Search(g, mode, k, eq_classes, domain_mask, limit, stats)
    for v in sorted(fixed):
        c = fixed[v]
        if s.col[v]:
            if s.col[v] != c:
                return None
            continue
        if not s.dom[v] >> c & 1 or not s.assign(v, c):
            return None
    for unit in _units(g, eq_classes):
        if not s.solve(unit):
            return None
    return tuple(s.col)


def _canonicalize(
    g: Graph,
    mode: Mode,
    k: int,
    fixed: Mapping[int, int],
    eq_classes: Sequence[Sequence[int]],
    domain_mask: Mapping[int, int],
    limit: int | None,
    stats: SearchStats,
    found: tuple[int, ...],
) -> tuple[int, ...]:
    """Lexicographically least solution, by fixing a prefix one vertex at a time."""
    best = found
    prefix = dict(fixed)
    for v in range(g.n):
        if v in fixed:
            continue
        for c in range(1, best[v]):
            trial = dict(prefix)
            trial[v] = c
            sol = _decide(g, mode, k, trial, eq_classes, domain_mask, limit, stats)
            if sol is not None:
                best = sol
                break
        prefix[v] = best[v]
    return best


def _branch_worker(args):
    g, mode, k, fixed, eq_classes, domain_mask, budget = args
    stats = SearchStats()
    try:
        return _decide(g, mode, k, fixed, eq_classes, domain_mask, budget, stats), stats.nodes
    except BudgetExhausted as exc:
        return exc, stats.nodes


def _run(
    g: Graph,
    cfg: SolverConfig,
    fixed: Mapping[int, int],
    eq_classes: Sequence[Sequence[int]],
    domain_mask: Mapping[int, int],
    stats: SearchStats,
) -> KColoring | None:
    k = cfg.k
    for v, c in fixed.items():
        if not 0 <= v < g.n:
            raise ValueError(f"fixed vertex {v} out of range")
        if not 1 <= c <= k:
            raise ValueError(f"fixed color {c} for vertex {v} outside 1..{k}")
    budget = cfg.node_budget
    limit = None if budget is None else stats.nodes + budget
    free = [v for v in range(g.n) if v not in fixed]
    if cfg.workers > 1 and free:
        # split the top-level branch over the colors of the first free vertex
        pivot = min(free, key=lambda v: (-g.degree(v), v))
        jobs = [
            (g, cfg.mode, k, {**fixed, pivot: c}, eq_classes, domain_mask, budget)
            for c in range(1, k + 1)
        ]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_branch_worker, jobs))
        stats.nodes += sum(n for _, n in results)
        sol = None
        for res, _ in results:
            if isinstance(res, tuple):
                sol = res
                break
        if sol is None:
            exhausted = [r for r, _ in results if isinstance(r, BudgetExhausted)]
            if exhausted:
                raise BudgetExhausted(stats.nodes)
    else:
        sol = _decide(g, cfg.mode, k, fixed, eq_classes, domain_mask, limit, stats)
    if sol is None:
        return None
    if cfg.deterministic:
        sol = _canonicalize(g, cfg.mode, k, fixed, eq_classes, domain_mask, limit, stats, sol)
    return KColoring(k, sol)


def find_coloring(
    g: Graph,
    cfg: SolverConfig,
    fixed: Mapping[int, int] | None = None,
    stats: SearchStats | None = None,
) -> KColoring | None:
    """A valid ``cfg.mode`` coloring extending ``fixed``, or None if none exists.

    With ``cfg.deterministic`` the lexicographically least such coloring (by
    vertex index) is returned. Raises :class:`BudgetExhausted` if the node
    budget runs out first.
    """
    stats = stats if stats is not None else SearchStats()
    return _run(g, cfg, dict(fixed or {}), (), {}, stats)


def _merge_groups(groups: Sequence[frozenset[int]]) -> list[list[int]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for grp in groups:
        members = sorted(grp)
        for u in members:
            parent[find(u)] = find(members[0])
    classes: dict[int, list[int]] = {}
    for v in sorted(parent):
        classes.setdefault(find(v), []).append(v)
    return list(classes.values())


def solve_constrained(
    inst: ConstrainedInstance, cfg: SolverConfig, stats: SearchStats | None = None
) -> KColoring | None:
    """Valid coloring with every group monochromatic in color 1 or color k."""
    if cfg.k < 3:
        raise ValueError(f"constrained problem needs k >= 3, got {cfg.k}")
    stats = stats if stats is not None else SearchStats()
    classes = _merge_groups(inst.groups)
    ends = (1 << 1) | (1 << cfg.k)
    mask = {v: ends for cls in classes for v in cls}
    return _run(inst.g, cfg, {}, classes, mask, stats)


def solve_constrained_oracle(
    inst: ConstrainedInstance, cfg: SolverConfig, stats: SearchStats | None = None
) -> bool:
    """Decision cross-check: try every {1, k} choice per group, component by component."""
    if cfg.k < 3:
        raise ValueError(f"constrained problem needs k >= 3, got {cfg.k}")
    stats = stats if stats is not None else SearchStats()
    g = inst.g
    comps = g.components()
    sub = [(comp, g.induced(comp)) for comp in comps]
    limit = None if cfg.node_budget is None else stats.nodes + cfg.node_budget
    for choice in product((1, cfg.k), repeat=len(inst.groups)):
        fixed: dict[int, int] = {}
        clash = False
        for grp, c in zip(inst.groups, choice):
            for v in grp:
                if fixed.setdefault(v, c) != c:
                    clash = True
        if clash:
            continue
        ok = True
        for comp, h in sub:
            local = {i: fixed[v] for i, v in enumerate(comp) if v in fixed}
            remaining = None if limit is None else limit - stats.nodes
            if remaining is not None and remaining <= 0:
                raise BudgetExhausted(stats.nodes)
            sub_cfg = SolverConfig(cfg.mode, cfg.k, remaining, deterministic=False)
            if find_coloring(h, sub_cfg, local, stats) is None:
                ok = False
                break
        if ok:
            return True
    return False


def chromatic_number(
    g: Graph,
    mode: Mode,
    k_max: int,
    node_budget: int | None = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> int | None:
    """Smallest k <= k_max admitting a valid coloring, or None."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    for k in range(1, k_max + 1):
        cfg = SolverConfig(mode, k, node_budget, deterministic=False)
        if find_coloring(g, cfg, stats=stats) is not None:
            return k
    return None


# --- group file format -----------------------------------------------------
#   p groups <t>
#   g <v1> <v2> ...      (1-based, one line per group, in order)


def format_groups(groups: Sequence[Iterable[int]]) -> str:
    lines = [f"p groups {len(groups)}"]
    lines += ["g " + " ".join(str(v + 1) for v in sorted(grp)) for grp in groups]
    return "\n".join(lines) + "\n"


class GroupFormatError(ValueError):
    pass


def parse_groups(text: str, n: int | None = None) -> list[frozenset[int]]:
    declared = None
    groups = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "p" and len(tok) == 3 and tok[1] == "groups":
                declared = int(tok[2])
            elif tok[0] == "g" and len(tok) >= 2:
                verts = [int(x) - 1 for x in tok[1:]]
                if any(v < 0 or (n is not None and v >= n) for v in verts):
                    raise GroupFormatError(f"line {lineno}: group vertex out of range")
                groups.append(frozenset(verts))
            else:
                raise GroupFormatError(f"line {lineno}: unrecognized line {raw.strip()!r}")
        except GroupFormatError:
            raise
        except ValueError:
            raise GroupFormatError(f"line {lineno}: expected integers") from None
    if declared is not None and declared != len(groups):
        raise GroupFormatError(f"header declares {declared} groups, found {len(groups)}")
    return groups

"""Gadget graphs: the NAE clause gadget, its colorings, and the equality gadget."""

from __future__ import annotations

import logging
import os
import tempfile
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .coloring import KColoring, Mode, format_coloring, parse_coloring, validate
from .graph import (
    Graph,
    add_edges,
    c_graph,
    complete_graph,
    disjoint_union,
    format_graph,
    parse_graph,
)
from .solver import (
    BudgetExhausted,
    ConstrainedInstance,
    SolverConfig,
    chromatic_number,
    find_coloring,
)

log = logging.getLogger(__name__)

PORTS = ("u1", "u2", "v")


class GadgetError(ValueError):
    pass


class WitnessNotFound(RuntimeError):
    pass


def _check_k(k: int) -> None:
    if k < 3:
        raise GadgetError(f"gadgets need k >= 3, got {k}")


def l_params(k: int) -> tuple[int, int]:
    """``(n, r)`` with ``L(k) = C(n, r)``; ``L(3)`` is ``C(1, 0)``."""
    _check_k(k)
    if k == 3:
        return 1, 0
    if k % 2 == 0:
        tau = (k - 2) // 2
        return 2 * tau, tau
    tau = (k - 3) // 2
    return 2 * tau, tau - 1


def l_graph(k: int) -> Graph:
    return c_graph(*l_params(k))


@dataclass(frozen=True)
class PortedGadget:
    g: Graph
    ports: dict[str, int]
    core1: tuple[int, ...] = ()
    core2: tuple[int, ...] = ()

    def port_vertices(self) -> tuple[int, int, int]:
        return tuple(self.ports[p] for p in PORTS)  # type: ignore[return-value]


def nae_gadget(k: int, mode: Mode) -> PortedGadget:
    """Two core copies, ``u1``/``u2`` joined to one copy each, ``v`` joined to both.

    The core is ``L(k)`` for local colorings and ``K_{k-2}`` for semi-matching
    colorings. Vertex order: core 1, core 2, u1, u2, v.
    """
    _check_k(k)
    if mode is Mode.LOCAL:
        core = l_graph(k)
    elif mode is Mode.SEMI_MATCHING:
        core = complete_graph(k - 2)
    else:
        raise GadgetError("the NAE gadget is defined for local and semi-matching modes only")
    body, (o1, o2) = disjoint_union([core, core])
    c1 = tuple(range(o1, o1 + core.n))
    c2 = tuple(range(o2, o2 + core.n))
    u1, u2, v = body.n, body.n + 1, body.n + 2
    labels = dict(body.labels)
    labels.update({u1: "u1", u2: "u2", v: "v"})
    g = Graph.from_edges(body.n + 3, body.edges, labels)
    g = add_edges(g, [(u1, x) for x in c1] + [(u2, x) for x in c2] + [(v, x) for x in c1 + c2])
    return PortedGadget(g, {"u1": u1, "u2": u2, "v": v}, c1, c2)


def port_patterns(k: int) -> list[tuple[int, int, int]]:
    return list(product((1, k), repeat=3))


def nae_allows(k: int, pattern: Sequence[int]) -> bool:
    """Closed form: extendable unless phi(u1), phi(u2), k+1-phi(v) all coincide."""
    a, b, c = pattern
    return not (a == b == k + 1 - c)


def extendable_port_patterns(
    k: int, mode: Mode, node_budget: int | None = None
) -> dict[tuple[int, int, int], bool]:
    """Which port colorings in ``{1, k}^3`` extend to the whole gadget, by search."""
    gadget = nae_gadget(k, mode)
    cfg = SolverConfig(mode, k, node_budget, deterministic=False)
    table = {}
    for pat in port_patterns(k):
        fixed = dict(zip(gadget.port_vertices(), pat))
        table[pat] = find_coloring(gadget.g, cfg, fixed) is not None
    return table


def local_core_low(n: int, r: int) -> list[int]:
    """Local coloring of ``C(n, r)`` with small colors.

    Removed pairs take (1, 2), (3, 4), ...; the remaining clique continues with
    gaps alternating 1 and 2. Uses at most ``floor(1.5n - 0.5) - r + 1`` colors.
    """
    colors = []
    for i in range(r):
        colors += [2 * i + 1, 2 * i + 2]
    start = 2 * r + 2 if r else 1
    colors += [start + (3 * j) // 2 for j in range(n - 2 * r)]
    return colors


def local_core_mid(k: int) -> list[int]:
    """Coloring of ``L(k)`` inside ``2..k-1`` for a core seeing colors 1 and k."""
    n, r = l_params(k)
    if k == 3:
        return [2]
    if k % 2 == 0:
        # removed pairs get (2,3), (4,5), ..., (k-2, k-1)
        return [c for i in range(r) for c in (2 * i + 2, 2 * i + 3)]
    # removed pairs share (4,4), (6,6), ...; the two full-degree vertices get 2, k-1
    return [c for i in range(r) for c in (2 * i + 4, 2 * i + 4)] + [2, k - 1]


def extend_gadget_coloring(
    k: int, mode: Mode, pattern: Sequence[int], node_budget: int | None = None
) -> KColoring | None:
    """Extend a port coloring ``(u1, u2, v)`` to the whole gadget, or None if forbidden."""
    _check_k(k)
    pattern = tuple(pattern)
    if any(c not in (1, k) for c in pattern) or len(pattern) != 3:
        raise GadgetError(f"port pattern must lie in {{1, {k}}}^3, got {pattern}")
    if not nae_allows(k, pattern):
        return None
    gadget = nae_gadget(k, mode)
    if mode is Mode.SEMI_MATCHING:
        cfg = SolverConfig(mode, k, node_budget)
        return find_coloring(gadget.g, cfg, dict(zip(gadget.port_vertices(), pattern)))
    if pattern[2] == 1:
        mirrored = tuple(k + 1 - c for c in pattern)
        return extend_gadget_coloring(k, mode, mirrored).reversed()
    # v has color k; a core whose u-port is k gets low colors, one whose u-port is 1 mid colors
    low = local_core_low(*l_params(k))
    mid = local_core_mid(k)
    cols = (low if pattern[0] == k else mid) + (low if pattern[1] == k else mid)
    return KColoring(k, tuple(cols) + pattern)


# --- Gamma: equal proper / semi-matching / local chromatic numbers -----------


@dataclass(frozen=True)
class GammaWitness:
    tau: int
    g: Graph
    witnesses: dict[Mode, KColoring] = field(hash=False)
    # mode -> True once tau - 1 colors were shown insufficient
    certificate: dict[Mode, bool] = field(hash=False)


def _cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


BUILTIN_GAMMA = {
    1: Graph(1),
    2: complete_graph(2),
    3: _cycle(5),
}


def certify_gamma(g: Graph, tau: int, node_budget: int | None = None) -> GammaWitness:
    """Check that all three chromatic numbers of ``g`` equal ``tau``.

    Raises WitnessNotFound when they do not.
    """
    witnesses = {}
    certificate = {}
    for mode in Mode:
        col = find_coloring(g, SolverConfig(mode, tau, node_budget))
        if col is None:
            raise WitnessNotFound(f"graph has no {mode.value} {tau}-coloring")
        if tau > 1 and find_coloring(g, SolverConfig(mode, tau - 1, node_budget, False)):
            raise WitnessNotFound(f"graph has a {mode.value} {tau - 1}-coloring")
        if not validate(g, col, mode):
            raise AssertionError("solver returned an invalid witness")
        witnesses[mode] = col
        certificate[mode] = True
    return GammaWitness(tau, g, witnesses, certificate)


def _atlas_candidates(max_vertices: int) -> Iterator[Graph]:
    import networkx as nx

    for h in nx.graph_atlas_g():
        if h.number_of_nodes() > max_vertices:
            return
        if h.number_of_nodes() == 0:
            continue
        yield Graph.from_edges(h.number_of_nodes(), h.edges())


def search_gamma(
    tau: int, node_budget: int = 10**6, max_vertices: int = 7
) -> GammaWitness:
    """Look for a witness among all graphs up to ``max_vertices`` vertices.

    Candidates are taken in order of vertex count, then edge count. The node
    budget is shared by all candidate certifications.
    """
    from .solver import SearchStats

    stats = SearchStats()
    exhausted = False
    for g in _atlas_candidates(max_vertices):
        remaining = node_budget - stats.nodes
        if remaining <= 0:
            exhausted = True
            break
        try:
            # proper chromatic number first: cheapest filter
            if chromatic_number(g, Mode.PROPER, tau, remaining, stats) != tau:
                continue
            remaining = node_budget - stats.nodes
            if chromatic_number(g, Mode.LOCAL, tau, max(remaining, 1), stats) != tau:
                continue
            if chromatic_number(g, Mode.SEMI_MATCHING, tau, max(remaining, 1), stats) != tau:
                continue
        except BudgetExhausted:
            exhausted = True
            break
        return certify_gamma(g, tau)
    if exhausted:
        raise WitnessNotFound(
            f"no witness for tau={tau}: budget of {node_budget} search nodes ran out "
            f"before all graphs with <= {max_vertices} vertices were checked"
        )
    raise WitnessNotFound(
        f"no graph with <= {max_vertices} vertices is a witness for tau={tau} "
        f"(all candidates checked, {stats.nodes} search nodes)"
    )


class GammaCache:
    """One file per tau: graph text, then ``c witness <mode>`` sections."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, tau: int) -> Path:
        return self.root / f"gamma_{tau}.graph"

    def store(self, w: GammaWitness) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        text = [f"c tau {w.tau}\n", format_graph(w.g)]
        for mode in Mode:
            text.append(f"c witness {mode.value}\n")
            text.append(format_coloring(w.witnesses[mode]))
        target = self.path(w.tau)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".gamma-", suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write("".join(text))
        os.replace(tmp, target)
        return target

    def load(self, tau: int) -> GammaWitness | None:
        p = self.path(tau)
        if not p.exists():
            return None
        sections = p.read_text().split("c witness ")
        g = parse_graph(sections[0])
        # the stored colorings are not trusted; certification recomputes them
        for sec in sections[1:]:
            mode_name, _, body = sec.partition("\n")
            col = parse_coloring(body, g.n)
            if not validate(g, col, Mode.parse(mode_name)):
                raise WitnessNotFound(f"cached {mode_name} witness for tau={tau} is invalid")
        return certify_gamma(g, tau)


_memo: dict[int, GammaWitness] = {}


def gamma_graph(
    tau: int,
    cache: GammaCache | None = None,
    node_budget: int = 10**6,
    search: bool = True,
) -> GammaWitness:
    """A certified graph whose proper, semi-matching and local chromatic numbers are ``tau``."""
    if tau < 1:
        raise GadgetError(f"tau must be >= 1, got {tau}")
    if tau in _memo:
        return _memo[tau]
    if tau in BUILTIN_GAMMA:
        w = certify_gamma(BUILTIN_GAMMA[tau], tau)
    else:
        w = cache.load(tau) if cache is not None else None
        if w is None:
            if not search:
                raise WitnessNotFound(f"no cached witness for tau={tau}")
            log.info("searching for a tau=%d witness (budget %d)", tau, node_budget)
            w = search_gamma(tau, node_budget)
            if cache is not None:
                cache.store(w)
    _memo[tau] = w
    return w


def gamma_triple(tau: int, **kwargs) -> tuple[Graph, dict[Mode, KColoring]]:
    """Three disjoint copies of the tau witness, with per-mode witness colorings."""
    w = gamma_graph(tau, **kwargs)
    g, _ = disjoint_union([w.g, w.g, w.g])
    cols = {m: KColoring(tau, c.colors * 3) for m, c in w.witnesses.items()}
    return g, cols


def equality_compose(
    inst: ConstrainedInstance, k: int, mode: Mode, **kwargs
) -> tuple[Graph, list[range]]:
    """Join a tripled ``Gamma_{k-2}`` to every vertex of each group.

    Returns the composed graph and, per group, the vertex range of its copy.
    The same Gamma serves both modes; ``mode`` is accepted for symmetry with
    the other constructors.
    """
    _check_k(k)
    if mode is Mode.PROPER:
        raise GadgetError("equality gadget is defined for local and semi-matching modes")
    if not inst.groups:
        return inst.g, []
    triple, _ = gamma_triple(k - 2, **kwargs)
    g, offsets = disjoint_union([inst.g] + [triple] * len(inst.groups))
    extra = []
    copies = []
    for grp, off in zip(inst.groups, offsets[1:]):
        block = range(off, off + triple.n)
        copies.append(block)
        extra.extend((u, x) for u in grp for x in block)
    return add_edges(g, extra), copies

"""Verification suites: machine checks of the reduction chain at desk scale.

Each suite returns a list of :class:`Check` records; the CLI serializes them
into a run report and the acceptance tests assert on them.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import asdict, dataclass, field
from itertools import combinations, product

from . import oracles
from .coloring import KColoring, Mode, find_violation, validate
from .gadgets import (
    WitnessNotFound,
    equality_compose,
    extend_gadget_coloring,
    extendable_port_patterns,
    gamma_graph,
    gamma_triple,
    l_graph,
    l_params,
    nae_allows,
    nae_gadget,
    port_patterns,
)
from .graph import Graph, add_vertex_joined, c_graph, complete_graph, remove_vertices
from .reduction import (
    Literal,
    NaeInstance,
    ReductionError,
    brute_force_nae,
    extract_assignment,
    lift_assignment,
    nae_satisfied,
    reduce_full,
    reduce_to_constrained,
)
from .solver import (
    DEFAULT_BUDGET,
    ConstrainedInstance,
    SearchStats,
    SolverConfig,
    chromatic_number,
    find_coloring,
    solve_constrained,
    solve_constrained_oracle,
)

COLORING_MODES = (Mode.LOCAL, Mode.SEMI_MATCHING)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.elapsed:.2f}s) {self.detail}".rstrip()

    def to_dict(self) -> dict:
        return asdict(self)


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def local_c_formula(n: int, r: int) -> int:
    # floor(1.5n - 0.5) - r, in integers
    return (3 * n - 1) // 2 - r


def check_thrc(n_max: int = 8, budget: int | None = DEFAULT_BUDGET) -> Check:
    stats = SearchStats()
    failures = []
    cases = 0
    with _Timer() as t:
        for n in range(1, n_max + 1):
            for r in range(n // 2 + 1):
                want = local_c_formula(n, r)
                got = chromatic_number(c_graph(n, r), Mode.LOCAL, want + 1, budget, stats)
                cases += 1
                if got != want:
                    failures.append(f"C({n},{r}): solver {got}, formula {want}")
    detail = f"{cases} (n, r) pairs" + (f"; {failures}" if failures else "")
    return Check(f"thrc n<={n_max}", not failures, detail, t.elapsed, {"nodes": stats.nodes})


def check_pattern_tables(ks: Iterable[int], modes: Sequence[Mode] = COLORING_MODES) -> Check:
    failures = []
    rows = 0
    with _Timer() as t:
        for mode in modes:
            for k in ks:
                table = extendable_port_patterns(k, mode)
                for pat, ok in table.items():
                    rows += 1
                    if ok != nae_allows(k, pat):
                        failures.append(f"{mode.value} k={k} {pat}: solver {ok}")
    return Check("gadget pattern tables", not failures, f"{rows} patterns" + (f"; {failures}" if failures else ""), t.elapsed)


def check_constructions(ks: Iterable[int], mode: Mode = Mode.LOCAL) -> Check:
    failures = []
    built = 0
    with _Timer() as t:
        for k in ks:
            g = nae_gadget(k, mode).g
            for pat in port_patterns(k):
                col = extend_gadget_coloring(k, mode, pat)
                if col is None:
                    if nae_allows(k, pat):
                        failures.append(f"k={k} {pat}: no coloring for allowed pattern")
                    continue
                built += 1
                bad = find_violation(g, col, mode)
                if bad is not None or col.colors[-3:] != tuple(pat):
                    failures.append(f"k={k} {pat}: {bad or 'ports not respected'}")
    return Check(
        f"gadget constructions ({mode.value})",
        not failures,
        f"{built} colorings" + (f"; {failures}" if failures else ""),
        t.elapsed,
    )


def check_apex(ks: Iterable[int]) -> Check:
    ks = list(ks)
    failures = []
    with _Timer() as t:
        for k in ks:
            core = l_graph(k)
            apex, _ = add_vertex_joined(core, range(core.n))
            n, r = l_params(k)
            got = chromatic_number(apex, Mode.LOCAL, k + 1)
            formula = local_c_formula(n + 1, r)
            if got != k - 1 or formula != k - 1 or apex != c_graph(n + 1, r):
                failures.append(f"k={k}: solver {got}, formula {formula}")
    detail = "; ".join(failures) or f"k={ks[0]}..{ks[-1]}: solver and formula both give k-1"
    return Check("apex join of L(k) needs k-1 local colors", not failures, detail, t.elapsed)


def check_gamma(taus: Iterable[int] = (1, 2, 3), budget: int | None = DEFAULT_BUDGET) -> list[Check]:
    out = []
    for tau in taus:
        with _Timer() as t:
            failures = []
            w = gamma_graph(tau)
            for mode in Mode:
                got = chromatic_number(w.g, mode, tau + 1, budget)
                if got != tau:
                    failures.append(f"{mode.value} number {got}")
            triple, _ = gamma_triple(tau)
            removals = 0
            for size in range(3):
                for gone in combinations(range(triple.n), size):
                    h = remove_vertices(triple, gone)
                    removals += 1
                    for mode in Mode:
                        got = chromatic_number(h, mode, tau + 1, budget)
                        if got != tau:
                            failures.append(f"minus {gone}: {mode.value} number {got}")
        out.append(
            Check(
                f"gamma tau={tau}",
                not failures,
                f"{w.g.n}-vertex witness, {removals} removal sets" + (f"; {failures[:5]}" if failures else ""),
                t.elapsed,
            )
        )
    return out


def try_gamma_search(tau: int, budget: int) -> Check:
    from .gadgets import search_gamma

    with _Timer() as t:
        try:
            w = search_gamma(tau, budget)
            detail = f"found {w.g.n}-vertex witness with {w.g.m} edges"
            found = True
        except WitnessNotFound as exc:
            detail = str(exc)
            found = False
    return Check(f"gamma search tau={tau}", found, detail, t.elapsed)


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_constrained(rng: random.Random, max_n: int = 6, max_t: int = 2) -> ConstrainedInstance:
    n = rng.randint(1, max_n)
    g = random_graph(rng, n)
    groups = []
    for _ in range(rng.randint(0, max_t)):
        size = rng.randint(1, n)
        groups.append(frozenset(rng.sample(range(n), size)))
    return ConstrainedInstance(g, tuple(groups))


def check_equality(count: int = 100, seed: int = 0, ks: Sequence[int] = (3, 4)) -> Check:
    rng = random.Random(seed)
    failures = []
    sat = unsat = 0
    with _Timer() as t:
        for i in range(count):
            inst = random_constrained(rng)
            for k in ks:
                for mode in COLORING_MODES:
                    cfg = SolverConfig(mode, k, deterministic=False)
                    direct = solve_constrained(inst, cfg)
                    composed, _ = equality_compose(inst, k, mode)
                    col = find_coloring(composed, cfg)
                    if (direct is None) != (col is None):
                        failures.append(f"#{i} k={k} {mode.value}: direct {direct is not None}, composed {col is not None}")
                        continue
                    if col is None:
                        unsat += 1
                        continue
                    sat += 1
                    for grp in inst.groups:
                        colors = {col[v] for v in grp}
                        if len(colors) != 1 or not colors <= {1, k}:
                            failures.append(f"#{i} k={k} {mode.value}: group colors {colors}")
    return Check(
        f"equality gadget on {count} instances",
        not failures,
        f"{sat} colorable, {unsat} not" + (f"; {failures[:5]}" if failures else ""),
        t.elapsed,
        {"seed": seed, "sat": sat, "unsat": unsat},
    )


def enumerate_nae(max_vars: int, max_clauses: int) -> Iterator[NaeInstance]:
    for nv in range(1, max_vars + 1):
        lits = [Literal(i, p) for i in range(nv) for p in (True, False)]
        triples = list(product(lits, repeat=3))
        for nc in range(max_clauses + 1):
            for clauses in product(triples, repeat=nc):
                yield NaeInstance(nv, tuple(clauses))


def random_nae(rng: random.Random, max_vars: int = 4, max_clauses: int = 5) -> NaeInstance:
    nv = rng.randint(1, max_vars)
    nc = rng.randint(0, max_clauses)
    lits = [Literal(i, p) for i in range(nv) for p in (True, False)]
    return NaeInstance(nv, tuple(tuple(rng.choice(lits) for _ in range(3)) for _ in range(nc)))


def _lift_check(inst, assignment, k, mode, g, trace) -> str | None:
    col = lift_assignment(inst, assignment, k, mode, trace)
    bad = find_violation(g, col, mode)
    if bad is not None:
        return f"lifted coloring invalid: {bad}"
    if extract_assignment(col, trace) != tuple(assignment):
        return "round trip changed the assignment"
    return None


def check_e2e_full(
    max_vars: int = 2,
    max_clauses: int = 2,
    ks: Sequence[int] = (3, 4),
    progress: Callable[[int], None] | None = None,
) -> list[Check]:
    """Exhaustive: NAE-satisfiable iff the fully reduced graph is colorable; plus lifting."""
    failures, lift_failures = [], []
    counts = {"instances": 0, "sat": 0, "unsat": 0, "lifted": 0, "extracted": 0}
    stats = SearchStats()
    with _Timer() as t:
        for idx, inst in enumerate(enumerate_nae(max_vars, max_clauses)):
            counts["instances"] += 1
            truth = brute_force_nae(inst)
            for k in ks:
                for mode in COLORING_MODES:
                    g, trace = reduce_full(inst, k, mode)
                    col = find_coloring(g, SolverConfig(mode, k, deterministic=False), stats=stats)
                    if (truth is None) != (col is None):
                        failures.append(f"{_show(inst)} k={k} {mode.value}: NAE {truth}, coloring {col is not None}")
                        continue
                    if truth is None:
                        counts["unsat"] += 1
                        continue
                    counts["sat"] += 1
                    err = _lift_check(inst, truth, k, mode, g, trace)
                    counts["lifted"] += 1
                    try:
                        got = extract_assignment(col, trace)
                        if not nae_satisfied(inst, got):
                            err = err or f"extracted {got} does not satisfy"
                    except ReductionError as exc:
                        err = err or f"extract failed: {exc}"
                    counts["extracted"] += 1
                    if err:
                        lift_failures.append(f"{_show(inst)} k={k} {mode.value}: {err}")
            if progress:
                progress(idx)
    stats_out = dict(counts, nodes=stats.nodes)
    return [
        Check(
            f"e2e full graph, <= {max_vars} vars, <= {max_clauses} clauses, k in {list(ks)}",
            not failures,
            f"{counts['instances']} instances, {counts['sat']} colorable / {counts['unsat']} not"
            + (f"; {failures[:5]}" if failures else ""),
            t.elapsed,
            stats_out,
        ),
        Check(
            "lifting on full graphs",
            not lift_failures,
            f"{counts['lifted']} lifted, {counts['extracted']} extracted" + (f"; {lift_failures[:5]}" if lift_failures else ""),
            0.0,
        ),
    ]


def check_e2e_random(
    count: int = 200,
    seed: int = 0,
    ks: Sequence[int] = (3, 4, 5),
    max_vars: int = 4,
    max_clauses: int = 5,
) -> list[Check]:
    """Random instances at the constrained stage, cross-checked with the group-enumeration oracle."""
    rng = random.Random(seed)
    failures, lift_failures = [], []
    sat = unsat = lifted = 0
    with _Timer() as t:
        for i in range(count):
            inst = random_nae(rng, max_vars, max_clauses)
            truth = brute_force_nae(inst)
            for k in ks:
                for mode in COLORING_MODES:
                    cinst, trace = reduce_to_constrained(inst, k, mode)
                    cfg = SolverConfig(mode, k, deterministic=False)
                    col = solve_constrained(cinst, cfg)
                    via_oracle = solve_constrained_oracle(cinst, cfg)
                    if not ((truth is not None) == (col is not None) == via_oracle):
                        failures.append(
                            f"#{i} {_show(inst)} k={k} {mode.value}: NAE {truth is not None}, "
                            f"solver {col is not None}, oracle {via_oracle}"
                        )
                        continue
                    if truth is None:
                        unsat += 1
                        continue
                    sat += 1
                    err = _lift_check(inst, truth, k, mode, cinst.g, trace)
                    if err is None:
                        got = extract_assignment(col, trace)
                        if not nae_satisfied(inst, got):
                            err = f"extracted {got} does not satisfy"
                        for x in range(inst.num_vars):
                            if col[trace.literal_vertex[Literal(x, True)]] == col[trace.literal_vertex[Literal(x, False)]]:
                                err = f"x{x + 1} and its negation share a color"
                    lifted += 1
                    if err:
                        lift_failures.append(f"#{i} {_show(inst)} k={k} {mode.value}: {err}")
    return [
        Check(
            f"e2e constrained stage, {count} random instances, k in {list(ks)}",
            not failures,
            f"{sat} satisfiable / {unsat} not (per k and mode)" + (f"; {failures[:5]}" if failures else ""),
            t.elapsed,
            {"seed": seed, "sat": sat, "unsat": unsat},
        ),
        Check(
            "lifting on constrained instances",
            not lift_failures,
            f"{lifted} lifted" + (f"; {lift_failures[:5]}" if lift_failures else ""),
            0.0,
        ),
    ]


def _show(inst: NaeInstance) -> str:
    return f"{inst.num_vars}v[" + " ".join("(" + ",".join(str(l) for l in cl) + ")" for cl in inst.clauses) + "]"


def random_coloring_case(rng: random.Random, max_n: int = 12, max_k: int = 5) -> tuple[Graph, KColoring]:
    n = rng.randint(1, max_n)
    g = random_graph(rng, n, rng.choice([0.15, 0.3, 0.5, rng.random()]))
    k = rng.randint(1, max_k)
    col = None
    if rng.random() < 0.5:
        mode = rng.choice(list(Mode))
        try:
            col = find_coloring(g, SolverConfig(mode, k, node_budget=20000, deterministic=False))
        except Exception:
            col = None
        if col is not None and rng.random() < 0.3:
            phi = list(col.colors)
            phi[rng.randrange(n)] = rng.randint(1, k)
            col = KColoring(k, tuple(phi))
    if col is None:
        col = KColoring(k, tuple(rng.randint(1, k) for _ in range(n)))
    return g, col


def check_validators(count: int = 1000, seed: int = 0) -> Check:
    rng = random.Random(seed)
    failures = []
    valid_seen = {m: 0 for m in Mode}
    with _Timer() as t:
        for i in range(count):
            g, col = random_coloring_case(rng)
            for mode in Mode:
                fast = validate(g, col, mode)
                slow = oracles.naive_valid(g, col.colors, col.k, mode)
                valid_seen[mode] += fast
                if fast != slow:
                    failures.append(f"#{i} {mode.value}: fast {fast}, naive {slow}")
    return Check(
        f"validators vs definition-literal oracle, {count} cases",
        not failures,
        "valid counts " + ", ".join(f"{m.value}={c}" for m, c in valid_seen.items())
        + (f"; {failures[:5]}" if failures else ""),
        t.elapsed,
        {"seed": seed},
    )


def check_derived() -> Check:
    failures = []
    with _Timer() as t:
        for n in range(1, 7):
            got = chromatic_number(complete_graph(n), Mode.SEMI_MATCHING, n + 1)
            if got != n:
                failures.append(f"K{n}: {got}")
        c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
        got = chromatic_number(c5, Mode.SEMI_MATCHING, 4)
        if got != 3:
            failures.append(f"C5: {got}")
    detail = "; ".join(failures) or "K_n gives n for n<=6, C5 gives 3"
    return Check("semi-matching numbers of K1..K6 and C5", not failures, detail, t.elapsed)


def parse_range(text: str) -> list[int]:
    """``"3..7"`` -> [3, 4, 5, 6, 7]; also accepts ``"3,5"`` and ``"4"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out

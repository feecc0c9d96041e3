"""NAE 3-SAT front end and the reduction to (constrained) local / semi-matching coloring."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import NamedTuple

from .coloring import KColoring, Mode
from .gadgets import PORTS, equality_compose, extend_gadget_coloring, gamma_triple, nae_gadget
from .graph import Graph, disjoint_union
from .solver import ConstrainedInstance

MAX_BRUTE_VARS = 20


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def negate(self) -> Literal:
        return Literal(self.var, not self.positive)

    def to_int(self) -> int:
        return self.var + 1 if self.positive else -(self.var + 1)

    @classmethod
    def from_int(cls, x: int) -> Literal:
        if x == 0:
            raise ValueError("literal 0 is not allowed")
        return cls(abs(x) - 1, x > 0)

    def __str__(self) -> str:
        return f"{'' if self.positive else '-'}x{self.var + 1}"


Clause = tuple[Literal, Literal, Literal]


class NaeParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class NaeInstance:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        clauses = []
        for i, cl in enumerate(self.clauses):
            if len(cl) != 3:
                raise ValueError(f"clause {i} has {len(cl)} literals, expected 3")
            lits = tuple(Literal(*lit) for lit in cl)
            for lit in lits:
                if not 0 <= lit.var < self.num_vars:
                    raise ValueError(f"clause {i} mentions variable {lit.var + 1} of {self.num_vars}")
            clauses.append(lits)
        object.__setattr__(self, "clauses", tuple(clauses))

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> NaeInstance:
        return cls(num_vars, tuple(tuple(Literal.from_int(x) for x in cl) for cl in clauses))

    def literals(self) -> list[Literal]:
        return [Literal(i, p) for i in range(self.num_vars) for p in (True, False)]


def parse_nae(text: str) -> NaeInstance:
    """Parse ``p nae3 <vars> <clauses>`` followed by one clause per line."""
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        toks = _tokens(raw)
        if toks[0][1] == "p":
            if header is not None:
                raise NaeParseError("duplicate header", lineno, toks[0][0])
            if len(toks) != 4 or toks[1][1] != "nae3":
                raise NaeParseError("expected 'p nae3 <num_vars> <num_clauses>'", lineno, 1)
            nv, nc = (_nonneg(t, lineno) for t in toks[2:])
            header = (nv, nc)
            continue
        if header is None:
            raise NaeParseError("clause before 'p nae3' header", lineno, toks[0][0])
        if len(toks) != 3:
            raise NaeParseError(f"clause has {len(toks)} literals, expected 3", lineno, toks[0][0])
        clause = []
        for col, tok in toks:
            try:
                x = int(tok)
            except ValueError:
                raise NaeParseError(f"literal {tok!r} is not an integer", lineno, col) from None
            if x == 0 or abs(x) > header[0]:
                raise NaeParseError(f"literal {x} out of range 1..{header[0]}", lineno, col)
            clause.append(Literal.from_int(x))
        clauses.append(tuple(clause))
    if header is None:
        raise NaeParseError("missing 'p nae3' header")
    nv, nc = header
    if len(clauses) != nc:
        raise NaeParseError(f"header declares {nc} clauses, found {len(clauses)}")
    if nv == 0 and nc > 0:
        raise NaeParseError("clauses given but no variables declared")
    return NaeInstance(nv, tuple(clauses))


def _tokens(line: str) -> list[tuple[int, str]]:
    out, i = [], 0
    for tok in line.split():
        i = line.index(tok, i)
        out.append((i + 1, tok))
        i += len(tok)
    return out


def _nonneg(tok: tuple[int, str], lineno: int) -> int:
    col, text = tok
    try:
        x = int(text)
    except ValueError:
        raise NaeParseError(f"expected integer, got {text!r}", lineno, col) from None
    if x < 0:
        raise NaeParseError(f"expected nonnegative integer, got {x}", lineno, col)
    return x


def format_nae(inst: NaeInstance) -> str:
    lines = [f"p nae3 {inst.num_vars} {len(inst.clauses)}"]
    lines += [" ".join(str(lit.to_int()) for lit in cl) for cl in inst.clauses]
    return "\n".join(lines) + "\n"


def literal_value(lit: Literal, assignment: Sequence[bool]) -> bool:
    return assignment[lit.var] == lit.positive


def nae_satisfied(inst: NaeInstance, assignment: Sequence[bool]) -> bool:
    if len(assignment) != inst.num_vars:
        return False
    for cl in inst.clauses:
        vals = {literal_value(lit, assignment) for lit in cl}
        if len(vals) != 2:
            return False
    return True


def brute_force_nae(inst: NaeInstance) -> tuple[bool, ...] | None:
    """First NAE-satisfying assignment in lexicographic order (False < True)."""
    if inst.num_vars > MAX_BRUTE_VARS:
        raise ValueError(f"brute force capped at {MAX_BRUTE_VARS} variables")
    for a in product((False, True), repeat=inst.num_vars):
        if nae_satisfied(inst, a):
            return a
    return None


@dataclass
class ReductionTrace:
    """Where every literal, clause gadget and Gamma copy sits in the reduced graph."""

    num_vars: int
    k: int
    mode: Mode
    literal_vertex: dict[Literal, int]
    group_of_literal: dict[Literal, int]
    groups: list[frozenset[int]]
    clause_vertices: list[tuple[int, ...]]
    clause_ports: list[dict[str, int]]
    gamma_copies: list[range] = field(default_factory=list)
    base_vertices: int = 0

    @property
    def true_color(self) -> int:
        return self.k

    @property
    def false_color(self) -> int:
        return 1

    def to_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "k": self.k,
            "mode": self.mode.value,
            "true_color": self.true_color,
            "base_vertices": self.base_vertices,
            "literal_vertex": {str(lit): v for lit, v in self.literal_vertex.items()},
            "group_of_literal": {str(lit): g for lit, g in self.group_of_literal.items()},
            "groups": [sorted(g) for g in self.groups],
            "clause_vertices": [list(c) for c in self.clause_vertices],
            "clause_ports": self.clause_ports,
            "gamma_copies": [[r.start, r.stop] for r in self.gamma_copies],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ReductionTrace:
        def lit(s: str) -> Literal:
            neg = s.startswith("-")
            return Literal(int(s.lstrip("-x")) - 1, not neg)

        return cls(
            num_vars=d["num_vars"],
            k=d["k"],
            mode=Mode.parse(d["mode"]),
            literal_vertex={lit(s): v for s, v in d["literal_vertex"].items()},
            group_of_literal={lit(s): g for s, g in d["group_of_literal"].items()},
            groups=[frozenset(g) for g in d["groups"]],
            clause_vertices=[tuple(c) for c in d["clause_vertices"]],
            clause_ports=[dict(p) for p in d["clause_ports"]],
            gamma_copies=[range(a, b) for a, b in d["gamma_copies"]],
            base_vertices=d["base_vertices"],
        )


def _group_index(lit: Literal) -> int:
    return 2 * lit.var + (0 if lit.positive else 1)


def reduce_to_constrained(
    inst: NaeInstance, k: int, mode: Mode
) -> tuple[ConstrainedInstance, ReductionTrace]:
    """Literal edges plus one NAE gadget per clause; groups tie literals to ports.

    Clause ``(a, b, c)`` contributes a gadget whose ``u1`` joins the group of
    ``a``, ``u2`` the group of ``b`` and ``v`` the group of ``not c``.
    """
    if k < 3:
        raise ReductionError(f"reduction needs k >= 3, got {k}")
    if mode is Mode.PROPER:
        raise ReductionError("reduction targets local or semi-matching colorings")
    lits = inst.literals()
    labels = {_group_index(lit): str(lit) for lit in lits}
    base = Graph.from_edges(
        2 * inst.num_vars, [(2 * i, 2 * i + 1) for i in range(inst.num_vars)], labels
    )
    gadget = nae_gadget(k, mode)
    g, offsets = disjoint_union([base] + [gadget.g] * len(inst.clauses))
    members: list[set[int]] = [{_group_index(lit)} for lit in lits]
    clause_vertices, clause_ports = [], []
    relabel = dict(g.labels)
    for j, (cl, off) in enumerate(zip(inst.clauses, offsets[1:])):
        ports = {p: gadget.ports[p] + off for p in PORTS}
        a, b, c = cl
        members[_group_index(a)].add(ports["u1"])
        members[_group_index(b)].add(ports["u2"])
        members[_group_index(c.negate())].add(ports["v"])
        for p, v in ports.items():
            relabel[v] = f"C{j + 1}.{p}"
        clause_vertices.append(tuple(range(off, off + gadget.g.n)))
        clause_ports.append(ports)
    g = Graph.from_edges(g.n, g.edges, relabel)
    groups = [frozenset(m) for m in members]
    trace = ReductionTrace(
        num_vars=inst.num_vars,
        k=k,
        mode=mode,
        literal_vertex={lit: _group_index(lit) for lit in lits},
        group_of_literal={lit: _group_index(lit) for lit in lits},
        groups=groups,
        clause_vertices=clause_vertices,
        clause_ports=clause_ports,
        base_vertices=g.n,
    )
    return ConstrainedInstance(g, tuple(groups)), trace


def reduce_full(inst: NaeInstance, k: int, mode: Mode, **gamma_kwargs) -> tuple[Graph, ReductionTrace]:
    """Plain graph that is ``mode``-k-colorable iff ``inst`` is NAE-satisfiable."""
    cinst, trace = reduce_to_constrained(inst, k, mode)
    g, copies = equality_compose(cinst, k, mode, **gamma_kwargs)
    trace.gamma_copies = copies
    return g, trace


@lru_cache(maxsize=None)
def _gadget_fill(k: int, mode: Mode, pattern: tuple[int, int, int]) -> KColoring | None:
    return extend_gadget_coloring(k, mode, pattern)


def lift_assignment(
    inst: NaeInstance,
    assignment: Sequence[bool],
    k: int,
    mode: Mode,
    trace: ReductionTrace,
) -> KColoring:
    """Turn a satisfying assignment into a coloring of the reduced graph.

    True literals' groups get color k and false ones color 1. If the trace has
    Gamma copies, each is colored with its witness, shifted to 3..k beside a
    group of color 1 and kept in 1..k-2 beside a group of color k.
    """
    if not nae_satisfied(inst, assignment):
        raise ReductionError("assignment does not NAE-satisfy the instance")
    n = trace.base_vertices + sum(len(r) for r in trace.gamma_copies)
    colors = [0] * n
    group_color = []
    for gi, grp in enumerate(trace.groups):
        lit = Literal(gi // 2, gi % 2 == 0)
        c = k if literal_value(lit, assignment) else 1
        group_color.append(c)
        for v in grp:
            colors[v] = c
    for verts, ports in zip(trace.clause_vertices, trace.clause_ports):
        pattern = tuple(colors[ports[p]] for p in PORTS)
        fill = _gadget_fill(k, mode, pattern)
        if fill is None:
            raise ReductionError(f"clause gadget port pattern {pattern} cannot be extended")
        for v, c in zip(verts, fill.colors):
            colors[v] = c
    if trace.gamma_copies:
        _, witness = gamma_triple(k - 2)
        base = witness[mode].colors
        for block, c in zip(trace.gamma_copies, group_color):
            shift = 2 if c == 1 else 0
            for v, wc in zip(block, base):
                colors[v] = wc + shift
    return KColoring(k, tuple(colors))


def extract_assignment(coloring: KColoring, trace: ReductionTrace) -> tuple[bool, ...]:
    """Read the truth assignment off the colors of the literal groups."""
    k = trace.k
    group_color = []
    for gi, grp in enumerate(trace.groups):
        cols = {coloring[v] for v in grp}
        if len(cols) != 1 or not cols <= {1, k}:
            raise ReductionError(
                f"group {gi} is not monochromatic in {{1, {k}}}: colors {sorted(cols)}"
            )
        group_color.append(cols.pop())
    for i in range(trace.num_vars):
        if group_color[2 * i] == group_color[2 * i + 1]:
            raise ReductionError(f"variable x{i + 1} and its negation share color {group_color[2 * i]}")
    return tuple(group_color[2 * i] == k for i in range(trace.num_vars))

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from localcolor import oracles
from localcolor.coloring import Mode, validate
from localcolor.graph import Graph, c_graph, complete_graph, remove_vertices
from localcolor.solver import (
    BudgetExhausted,
    ConstrainedInstance,
    GroupFormatError,
    SearchStats,
    SolverConfig,
    chromatic_number,
    find_coloring,
    format_groups,
    parse_groups,
    solve_constrained,
    solve_constrained_oracle,
)

from conftest import cycle, graphs

K1, K2, K3 = complete_graph(1), complete_graph(2), complete_graph(3)


def test_find_coloring_examples():
    assert find_coloring(K3, SolverConfig(Mode.LOCAL, 3)) is None
    # frozen from exhaustive enumeration of all 4^3 assignments
    assert oracles.first_valid(K3, 4, Mode.LOCAL) == (1, 2, 4)
    assert find_coloring(K3, SolverConfig(Mode.LOCAL, 4)).colors == (1, 2, 4)
    for mode in Mode:
        assert find_coloring(K1, SolverConfig(mode, 1)).colors == (1,)


def test_fixed_colors_respected():
    c = find_coloring(K3, SolverConfig(Mode.LOCAL, 4), {1: 4})
    assert c.colors[1] == 4 and validate(K3, c, Mode.LOCAL)
    assert find_coloring(K3, SolverConfig(Mode.LOCAL, 4), {0: 2, 1: 3}) is None
    with pytest.raises(ValueError):
        find_coloring(K3, SolverConfig(Mode.LOCAL, 4), {0: 5})


def test_budget_is_distinct_from_unsat():
    g = c_graph(7, 0)
    with pytest.raises(BudgetExhausted) as info:
        find_coloring(g, SolverConfig(Mode.LOCAL, 9, node_budget=10))
    assert info.value.nodes > 10
    assert find_coloring(g, SolverConfig(Mode.LOCAL, 9)) is None


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(Mode.LOCAL, 0)
    with pytest.raises(ValueError):
        SolverConfig(Mode.LOCAL, 3, node_budget=0)


def _random_graph(rng, max_n):
    n = rng.randint(0, max_n)
    p = rng.random()
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def test_decision_matches_enumeration():
    rng = random.Random(11)
    for _ in range(1000):
        g = _random_graph(rng, 7)
        k = rng.randint(1, 4)
        mode = rng.choice(list(Mode))
        got = find_coloring(g, SolverConfig(mode, k, deterministic=False))
        want = oracles.first_valid(g, k, mode)
        assert (got is None) == (want is None), (g, k, mode)
        if got is not None:
            assert oracles.naive_valid(g, got.colors, k, mode)


def test_deterministic_witness_is_lexicographically_least():
    rng = random.Random(12)
    for _ in range(300):
        g = _random_graph(rng, 6)
        k = rng.randint(1, 4)
        mode = rng.choice(list(Mode))
        got = find_coloring(g, SolverConfig(mode, k))
        want = oracles.first_valid(g, k, mode)
        assert (got.colors if got is not None else None) == want


def test_parallel_search_is_deterministic():
    g = cycle(7)
    serial = find_coloring(g, SolverConfig(Mode.LOCAL, 4))
    parallel = [find_coloring(g, SolverConfig(Mode.LOCAL, 4, workers=2)) for _ in range(2)]
    assert parallel == [serial, serial]
    assert find_coloring(K3, SolverConfig(Mode.LOCAL, 3, workers=2)) is None


@pytest.mark.parametrize(
    "g, mode, want",
    [
        (K3, Mode.LOCAL, 4),  # floor(1.5*3 - 0.5) - 0
        (c_graph(4, 1), Mode.LOCAL, 4),  # floor(1.5*4 - 0.5) - 1
        (K1, Mode.PROPER, 1),
        (K1, Mode.LOCAL, 1),
        (K1, Mode.SEMI_MATCHING, 1),
        (cycle(5), Mode.SEMI_MATCHING, 3),
    ],
)
def test_chromatic_number_examples(g, mode, want):
    assert chromatic_number(g, mode, 10) == want
    assert oracles.brute_chromatic(g, mode, 10) == want


def test_chromatic_number_cap():
    assert chromatic_number(K3, Mode.LOCAL, 3) is None


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7, min_n=1))
def test_chromatic_numbers_ordered(g):
    proper = chromatic_number(g, Mode.PROPER, 12)
    assert proper <= chromatic_number(g, Mode.SEMI_MATCHING, 12)
    assert proper <= chromatic_number(g, Mode.LOCAL, 12)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10, min_n=2))
def test_deleting_a_vertex_never_increases(g):
    h = remove_vertices(g, {0})
    for mode in Mode:
        assert chromatic_number(h, mode, 16) <= chromatic_number(g, mode, 16)


def test_repeated_runs_identical():
    g = c_graph(6, 2)
    runs = {find_coloring(g, SolverConfig(Mode.LOCAL, 7)) for _ in range(3)}
    assert len(runs) == 1


def test_stats_count_nodes():
    stats = SearchStats()
    find_coloring(K3, SolverConfig(Mode.LOCAL, 4), stats=stats)
    assert stats.nodes >= 3


# --- constrained variant -------------------------------------------------------


def test_solve_constrained_examples():
    inst = ConstrainedInstance(K2, (frozenset({0}), frozenset({1})))
    assert solve_constrained(inst, SolverConfig(Mode.LOCAL, 3)).colors == (1, 3)
    both = ConstrainedInstance(K2, (frozenset({0, 1}),))
    for mode in (Mode.LOCAL, Mode.SEMI_MATCHING):
        for k in (3, 4, 5):
            assert solve_constrained(both, SolverConfig(mode, k)) is None
    single = ConstrainedInstance(K1, (frozenset({0}),))
    assert solve_constrained(single, SolverConfig(Mode.LOCAL, 3)).colors == (1,)


def test_solve_constrained_rejects_small_k():
    inst = ConstrainedInstance(K1, (frozenset({0}),))
    with pytest.raises(ValueError):
        solve_constrained(inst, SolverConfig(Mode.LOCAL, 2))
    with pytest.raises(ValueError):
        solve_constrained_oracle(inst, SolverConfig(Mode.LOCAL, 2))


def test_constrained_instance_validation():
    with pytest.raises(ValueError):
        ConstrainedInstance(K2, (frozenset(),))
    with pytest.raises(ValueError):
        ConstrainedInstance(K2, (frozenset({2}),))


def _brute_constrained(inst, k, mode):
    for phi in oracles.all_valid(inst.g, k, mode):
        if all(len({phi[v] for v in grp}) == 1 and phi[min(grp)] in (1, k) for grp in inst.groups):
            return phi
    return None


def test_constrained_matches_enumeration_and_oracle():
    rng = random.Random(13)
    for _ in range(300):
        g = _random_graph(rng, 6)
        if g.n == 0:
            continue
        groups = tuple(
            frozenset(rng.sample(range(g.n), rng.randint(1, g.n))) for _ in range(rng.randint(0, 3))
        )
        inst = ConstrainedInstance(g, groups)
        k = rng.randint(3, 4)
        mode = rng.choice([Mode.LOCAL, Mode.SEMI_MATCHING])
        cfg = SolverConfig(mode, k)
        got = solve_constrained(inst, cfg)
        want = _brute_constrained(inst, k, mode)
        assert (got.colors if got else None) == want
        assert solve_constrained_oracle(inst, cfg) == (want is not None)


def test_group_format_round_trip():
    groups = [frozenset({0, 4}), frozenset({2})]
    assert parse_groups(format_groups(groups), 5) == groups
    with pytest.raises(GroupFormatError):
        parse_groups("g 1 9\n", 5)
    with pytest.raises(GroupFormatError):
        parse_groups("p groups 2\ng 1\n", 5)

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from localcolor import oracles
from localcolor.coloring import (
    ColoringError,
    KColoring,
    Mode,
    edges_within,
    find_violation,
    format_coloring,
    is_local,
    is_proper,
    is_semi_matching,
    parse_coloring,
    validate,
)
from localcolor.graph import Graph, c_graph, complete_graph

from conftest import cycle, graphs, path

K2, K3 = complete_graph(2), complete_graph(3)
P3 = path(3)  # a - b - c with b = 1 in the middle
C5 = cycle(5)


def col(k, *colors):
    return KColoring(k, colors)


def test_edges_within_examples():
    assert edges_within(K3, [0, 1, 2]) == 3
    assert edges_within(c_graph(2, 1), [0, 1]) == 0
    assert edges_within(P3, [0, 1, 2]) == 2
    with pytest.raises(ColoringError):
        edges_within(K3, [0])


def test_proper_examples():
    assert is_proper(K2, col(2, 1, 2))
    assert not is_proper(K2, col(2, 1, 1))
    assert is_proper(K3, col(3, 1, 2, 3))


def test_local_examples():
    assert is_local(K3, col(4, 1, 2, 4))
    assert not is_local(K3, col(3, 1, 2, 3))
    assert not is_local(P3, col(2, 1, 2, 1))


def test_semi_matching_examples():
    assert is_semi_matching(K3, col(3, 1, 2, 3))
    assert not is_semi_matching(P3, col(2, 1, 2, 1))


def test_semi_matching_five_cycle():
    # On the cycle 0-1-2-3-4-0, (1,2,3,1,2) puts two color-2 neighbors on vertex 0.
    bad = col(3, 1, 2, 3, 1, 2)
    assert not is_semi_matching(C5, bad)
    assert not oracles.naive_semi_matching(C5, bad.colors, 3)
    good = col(3, 1, 3, 1, 3, 2)
    assert is_semi_matching(C5, good)
    assert oracles.naive_semi_matching(C5, good.colors, 3)


def test_validate_dispatch():
    assert validate(K2, col(2, 1, 2), Mode.PROPER)
    assert validate(K3, col(4, 1, 2, 4), Mode.LOCAL)
    assert validate(K3, col(3, 1, 2, 3), Mode.SEMI_MATCHING)


def test_size_mismatch_rejected():
    with pytest.raises(ColoringError):
        is_proper(K3, col(2, 1, 2))


def test_color_range_enforced():
    with pytest.raises(ColoringError):
        col(2, 1, 3)
    with pytest.raises(ColoringError):
        KColoring(0, ())


def test_violation_diagnostics():
    v = find_violation(K3, col(3, 1, 2, 3), Mode.LOCAL)
    assert v.kind == "triple" and v.vertices == (0, 1, 2)
    v = find_violation(P3, col(2, 1, 2, 1), Mode.SEMI_MATCHING)
    assert v.kind == "classes" and v.vertices[0] == 1
    v = find_violation(K2, col(2, 1, 1), Mode.LOCAL)
    assert v.kind == "edge"


def test_mode_parse():
    assert Mode.parse("semi-matching") is Mode.SEMI_MATCHING
    assert Mode.parse("LOCAL") is Mode.LOCAL
    with pytest.raises(ValueError):
        Mode.parse("fancy")


@st.composite
def colored_graphs(draw, max_n=8, max_k=5):
    g = draw(graphs(max_n=max_n, min_n=1))
    k = draw(st.integers(1, max_k))
    colors = draw(st.lists(st.integers(1, k), min_size=g.n, max_size=g.n))
    return g, KColoring(k, tuple(colors))


@settings(max_examples=300)
@given(colored_graphs())
def test_fast_validators_match_definitions(case):
    g, c = case
    for mode in Mode:
        assert validate(g, c, mode) == oracles.naive_valid(g, c.colors, c.k, mode)


def test_validators_match_definitions_on_seeded_corpus():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 12)
        p = rng.random()
        g = Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
        k = rng.randint(1, 5)
        c = KColoring(k, tuple(rng.randint(1, k) for _ in range(n)))
        for mode in Mode:
            assert validate(g, c, mode) == oracles.naive_valid(g, c.colors, k, mode)


@given(colored_graphs())
def test_refinements_imply_proper(case):
    g, c = case
    if is_local(g, c) or is_semi_matching(g, c):
        assert is_proper(g, c)


@given(colored_graphs(), st.integers(0, 3))
def test_monotone_in_k(case, extra):
    g, c = case
    for mode in Mode:
        if validate(g, c, mode):
            assert validate(g, c.with_k(c.k + extra), mode)


@given(colored_graphs())
def test_reversal_preserves_all_modes(case):
    g, c = case
    for mode in Mode:
        assert validate(g, c, mode) == validate(g, c.reversed(), mode)


@given(colored_graphs(), st.integers(-4, 4))
def test_shift_preserves_local_and_proper(case, shift):
    g, c = case
    shifted = tuple(x + shift for x in c.colors)
    if min(shifted, default=1) < 1 or max(shifted, default=1) > c.k:
        return
    moved = KColoring(c.k, shifted)
    for mode in (Mode.LOCAL, Mode.PROPER):
        assert validate(g, c, mode) == validate(g, moved, mode)


@given(colored_graphs())
def test_coloring_format_round_trip(case):
    _, c = case
    assert parse_coloring(format_coloring(c), len(c)) == c


@pytest.mark.parametrize("text", ["v 1 1\n", "s 2\nv 1 1\nv 1 2\n", "s 2\nv 2 1\n", "s 2\nv 1 x\n"])
def test_coloring_parse_errors(text):
    with pytest.raises(ColoringError):
        parse_coloring(text, 2)

import itertools
import random

import pytest

from closures import (closure, closure_chain, format_set, hs_lattice, is_hereditary, is_saturated,
                      lattice_to_dot, noetherian_report, reach_witness, trace_report)
from conftest import FIXTURE_NAMES
from fixtures import clock_window, fixture, line_window, random_graph
from graph_core import reaches
from leavitt import CapExceededError, PreconditionError, UnknownSymbolError


def _subsets(vertices):
    for r in range(len(vertices) + 1):
        yield from (frozenset(c) for c in itertools.combinations(vertices, r))


def test_predicates_examples(g1, g6):
    assert not is_hereditary(g1, {"v"})
    assert is_hereditary(g1, {"w"})
    assert is_hereditary(g1, {"v", "w"})
    assert not is_saturated(g6, {"v"})
    assert is_saturated(g6, set())
    assert is_saturated(g1, {"w"})


def test_predicates_reject_unknown_vertex(g1):
    with pytest.raises(UnknownSymbolError):
        is_hereditary(g1, {"x"})


def test_closure_example_g1(g1):
    assert closure(g1, {"v"}).closure == {"v", "w"}
    assert closure(g1, {"w"}).closure == {"w"}
    assert closure(g1, set()).closure == frozenset()


def test_closure_trace_ends_with_repeat(g6):
    trace = closure(g6, {"v"})
    assert trace.steps == (frozenset({"v"}), frozenset({"u", "v"}), frozenset({"u", "v"}))
    assert trace.first_step("u") == 1
    assert trace_report(trace).splitlines() == [
        "Lambda_0: {v}",
        "Lambda_1: {u, v}",
        "Lambda_2: {u, v}",
        "closure: {u, v}",
    ]


@pytest.mark.parametrize("n", [3, 5, 8])
def test_line_window_lambda_pattern(n):
    graph = line_window(n)
    trace = closure(graph, {"v0"})
    for k, step in enumerate(trace.steps):
        expected = {f"vm{i}" for i in range(1, min(k, n) + 1)} | {f"v{i}" for i in range(n + 1)}
        assert step == expected
    assert trace.closure == set(graph.vertices)


@pytest.mark.parametrize("n", [1, 2, 5, 10, 20])
def test_clock_window_chain_grows(n):
    graph = clock_window(n)
    chain = closure_chain(graph, [f"w{i}" for i in range(1, n + 1)])
    assert [len(c) for c in chain] == list(range(2, n + 2))
    assert all(a < b for a, b in zip(chain[:-1], chain[1:]))


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_closure_is_least_hs_superset(name):
    graph = fixture(name)
    members = hs_lattice(graph).members
    for X in _subsets(graph.vertices):
        c = closure(graph, X).closure
        assert X <= c
        assert is_hereditary(graph, c) and is_saturated(graph, c)
        assert all(c <= H for H in members if X <= H)
        assert closure(graph, c).closure == c


def test_closure_is_monotone():
    rng = random.Random(7)
    for _ in range(30):
        graph = random_graph(rng, max_vertices=6, max_edges=10)
        closed = {X: closure(graph, X).closure for X in _subsets(graph.vertices)}
        for X, Y in itertools.product(closed, repeat=2):
            if X <= Y:
                assert closed[X] <= closed[Y]
        assert len(closure(graph, set(graph.vertices[:1])).steps) <= len(graph.vertices) + 1


def test_hs_lattice_examples(g1, g4, g6):
    assert hs_lattice(g1).members == (frozenset(), frozenset({"w"}), frozenset({"v", "w"}))
    assert hs_lattice(g1).chain_length == 3
    assert hs_lattice(g4).members == (frozenset(), frozenset({"v"}))
    assert hs_lattice(g6).members == (frozenset(), frozenset({"u", "v"}))


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_hs_lattice_matches_brute_force(name):
    graph = fixture(name)
    lattice = hs_lattice(graph, workers=2)
    expected = {X for X in _subsets(graph.vertices) if is_hereditary(graph, X) and is_saturated(graph, X)}
    assert set(lattice.members) == expected
    assert frozenset() in expected and frozenset(graph.vertices) in expected
    for a, b in itertools.product(lattice.members, repeat=2):
        assert a & b in expected


def test_hs_lattice_is_deterministic_across_chunking(monkeypatch):
    graph = clock_window(6)
    baseline = hs_lattice(graph, workers=1)
    monkeypatch.setattr("config.LATTICE_CHUNK", 8)
    assert hs_lattice(graph, workers=4) == baseline
    assert baseline.size == 2 ** 6 + 1
    assert baseline.chain_length == 6 + 2


def test_hs_lattice_cap(g1):
    with pytest.raises(CapExceededError):
        hs_lattice(g1, cap=1)


def test_lattice_to_dot(g1):
    dot = lattice_to_dot(hs_lattice(g1))
    assert '  "{}" -> "{w}";' in dot
    assert '  "{w}" -> "{v, w}";' in dot
    assert '"{}" -> "{v, w}"' not in dot


def test_noetherian_report_g1(g1):
    report = noetherian_report(g1)
    assert report.noetherian
    assert report.summary() == "Noetherian: yes; lattice size 3; longest chain 3"
    assert [format_set(m) for m in report.longest_chain] == ["{}", "{w}", "{v, w}"]


def test_noetherian_report_growth_on_clock_window():
    n = 5
    report = noetherian_report(clock_window(n), sequence=[f"w{i}" for i in range(1, n + 1)])
    assert report.noetherian
    assert [len(g) for g in report.growth] == list(range(2, n + 2))
    assert len(report.longest_chain) == n + 2


def test_noetherian_on_fixtures_and_random_graphs():
    for name in FIXTURE_NAMES:
        assert noetherian_report(fixture(name)).noetherian
    rng = random.Random(2024)
    for _ in range(100):
        assert noetherian_report(random_graph(rng, max_vertices=8, max_edges=16)).noetherian


def test_reach_witness_examples(g1, g8):
    assert reach_witness(g1, {"v"}, "w") == "v"
    assert reach_witness(g1, {"v"}, "v") == "v"
    assert reach_witness(g8, {"u"}, "v") == "u"


def test_reach_witness_preconditions(g1, g6):
    with pytest.raises(PreconditionError):
        reach_witness(g1, {"w"}, "v")
    with pytest.raises(PreconditionError):
        reach_witness(g6, {"v"}, "u")


def test_reach_witness_random_graphs():
    rng = random.Random(11)
    for _ in range(40):
        graph = random_graph(rng, max_vertices=6, max_edges=12)
        S = set(rng.sample(graph.vertices, 1))
        for v in closure(graph, S).closure:
            try:
                u = reach_witness(graph, S, v)
            except PreconditionError:
                continue
            assert u in S and reaches(graph, u, v)

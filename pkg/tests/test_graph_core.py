import itertools

import pytest

import config
from conftest import FIXTURE_NAMES
from fixtures import fixture, line_window
from graph_core import (connecting_path, cp_factorize, csp_enumerate, dump_graph, enumerate_cycles,
                        exits, graph_to_dot, has_cycle_at, is_acyclic, load_graph,
                        longest_path_length, reachability_matrix, reaches)
from leavitt import GraphFormatError, PathError, PreconditionError, UnknownSymbolError
from lpa_algebra import LeavittAlgebra


def _edges(paths):
    return [p.edges for p in paths]


def test_load_shipped_g1():
    graph = load_graph((config.FIXTURE_DIR / "g1.json").read_text(encoding="utf-8"))
    assert graph.vertices == ("v", "w")
    assert len(graph.edges) == 3
    assert graph == fixture("g1")


def test_load_empty_graph():
    graph = load_graph('{"vertices": [], "edges": []}')
    assert graph.vertices == ()
    assert graph.edges == ()


def test_load_dangling_endpoint_has_location():
    text = '{"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "x"}]}'
    with pytest.raises(GraphFormatError) as err:
        load_graph(text)
    assert err.value.location == "edges[0].dst"
    assert "undeclared vertex 'x'" in str(err.value)


@pytest.mark.parametrize("text, location", [
    ('{"vertices": ["v", "v"], "edges": []}', "vertices[1]"),
    ('{"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v"},'
     ' {"id": "e", "src": "v", "dst": "v"}]}', "edges[1].id"),
    ('{"vertices": ["v"], "edges": [{"id": "v", "src": "v", "dst": "v"}]}', "edges[0].id"),
    ('{"vertices": ["v", "v-1"], "edges": []}', "vertices[1]"),
    ('{"vertices": ["v"], "edges": [{"id": "1", "src": "v", "dst": "v"}]}', "edges[0].id"),
    ('{"vertices": ["v"], "edges": [{"id": "e", "src": "v"}]}', "edges[0]"),
    ('{"edges": []}', "vertices"),
    ('[1, 2]', "$"),
])
def test_load_rejects_bad_documents(text, location):
    with pytest.raises(GraphFormatError) as err:
        load_graph(text)
    assert err.value.location == location


def test_load_malformed_syntax_reports_line():
    with pytest.raises(GraphFormatError) as err:
        load_graph('{"vertices": ["v",]}')
    assert err.value.location.startswith("line 1 column")


def test_dump_graph_reloads(g7):
    assert load_graph(dump_graph(g7)) == g7


def test_reaches_g1(g1):
    assert reaches(g1, "v", "w")
    assert not reaches(g1, "w", "v")
    assert reaches(g1, "w", "w")


def test_reaches_unknown_vertex(g1):
    with pytest.raises(UnknownSymbolError):
        reaches(g1, "v", "x")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_reaches_is_reflexive_and_transitive(name):
    graph = fixture(name)
    vs = graph.vertices
    for u in vs:
        assert reaches(graph, u, u)
    for a, b, c in itertools.product(vs, repeat=3):
        if reaches(graph, a, b) and reaches(graph, b, c):
            assert reaches(graph, a, c)


def test_reachability_matrix_is_read_only(g1):
    reach = reachability_matrix(g1)
    with pytest.raises(ValueError):
        reach[0, 0] = False


def test_enumerate_cycles_examples(g1, g6, g8):
    assert [(c.edges, c.source) for c in enumerate_cycles(g1)] == [(("e1",), "v"), (("e3",), "w")]
    assert enumerate_cycles(g6) == []
    assert [(c.edges, c.source) for c in enumerate_cycles(g8)] == [(("a", "b"), "u"), (("b", "a"), "v")]


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_cycles_are_vertex_simple(name):
    graph = fixture(name)
    cycles = enumerate_cycles(graph)
    for c in cycles:
        assert c.is_closed
        assert len(set(c.vertices[:-1])) == len(c)
    bases = {c.source for c in cycles}
    assert bases == {v for v in graph.vertices if has_cycle_at(graph, v)}


def test_csp_enumerate_examples(g1, g6, g7):
    assert _edges(csp_enumerate(g1, "v", 3)) == [("e1",)]
    assert _edges(csp_enumerate(g7, "v", 3)) == [("a", "b"), ("a", "l", "b")]
    assert csp_enumerate(g6, "u", 10) == []
    assert csp_enumerate(g7, "v", 0) == []


def test_csp_enumerate_unknown_vertex(g1):
    with pytest.raises(UnknownSymbolError):
        csp_enumerate(g1, "x", 3)


@pytest.mark.parametrize("graph, edges, factors", [
    ("g1", ["e1", "e1", "e1"], [("e1",), ("e1",), ("e1",)]),
    ("g3", ["f", "g", "f"], [("f",), ("g",), ("f",)]),
    ("g8", ["a", "b", "a", "b"], [("a", "b"), ("a", "b")]),
])
def test_cp_factorize_examples(graph, edges, factors):
    graph = fixture(graph)
    assert _edges(cp_factorize(graph, graph.path(edges))) == factors


def test_cp_factorize_rejects_open_path(g1):
    with pytest.raises(PathError):
        cp_factorize(g1, g1.path(["e1", "e2"]))


def _csp_splittings(edges, csps):
    """Every way to cut an edge sequence into consecutive closed simple paths."""
    if not edges:
        return [()]
    found = []
    for k in range(1, len(edges) + 1):
        if edges[:k] in csps:
            found += [(edges[:k],) + rest for rest in _csp_splittings(edges[k:], csps)]
    return found


@pytest.mark.parametrize("name", ["g1", "g3", "g7", "g8"])
def test_cp_factorize_round_trips_and_is_unique(name):
    graph = fixture(name)
    for mu in LeavittAlgebra(graph).paths(6):
        if not mu.is_closed:
            continue
        factors = cp_factorize(graph, mu)
        joined = factors[0]
        for f in factors[1:]:
            joined = joined + f
        assert joined == mu
        csps = {p.edges for p in csp_enumerate(graph, mu.source, len(mu))}
        assert _csp_splittings(mu.edges, csps) == [tuple(_edges(factors))]


@pytest.mark.parametrize("name", ["g1", "g3", "g7", "g8"])
def test_cp_factorize_on_every_rotation(name):
    graph = fixture(name)
    for mu in LeavittAlgebra(graph).paths(6):
        if not mu.is_closed:
            continue
        for r in range(len(mu)):
            rotated = graph.path(mu.edges[r:] + mu.edges[:r])
            assert rotated.is_closed
            factors = cp_factorize(graph, rotated)
            assert sum(_edges(factors), ()) == rotated.edges
            csps = {p.edges for p in csp_enumerate(graph, rotated.source, len(rotated))}
            assert all(f.edges in csps for f in factors)


def test_exits(g1, g7):
    assert exits(g1, g1.path(["e1"])) == ["e2"]
    assert exits(g7, g7.path(["a", "b"])) == ["l"]
    assert exits(g1, g1.path(["e3"])) == []


def test_connecting_path(g7):
    assert connecting_path(g7, "v", "v").is_vertex
    assert connecting_path(g7, "w", "v").edges == ("b",)
    with pytest.raises(PreconditionError):
        connecting_path(fixture("g6"), "v", "u")


def test_acyclicity_and_longest_path(g6, g8):
    assert is_acyclic(g6)
    assert longest_path_length(g6) == 1
    assert longest_path_length(line_window(3)) == 6
    assert not is_acyclic(g8)
    with pytest.raises(PreconditionError):
        longest_path_length(g8)


def test_graph_to_dot(g1):
    dot = graph_to_dot(g1)
    assert dot.startswith('digraph "E" {')
    assert '  "v" -> "w" [label="e2"];' in dot
    assert dot.count("->") == 3

"""
Graph loading, reachability and cycle combinatorics for finite graphs.

Reachability is a boolean numpy matrix (reflexive-transitive closure of the
adjacency relation), cached per graph. Cycle enumeration runs networkx's
simple_cycles on the collapsed digraph and expands parallel edges.
"""
import itertools
import json
import logging
from functools import lru_cache

import networkx as nx
import numpy as np

from leavitt import Graph, GraphFormatError, Path, PathError, PreconditionError

logger = logging.getLogger(__name__)


def load_graph(text):
    """
    Parse a JSON graph document:
        {"vertices": ["v", "w"], "edges": [{"id": "e", "src": "v", "dst": "w"}]}
    Errors carry the location of the offending element.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(e.msg, f"line {e.lineno} column {e.colno}")
    if not isinstance(doc, dict):
        raise GraphFormatError("expected a JSON object", "$")
    vertices = doc.get("vertices")
    edges = doc.get("edges", [])
    if not isinstance(vertices, list):
        raise GraphFormatError("expected a list of vertex ids", "vertices")
    if not isinstance(edges, list):
        raise GraphFormatError("expected a list of edges", "edges")
    records = []
    for i, item in enumerate(edges):
        if not isinstance(item, dict):
            raise GraphFormatError("expected an object with id, src, dst", f"edges[{i}]")
        for key in ("id", "src", "dst"):
            if key not in item:
                raise GraphFormatError(f"missing field {key!r}", f"edges[{i}]")
        records.append((item["id"], item["src"], item["dst"]))
    return Graph(vertices, records)


def dump_graph(graph):
    doc = {
        "vertices": list(graph.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in graph.edges],
    }
    return json.dumps(doc, indent=2)


@lru_cache(maxsize=64)
def reachability_matrix(graph):
    """R[i, j] is True when vertices[i] >= vertices[j] (a path i -> j exists)."""
    n = len(graph.vertices)
    idx = graph.index
    reach = np.eye(n, dtype=bool)
    for e in graph.edges:
        reach[idx[e.src], idx[e.dst]] = True
    # Repeated squaring converges in O(log n) rounds
    while True:
        counts = reach.astype(np.int64) @ reach.astype(np.int64)
        nxt = reach | (counts > 0)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    reach.flags.writeable = False
    return reach


def reaches(graph, u, v):
    """u >= v: some path (possibly of length 0) runs from u to v."""
    graph.check_vertex(u)
    graph.check_vertex(v)
    return bool(reachability_matrix(graph)[graph.index[u], graph.index[v]])


@lru_cache(maxsize=64)
def to_networkx(graph):
    """MultiDiGraph view with edge keys equal to edge ids, built in a fixed order."""
    g = nx.MultiDiGraph()
    g.add_nodes_from(graph.vertices)
    for e in sorted(graph.edges):
        g.add_edge(e.src, e.dst, key=e.id)
    return g


def _collapsed(graph):
    return nx.DiGraph(to_networkx(graph))


def _edges_between(graph, u, w):
    return [e.id for e in graph.out_edges(u) if e.dst == w]


def enumerate_cycles(graph):
    """
    All cycles (closed paths with no repeated source vertex), every rotation
    counted separately, sorted by their edge-id sequence.
    """
    found = set()
    for nodes in nx.simple_cycles(_collapsed(graph)):
        hops = [_edges_between(graph, nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]
        for choice in itertools.product(*hops):
            for r in range(len(choice)):
                found.add(choice[r:] + choice[:r])
    cycles = [graph.path(edges) for edges in sorted(found)]
    logger.debug(f"Enumerated {len(cycles)} cycles")
    return cycles


def csp_enumerate(graph, v, max_len):
    """
    Closed simple paths based at v of length <= max_len: closed paths at v
    that do not pass through v before their last edge. Sorted by (length, ids).
    """
    graph.check_vertex(v)
    if max_len < 1:
        return []
    reach = reachability_matrix(graph)
    target = graph.index[v]
    results = []
    stack = [(v, ())]
    while stack:
        current, edges = stack.pop()
        for e in graph.out_edges(current):
            extended = edges + (e.id,)
            if e.dst == v:
                results.append(extended)
            elif len(extended) < max_len and reach[graph.index[e.dst], target]:
                stack.append((e.dst, extended))
    results.sort(key=lambda ids: (len(ids), ids))
    return [graph.path(ids) for ids in results]


def cp_factorize(graph, path):
    """Unique factorization of a closed path at v into closed simple paths at v."""
    if not path.is_closed:
        raise PathError(f"{path} is not a closed path")
    base = path.source
    factors = []
    start = 0
    for i in range(1, len(path) + 1):
        if path.vertices[i] == base:
            factors.append(path.sub(start, i))
            start = i
    return factors


def exits(graph, path):
    """Edges e with s(e) = s(e_i) for some edge e_i of the path and e != e_i."""
    found = set()
    for i, eid in enumerate(path.edges):
        found.update(e.id for e in graph.out_edges(path.vertices[i]) if e.id != eid)
    return sorted(found)


def connecting_path(graph, u, w):
    """A shortest path u -> w, least edge id between consecutive vertices."""
    if not reaches(graph, u, w):
        raise PreconditionError(f"{u} does not reach {w}")
    if u == w:
        return Path.trivial(u)
    nodes = nx.shortest_path(_collapsed(graph), u, w)
    edges = [_edges_between(graph, a, b)[0] for a, b in zip(nodes[:-1], nodes[1:])]
    return graph.path(edges)


def has_cycle_at(graph, v):
    reach = reachability_matrix(graph)
    return any(reach[graph.index[e.dst], graph.index[v]] for e in graph.out_edges(v))


def is_acyclic(graph):
    return nx.is_directed_acyclic_graph(_collapsed(graph))


def longest_path_length(graph):
    if not is_acyclic(graph):
        raise PreconditionError("longest path length is only defined for acyclic graphs")
    if not graph.edges:
        return 0
    return nx.dag_longest_path_length(_collapsed(graph))


def _quote(name):
    return '"' + str(name).replace('"', '\\"') + '"'


def graph_to_dot(graph, name="E"):
    lines = [f"digraph {_quote(name)} {{"]
    for v in graph.vertices:
        lines.append(f"  {_quote(v)};")
    for e in sorted(graph.edges):
        lines.append(f"  {_quote(e.src)} -> {_quote(e.dst)} [label={_quote(e.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

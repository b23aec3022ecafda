"""
Named example graphs and parametric graph families.

The small fixtures ship as JSON documents under config.FIXTURE_DIR and are
also built in code (scripts/export_fixtures.py regenerates the files).
"""
import logging
from pathlib import Path

import config
from graph_core import load_graph
from leavitt import Graph, GraphFormatError, UnknownSymbolError

logger = logging.getLogger(__name__)

FIXTURES = {
    # v with a loop, an edge to w, and w with its own loop
    "g1": (["v", "w"], [("e1", "v", "v"), ("e2", "v", "w"), ("e3", "w", "w")]),
    "g3": (["v"], [("f", "v", "v"), ("g", "v", "v")]),
    "g4": (["v"], [("g", "v", "v")]),
    "g6": (["u", "v"], [("e", "u", "v")]),
    "g7": (["v", "w"], [("a", "v", "w"), ("l", "w", "w"), ("b", "w", "v")]),
    "g8": (["u", "v"], [("a", "u", "v"), ("b", "v", "u")]),
}


def fixture(name):
    try:
        vertices, edges = FIXTURES[name.lower()]
    except KeyError:
        raise UnknownSymbolError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    return Graph(vertices, edges)


def _signed(prefix, i):
    return f"{prefix}m{-i}" if i < 0 else f"{prefix}{i}"


def line_window(n):
    """
    Window [-n, n] of the two-sided line: vertices v_i and edges
    e_i: v_{i-1} -> v_i. Negative indices are written with an 'm'
    (vm2, em1, ...).
    """
    if n < 1:
        raise ValueError(f"line window needs n >= 1, got {n}")
    vertices = [_signed("v", i) for i in range(-n, n + 1)]
    edges = [(_signed("e", i), _signed("v", i - 1), _signed("v", i)) for i in range(-n + 1, n + 1)]
    return Graph(vertices, edges)


def clock_window(n):
    """Sink v fed by w_1..w_n; each w_i has an edge e_i to v and a loop f_i."""
    if n < 1:
        raise ValueError(f"clock window needs n >= 1, got {n}")
    vertices = ["v"] + [f"w{i}" for i in range(1, n + 1)]
    edges = []
    for i in range(1, n + 1):
        edges.append((f"e{i}", f"w{i}", "v"))
        edges.append((f"f{i}", f"w{i}", f"w{i}"))
    return Graph(vertices, edges)


def random_graph(rng, max_vertices=8, max_edges=16):
    """Random finite graph from a seeded random.Random; loops and parallel edges allowed."""
    n = rng.randint(1, max_vertices)
    m = rng.randint(0, max_edges)
    vertices = [f"v{i}" for i in range(n)]
    edges = [(f"e{j}", rng.choice(vertices), rng.choice(vertices)) for j in range(m)]
    return Graph(vertices, edges)


def _window(spec):
    kind, _, size = spec.partition(":")
    try:
        n = int(size)
    except ValueError:
        raise UnknownSymbolError(f"bad window size in {spec!r}")
    if n < 1:
        raise UnknownSymbolError(f"window size must be positive in {spec!r}")
    return line_window(n) if kind == "line" else clock_window(n)


def _read_graph_file(path):
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"invalid UTF-8 in {path.name}", f"byte {e.start}")
    except OSError as e:
        raise GraphFormatError(f"cannot read file: {e.strerror}", str(path))


def resolve(spec):
    """
    Graph from a CLI --graph value: a JSON file path, a fixture name
    (g1, g3, g4, g6, g7, g8), or line:N / clock:N.
    """
    if spec.startswith(("line:", "clock:")):
        return _window(spec)
    path = Path(spec)
    if path.is_file():
        logger.info(f"Loading graph from {path}")
        return load_graph(_read_graph_file(path))
    if spec.lower() in FIXTURES:
        shipped = config.FIXTURE_DIR / f"{spec.lower()}.json"
        if shipped.is_file():
            return load_graph(_read_graph_file(shipped))
        return fixture(spec)
    raise UnknownSymbolError(f"no graph file or fixture named {spec!r}")

"""
Hereditary and saturated vertex sets: the Lambda_n closure iteration, the
lattice of hereditary saturated subsets, and the a.c.c. (Noetherian) report.

The closure step runs vectorized over the adjacency matrix; the lattice scan
evaluates subset bitmasks in numpy chunks on a thread pool and concatenates
the chunks in order, so results do not depend on scheduling.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

import config
from graph_core import has_cycle_at, reachability_matrix, reaches
from leavitt import CapExceededError, PreconditionError

logger = logging.getLogger(__name__)


def format_set(vertices):
    return "{" + ", ".join(sorted(vertices)) + "}"


def _vertex_set(graph, vertices):
    return frozenset(graph.check_vertex(v) for v in vertices)


@lru_cache(maxsize=64)
def _adjacency(graph):
    n = len(graph.vertices)
    adj = np.zeros((n, n), dtype=bool)
    for e in graph.edges:
        adj[graph.index[e.src], graph.index[e.dst]] = True
    adj.flags.writeable = False
    return adj


def _indicator(graph, vertices):
    mask = np.zeros(len(graph.vertices), dtype=bool)
    for v in vertices:
        mask[graph.index[v]] = True
    return mask


def _members(graph, mask):
    return frozenset(v for v, inside in zip(graph.vertices, mask) if inside)


def is_hereditary(graph, H):
    H = _vertex_set(graph, H)
    reach = reachability_matrix(graph)
    inside = _indicator(graph, H)
    # every row of a member may only reach members
    return bool(np.all(~reach[inside] | inside[None, :]))


def is_saturated(graph, H):
    H = _vertex_set(graph, H)
    adj = _adjacency(graph)
    inside = _indicator(graph, H)
    has_out = adj.any(axis=1)
    lands_inside = np.all(~adj | inside[None, :], axis=1)
    return not bool(np.any(has_out & lands_inside & ~inside))


@dataclass(frozen=True)
class ClosureTrace:
    """Lambda_0(X) <= Lambda_1(X) <= ... ending with two equal entries."""
    seeds: frozenset
    steps: tuple

    @property
    def closure(self):
        return self.steps[-1]

    def first_step(self, v):
        """Least n with v in Lambda_n(X)."""
        for n, step in enumerate(self.steps):
            if v in step:
                return n
        raise PreconditionError(f"{v} is not in the closure of {format_set(self.seeds)}")

    def to_dict(self):
        return {
            "seeds": sorted(self.seeds),
            "steps": [sorted(s) for s in self.steps],
            "closure": sorted(self.closure),
        }


def closure(graph, X):
    """Hereditary saturated closure of X as the full Lambda_n trace."""
    X = _vertex_set(graph, X)
    reach = reachability_matrix(graph)
    adj = _adjacency(graph)
    has_out = adj.any(axis=1)
    seeds = _indicator(graph, X)
    current = reach[seeds].any(axis=0) if seeds.any() else seeds
    steps = [_members(graph, current)]
    while True:
        added = np.all(~adj | current[None, :], axis=1) & has_out
        nxt = current | added
        steps.append(_members(graph, nxt))
        if np.array_equal(nxt, current):
            break
        current = nxt
    logger.debug(f"Closure of {format_set(X)} stabilized after {len(steps) - 1} steps")
    return ClosureTrace(X, tuple(steps))


def closure_chain(graph, sequence):
    """Closures of the growing prefixes S_1 <= S_2 <= ... of `sequence`."""
    return [closure(graph, sequence[:i]).closure for i in range(1, len(sequence) + 1)]


def trace_report(trace):
    lines = [f"Lambda_{n}: {format_set(step)}" for n, step in enumerate(trace.steps)]
    lines.append(f"closure: {format_set(trace.closure)}")
    return "\n".join(lines)


def reach_witness(graph, S, v):
    """
    A vertex u in S with u >= v, found by walking the Lambda induction back
    down: a saturation step at the current vertex is undone along an edge
    that stays on a cycle through it, until the Lambda_0 layer is reached.
    """
    trace = closure(graph, S)
    graph.check_vertex(v)
    if v not in trace.closure:
        raise PreconditionError(f"{v} is not in the closure of {format_set(trace.seeds)}")
    if not has_cycle_at(graph, v):
        raise PreconditionError(f"no cycle is based at {v}")
    current = v
    step = trace.first_step(current)
    while step > 0:
        back = sorted(e.dst for e in graph.out_edges(current) if reaches(graph, e.dst, current))
        current = back[0]
        step = trace.first_step(current)
        logger.debug(f"reach_witness: moved to {current} (Lambda_{step})")
    for u in sorted(trace.seeds):
        if reaches(graph, u, current):
            return u
    raise RuntimeError(f"Lambda_0 vertex {current} has no seed above it")


class _MaskOps:
    """Bitmask form of the hereditary/saturated predicates and the closure."""

    def __init__(self, graph):
        self.graph = graph
        self.n = len(graph.vertices)
        reach = reachability_matrix(graph)
        adj = _adjacency(graph)
        weights = 1 << np.arange(self.n, dtype=np.int64)
        self.desc = [int(weights[reach[i]].sum()) for i in range(self.n)]
        self.outs = [int(weights[adj[i]].sum()) for i in range(self.n)]
        self._closure = {}

    def scan(self, lo, hi):
        masks = np.arange(lo, hi, dtype=np.int64)
        ok = np.ones(len(masks), dtype=bool)
        for i in range(self.n):
            has = (masks & (1 << i)) != 0
            ok &= ~has | ((masks & self.desc[i]) == self.desc[i])
            if self.outs[i]:
                ok &= has | ((masks & self.outs[i]) != self.outs[i])
        return masks[ok]

    def closure(self, mask):
        if mask in self._closure:
            return self._closure[mask]
        result = 0
        for i in range(self.n):
            if mask >> i & 1:
                result |= self.desc[i]
        changed = True
        while changed:
            changed = False
            for i in range(self.n):
                if not result >> i & 1 and self.outs[i] and self.outs[i] & result == self.outs[i]:
                    result |= 1 << i
                    changed = True
        self._closure[mask] = result
        return result

    def successors(self, mask):
        return [self.closure(mask | (1 << i)) for i in self._order if not mask >> i & 1]

    @property
    def _order(self):
        return sorted(range(self.n), key=lambda i: self.graph.vertices[i])

    def to_set(self, mask):
        return frozenset(self.graph.vertices[i] for i in range(self.n) if mask >> i & 1)


@dataclass(frozen=True)
class HSLattice:
    """All hereditary saturated subsets ordered by inclusion."""
    members: tuple
    longest_chain: tuple
    covers: tuple = field(default=())

    @property
    def size(self):
        return len(self.members)

    @property
    def chain_length(self):
        return len(self.longest_chain)

    def to_dict(self):
        return {
            "members": [sorted(m) for m in self.members],
            "longest_chain": [sorted(m) for m in self.longest_chain],
            "covers": [[sorted(a), sorted(b)] for a, b in self.covers],
        }


def _set_key(s):
    return (len(s), sorted(s))


def hs_lattice(graph, cap=None, workers=None):
    cap = config.LATTICE_VERTEX_CAP if cap is None else cap
    workers = config.LATTICE_WORKERS if workers is None else workers
    n = len(graph.vertices)
    if n > cap:
        raise CapExceededError(f"hs_lattice enumerates 2^{n} subsets; vertex cap is {cap}")
    ops = _MaskOps(graph)
    total = 1 << n
    starts = range(0, total, config.LATTICE_CHUNK)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        chunks = list(executor.map(lambda lo: ops.scan(lo, min(lo + config.LATTICE_CHUNK, total)), starts))
    masks = [int(m) for chunk in chunks for m in chunk]
    logger.debug(f"hs_lattice: {len(masks)} of {total} subsets are hereditary and saturated")

    # Longest chain: every cover of H is closure(H + {x}) for some x outside H
    best = {}

    def longest(mask):
        if mask not in best:
            tail = ()
            for nxt in ops.successors(mask):
                candidate = longest(nxt)
                if len(candidate) > len(tail):
                    tail = candidate
            best[mask] = (mask,) + tail
        return best[mask]

    chain = tuple(ops.to_set(m) for m in longest(0))

    covers = []
    for mask in masks:
        above = set(ops.successors(mask))
        for upper in above:
            if not any(other != upper and other & upper == other for other in above):
                covers.append((ops.to_set(mask), ops.to_set(upper)))
    members = tuple(sorted((ops.to_set(m) for m in masks), key=_set_key))
    covers.sort(key=lambda pair: (_set_key(pair[0]), _set_key(pair[1])))
    return HSLattice(members, chain, tuple(covers))


def lattice_to_dot(lattice, name="hs_lattice"):
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for m in lattice.members:
        lines.append(f'  "{format_set(m)}";')
    for lower, upper in lattice.covers:
        lines.append(f'  "{format_set(lower)}" -> "{format_set(upper)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NoetherianReport:
    noetherian: bool
    lattice_size: int
    longest_chain: tuple
    growth: tuple = ()

    def summary(self):
        verdict = "yes" if self.noetherian else "no"
        return f"Noetherian: {verdict}; lattice size {self.lattice_size}; longest chain {len(self.longest_chain)}"

    def to_dict(self):
        return {
            "noetherian": self.noetherian,
            "lattice_size": self.lattice_size,
            "longest_chain": [sorted(m) for m in self.longest_chain],
            "growth": [sorted(m) for m in self.growth],
        }


def noetherian_report(graph, sequence=None, cap=None):
    """
    A.c.c. analysis for a finite graph. The lattice of hereditary saturated
    sets is finite, so every ascending chain stabilizes; the verdict also
    checks the witness chain against the |E0| + 1 bound on chains of subsets.
    When `sequence` is given, the closures of its prefixes are reported as
    `growth`.
    """
    lattice = hs_lattice(graph, cap=cap)
    chain = lattice.longest_chain
    ascending = all(a < b for a, b in zip(chain[:-1], chain[1:]))
    verdict = ascending and len(chain) <= len(graph.vertices) + 1
    growth = tuple(closure_chain(graph, list(sequence))) if sequence else ()
    report = NoetherianReport(verdict, lattice.size, chain, growth)
    logger.info(report.summary())
    return report

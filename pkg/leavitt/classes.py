"""
Core value types for Leavitt path algebra computations.

Provides Graph (finite row-finite directed graph with special-edge assignment),
Edge, Path (real path with its vertex sequence), Monomial (normal-form word
mu nu*), CyclePolynomial (generator p(g) at a base vertex) and Field (exact
coefficient domain). Used by graph_core, closures, lpa_algebra and ideals.
"""
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from sympy import GF, QQ, isprime

# Ids the expression grammar can name: no operators, no leading digit
SYMBOL_PATTERN = r"[A-Za-z_][A-Za-z0-9_.]*"


class LeavittError(ValueError):
    """Base class for every input or precondition error raised by the toolkit."""


class GraphFormatError(LeavittError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnknownSymbolError(LeavittError):
    pass


class PathError(LeavittError):
    pass


class ExpressionSyntaxError(LeavittError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class PreconditionError(LeavittError):
    pass


class CapExceededError(LeavittError):
    pass


class GcdNormalizationError(LeavittError):
    pass


class FieldError(LeavittError):
    pass


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """
    Real path e1...en together with the vertices it visits.

    `vertices` has one more entry than `edges`; a length-0 path is a vertex.
    Ordering helpers sort by (length, edge ids, source) so listings are stable.
    """
    vertices: tuple
    edges: tuple = ()

    @classmethod
    def trivial(cls, v):
        return cls((v,), ())

    @property
    def source(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def is_vertex(self):
        return not self.edges

    @property
    def is_closed(self):
        return bool(self.edges) and self.source == self.end

    def __len__(self):
        return len(self.edges)

    def __add__(self, other):
        if self.end != other.source:
            raise PathError(f"cannot concatenate {self} with {other}: {self.end} != {other.source}")
        return Path(self.vertices + other.vertices[1:], self.edges + other.edges)

    def __mul__(self, times):
        if times < 0 or (times == 0 and not self.is_closed and not self.is_vertex):
            raise PathError(f"cannot raise {self} to the power {times}")
        result = Path.trivial(self.source)
        for _ in range(times):
            result = result + self
        return result

    def sub(self, start, stop=None):
        stop = len(self.edges) if stop is None else stop
        return Path(self.vertices[start:stop + 1], self.edges[start:stop])

    def startswith(self, other):
        return self.source == other.source and self.edges[:len(other.edges)] == other.edges

    def key(self):
        return (len(self.edges), self.edges, self.source)

    def __str__(self):
        return " ".join(self.edges) if self.edges else self.source


@dataclass(frozen=True)
class Monomial:
    """Normal-form word mu nu* with r(mu) = r(nu); a vertex when both are trivial."""
    mu: Path
    nu: Path

    def __post_init__(self):
        if self.mu.end != self.nu.end:
            raise PathError(f"r({self.mu}) != r({self.nu})")

    @classmethod
    def vertex(cls, v):
        p = Path.trivial(v)
        return cls(p, p)

    @classmethod
    def real(cls, path):
        return cls(path, Path.trivial(path.end))

    @classmethod
    def ghost(cls, path):
        """The ghost path (path)*."""
        return cls(Path.trivial(path.end), path)

    @property
    def source(self):
        return self.mu.source

    @property
    def range(self):
        return self.nu.source

    @property
    def length(self):
        return len(self.mu) + len(self.nu)

    @property
    def is_vertex(self):
        return self.mu.is_vertex and self.nu.is_vertex

    @property
    def is_real(self):
        return self.nu.is_vertex

    @property
    def is_ghost(self):
        return self.mu.is_vertex

    def star(self):
        return Monomial(self.nu, self.mu)

    def tokens(self):
        if self.is_vertex:
            return (self.mu.source,)
        return self.mu.edges + tuple(e + "*" for e in reversed(self.nu.edges))

    def key(self):
        return (self.length, self.tokens())

    def __str__(self):
        return " ".join(self.tokens())


class Field:
    """
    Exact coefficient field backed by a sympy domain (QQ or GF(p)).

    Calling the field converts ints and "a/b" strings into domain elements.
    """

    def __init__(self, domain, label):
        self.domain = domain
        self.label = label

    @classmethod
    def parse(cls, spec):
        text = str(spec).strip().lower()
        if text in ("q", "qq"):
            return cls(QQ, "q")
        if text.startswith("gf:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise FieldError(f"invalid field {spec!r}: expected gf:P")
            if not isprime(p):
                raise FieldError(f"invalid field {spec!r}: {p} is not prime")
            return cls(GF(p), f"gf:{p}")
        raise FieldError(f"invalid field {spec!r}: expected 'q' or 'gf:P'")

    @property
    def characteristic(self):
        return self.domain.characteristic()

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value):
        K = self.domain
        if isinstance(value, str):
            num, _, den = value.strip().partition("/")
            try:
                n, d = int(num), int(den) if den else 1
            except ValueError:
                raise FieldError(f"invalid scalar {value!r}")
            return self.divide(K(n), K(d))
        if isinstance(value, int):
            return K(value)
        return K.convert(value)

    def divide(self, a, b):
        if not b:
            raise FieldError(f"division by zero in {self.label}")
        return self.domain.quo(a, b)

    def format(self, c):
        if self.domain == QQ:
            if c.denominator == 1:
                return str(c.numerator)
            return f"{c.numerator}/{c.denominator}"
        return str(int(c) % self.characteristic)

    def __eq__(self, other):
        return isinstance(other, Field) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def __repr__(self):
        return f"Field({self.label!r})"


@dataclass(frozen=True)
class CyclePolynomial:
    """
    Generator p(g) at `base`: coefficients ascending in powers of the cycle g,
    with coeffs[0] == 1. The trivial polynomial (coeffs == (1,)) stands for the
    vertex itself and carries no cycle.
    """
    base: str
    cycle: Path = None
    coeffs: tuple = field(default=())

    @property
    def is_trivial(self):
        return len(self.coeffs) <= 1

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def format_poly(self, K, var="x"):
        parts = []
        for power, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if power == 0 else (var if power == 1 else f"{var}^{power}")
            if power == 0:
                text = K.format(c)
            elif c == K.one:
                text = mono
            elif c == -K.one and K.characteristic == 0:
                text = "-" + mono
            else:
                text = f"{K.format(c)}*{mono}"
            parts.append(text)
        return " + ".join(parts).replace("+ -", "- ")

    def describe(self, K):
        if self.is_trivial:
            return f"{self.base}"
        return f"p({self.cycle}) at {self.base}, p(x) = {self.format_poly(K)}"


class Graph:
    """
    Finite row-finite directed graph E = (E0, E1, r, s).

    Vertices keep their declared order (used for matrix indexing); outgoing
    edges are kept sorted by id and the least one is the special edge of a
    non-sink. Instances are immutable and hashable by content.
    """

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = tuple(Edge(*e) for e in edges)
        self._validate()

    def _validate(self):
        seen = {}
        for i, v in enumerate(self.vertices):
            if not isinstance(v, str) or not v:
                raise GraphFormatError("vertex id must be a non-empty string", f"vertices[{i}]")
            if v in seen:
                raise GraphFormatError(f"duplicate vertex id {v!r}", f"vertices[{i}]")
            if not re.fullmatch(SYMBOL_PATTERN, v):
                raise GraphFormatError(f"vertex id {v!r} is not a symbol (letters, digits, '_' or '.'; no leading digit)", f"vertices[{i}]")
            seen[v] = i
        edge_ids = set()
        for i, e in enumerate(self.edges):
            if not isinstance(e.id, str) or not e.id:
                raise GraphFormatError("edge id must be a non-empty string", f"edges[{i}].id")
            if e.id in edge_ids:
                raise GraphFormatError(f"duplicate edge id {e.id!r}", f"edges[{i}].id")
            if not re.fullmatch(SYMBOL_PATTERN, e.id):
                raise GraphFormatError(f"edge id {e.id!r} is not a symbol (letters, digits, '_' or '.'; no leading digit)", f"edges[{i}].id")
            if e.id in seen:
                raise GraphFormatError(f"edge id {e.id!r} clashes with a vertex id", f"edges[{i}].id")
            edge_ids.add(e.id)
            for attr in ("src", "dst"):
                if getattr(e, attr) not in seen:
                    raise GraphFormatError(f"undeclared vertex {getattr(e, attr)!r}", f"edges[{i}].{attr}")

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.vertices, self.edges) == (other.vertices, other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @cached_property
    def index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _edge_map(self):
        return {e.id: e for e in self.edges}

    @cached_property
    def _out(self):
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        return {v: tuple(sorted(es)) for v, es in out.items()}

    def has_vertex(self, v):
        return v in self.index

    def check_vertex(self, v):
        if v not in self.index:
            raise UnknownSymbolError(f"unknown vertex {v!r}")
        return v

    def has_edge(self, eid):
        return eid in self._edge_map

    def edge(self, eid):
        try:
            return self._edge_map[eid]
        except KeyError:
            raise UnknownSymbolError(f"unknown edge {eid!r}")

    def out_edges(self, v):
        return self._out[self.check_vertex(v)]

    def is_sink(self, v):
        return not self.out_edges(v)

    def special_edge(self, v):
        out = self.out_edges(v)
        return out[0] if out else None

    def is_special(self, eid):
        return self.special_edge(self.edge(eid).src).id == eid

    def path(self, edge_ids, base=None):
        """Validated Path from a sequence of edge ids (a vertex when empty)."""
        edge_ids = tuple(edge_ids)
        if not edge_ids:
            if base is None:
                raise PathError("a length-0 path needs a base vertex")
            return Path.trivial(self.check_vertex(base))
        first = self.edge(edge_ids[0])
        if base is not None and base != first.src:
            raise PathError(f"path {' '.join(edge_ids)} does not start at {base}")
        vertices = [first.src, first.dst]
        for eid in edge_ids[1:]:
            e = self.edge(eid)
            if e.src != vertices[-1]:
                raise PathError(f"edges are not consecutive: r(...) = {vertices[-1]} but s({eid}) = {e.src}")
            vertices.append(e.dst)
        return Path(tuple(vertices), edge_ids)

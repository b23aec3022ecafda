"""
Exact arithmetic in the Leavitt path algebra L_K(E) of a finite graph.

Elements are finite K-linear combinations of normal-form monomials mu nu*.
The basis comes from orienting the relation v = sum(e e*) at the special
edge of each non-sink (its least edge id): a monomial whose mu and nu both
end in the same special edge is rewritten away. Products are computed
monomial by monomial; raw words coming from the expression parser go
through a letter-level rewriting engine whose redex selection strategy can
be varied (the result does not depend on it).
"""
import logging
import random
from collections import defaultdict
from typing import NamedTuple

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from leavitt import (SYMBOL_PATTERN, CyclePolynomial, ExpressionSyntaxError, Field, LeavittError, Monomial, Path,
                     PreconditionError, UnknownSymbolError)

logger = logging.getLogger(__name__)

STRATEGIES = ("leftmost", "rightmost", "random")


class LeavittAlgebra:
    """
    Context for computations in L_K(E): the graph, the coefficient field and
    the monomial product cache. Algebras over the same graph and field
    compare equal.
    """

    def __init__(self, graph, field=None):
        self.graph = graph
        self.field = field if isinstance(field, Field) else Field.parse(field or "q")
        self.K = self.field.domain
        self._reduced = {}
        self._products = {}
        self._paths = {}

    def __eq__(self, other):
        return isinstance(other, LeavittAlgebra) and (self.graph, self.field) == (other.graph, other.field)

    def __hash__(self):
        return hash((self.graph, self.field))

    def __repr__(self):
        return f"LeavittAlgebra({self.graph!r}, {self.field.label})"

    def scalar(self, c):
        return c if isinstance(c, type(self.K.one)) else self.field(c)

    def element(self, terms):
        clean = {m: c for m, c in terms.items() if c}
        return Element(self, clean)

    def zero(self):
        return Element(self, {})

    def vertex(self, v):
        return Element(self, {Monomial.vertex(self.graph.check_vertex(v)): self.K.one})

    def unit(self):
        """Sum of all vertices; the identity of L_K(E) for a finite graph."""
        return Element(self, {Monomial.vertex(v): self.K.one for v in self.graph.vertices})

    def edge_path(self, eid):
        e = self.graph.edge(eid)
        return Path((e.src, e.dst), (e.id,))

    def edge(self, eid):
        return self.monomial(Monomial.real(self.edge_path(eid)))

    def ghost(self, eid):
        return self.monomial(Monomial.ghost(self.edge_path(eid)))

    def path(self, edge_ids, base=None):
        return self.monomial(Monomial.real(self.graph.path(edge_ids, base)))

    def monomial(self, m, coeff=None):
        """Element for mu nu*, rewritten into normal form when needed."""
        c = self.K.one if coeff is None else self.scalar(coeff)
        return self.element({k: c * v for k, v in self._reduce(m.mu, m.nu).items()})

    def is_normal(self, mu, nu):
        if not (mu.edges and nu.edges) or mu.edges[-1] != nu.edges[-1]:
            return True
        return not self.graph.is_special(mu.edges[-1])

    def _reduce(self, mu, nu):
        """Normal form of mu nu* as {Monomial: coeff}."""
        key = (mu, nu)
        if key in self._reduced:
            return self._reduced[key]
        if self.is_normal(mu, nu):
            result = {Monomial(mu, nu): self.K.one}
        else:
            special = mu.edges[-1]
            v = self.graph.edge(special).src
            mu1, nu1 = mu.sub(0, len(mu) - 1), nu.sub(0, len(nu) - 1)
            result = dict(self._reduce(mu1, nu1))
            for f in self.graph.out_edges(v):
                if f.id == special:
                    continue
                step = self.edge_path(f.id)
                m = Monomial(mu1 + step, nu1 + step)
                result[m] = result.get(m, self.K.zero) - self.K.one
            result = {m: c for m, c in result.items() if c}
        self._reduced[key] = result
        return result

    def _multiply_monomials(self, m1, m2):
        key = (m1, m2)
        if key in self._products:
            return self._products[key]
        nu, alpha = m1.nu, m2.mu
        if alpha.startswith(nu):
            result = self._reduce(m1.mu + alpha.sub(len(nu)), m2.nu)
        elif nu.startswith(alpha):
            result = self._reduce(m1.mu, m2.nu + nu.sub(len(alpha)))
        else:
            result = {}
        self._products[key] = result
        return result

    def paths(self, max_len):
        """All real paths (vertices included) of length <= max_len, sorted."""
        if max_len not in self._paths:
            found = [Path.trivial(v) for v in self.graph.vertices]
            frontier = list(found)
            for _ in range(max_len):
                frontier = [p + self.edge_path(e.id) for p in frontier for e in self.graph.out_edges(p.end)]
                found.extend(frontier)
            self._paths[max_len] = sorted(found, key=Path.key)
        return self._paths[max_len]

    def monomials(self, max_len):
        """Normal-form monomials mu nu* with |mu| + |nu| <= max_len, sorted."""
        by_end = defaultdict(list)
        for p in self.paths(max_len):
            by_end[p.end].append(p)
        result = []
        for group in by_end.values():
            for mu in group:
                for nu in group:
                    if len(mu) + len(nu) <= max_len and self.is_normal(mu, nu):
                        result.append(Monomial(mu, nu))
        return sorted(result, key=Monomial.key)


class Element:
    """Immutable normal-form element: a map Monomial -> nonzero scalar."""
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, self.algebra.K.zero) + c
        return self.algebra.element(terms)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.algebra.scalar(c)
        return self.algebra.element({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        return power(self, k)

    def star(self):
        return star(self)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0].key())

    @property
    def length(self):
        return max((m.length for m in self.terms), default=0)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Element({render(self)!r})"


def render(x):
    """Terms in shortlex order of their words; ghost edges carry a trailing '*'."""
    if not x.terms:
        return "0"
    K = x.algebra.field
    signed = K.characteristic == 0
    out = []
    for m, c in x.sorted_terms():
        negative = signed and c < 0
        magnitude = -c if negative else c
        coeff = "" if magnitude == K.one else K.format(magnitude) + " "
        text = coeff + str(m)
        if not out:
            out.append("-" + text if negative else text)
        else:
            out.append(("- " if negative else "+ ") + text)
    return " ".join(out)


def mul(x, y):
    x._check(y)
    algebra = x.algebra
    by_source = defaultdict(list)
    for m, c in y.terms.items():
        by_source[m.source].append((m, c))
    terms = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in by_source.get(m1.range, ()):
            for m, c in algebra._multiply_monomials(m1, m2).items():
                terms[m] = terms.get(m, algebra.K.zero) + c1 * c2 * c
    return algebra.element(terms)


def power(x, k):
    if k < 1:
        raise PreconditionError(f"exponent must be >= 1, got {k}")
    result = x
    for _ in range(k - 1):
        result = mul(result, x)
    return result


def star(x):
    return Element(x.algebra, {m.star(): c for m, c in x.terms.items()})


def peirce_split(x):
    """Corner pieces u·x·w grouped by (source, range), in sorted vertex order."""
    groups = defaultdict(dict)
    for m, c in x.terms.items():
        groups[(m.source, m.range)][m] = c
    return [Element(x.algebra, groups[key]) for key in sorted(groups)]


def is_real(x):
    return all(m.is_real for m in x.terms)


def is_ghost(x):
    return all(m.is_ghost for m in x.terms)


def make_cycle_polynomial(algebra, base, cycle, coeffs):
    """
    Validated CyclePolynomial from ascending coefficients (ints, "a/b" or
    field elements). Trailing zeros are dropped; the constant term must be 1.
    """
    coeffs = [algebra.scalar(c) for c in coeffs] or [algebra.K.one]
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    if coeffs[0] != algebra.K.one:
        raise PreconditionError("cycle polynomial must satisfy p(0) = 1")
    algebra.graph.check_vertex(base)
    if len(coeffs) == 1:
        return CyclePolynomial(base, None, (algebra.K.one,))
    if cycle is None or not cycle.is_closed or cycle.source != base:
        raise PreconditionError(f"cycle {cycle} is not based at {base}")
    return CyclePolynomial(base, cycle, tuple(coeffs))


def cycle_poly_eval(algebra, c):
    """The element v + sum(lambda_k g^k) denoted by a CyclePolynomial."""
    algebra.graph.check_vertex(c.base)
    if c.is_trivial:
        return algebra.vertex(c.base)
    g = c.cycle
    if not g.is_closed or g.source != c.base:
        raise PreconditionError(f"cycle {g} is not based at {c.base}")
    cycle = algebra.path(g.edges)
    total = algebra.vertex(c.base).scale(c.coeffs[0])
    for k, coeff in enumerate(c.coeffs[1:], start=1):
        if coeff:
            total = total + power(cycle, k).scale(coeff)
    return total


# ---------------------------------------------------------------------------
# Letter-level rewriting for raw words
# ---------------------------------------------------------------------------

class Letter(NamedTuple):
    kind: str  # "v" vertex, "e" edge, "g" ghost edge
    id: str

    def __str__(self):
        return self.id + "*" if self.kind == "g" else self.id


def _letter_ends(graph, letter):
    """(source, range) of a letter viewed as an element of L_K(E)."""
    if letter.kind == "v":
        return letter.id, letter.id
    e = graph.edge(letter.id)
    return (e.src, e.dst) if letter.kind == "e" else (e.dst, e.src)


def _redex(algebra, a, b):
    """
    Rewrites for the adjacent pair (a, b): None when the pair is irreducible,
    otherwise a list of (coeff, replacement) where [] means the pair is 0.
    """
    graph, one = algebra.graph, algebra.K.one
    a_src, a_dst = _letter_ends(graph, a)
    b_src, b_dst = _letter_ends(graph, b)
    if a.kind == "v" or b.kind == "v":
        if a_dst != b_src:
            return []
        return [(one, (b,) if a.kind == "v" else (a,))]
    if a.kind == "g" and b.kind == "e":
        return [(one, (Letter("v", a_src),))] if a.id == b.id else []
    if a_dst != b_src:
        return []
    if a.kind == "e" and b.kind == "g" and a.id == b.id and graph.is_special(a.id):
        v = a_src
        replacement = [(one, (Letter("v", v),))]
        for f in graph.out_edges(v):
            if f.id != a.id:
                replacement.append((-one, (Letter("e", f.id), Letter("g", f.id))))
        return replacement
    return None


def _reduce_word(algebra, word, pick):
    done = defaultdict(lambda: algebra.K.zero)
    work = [(algebra.K.one, word)]
    while work:
        c, w = work.pop()
        positions = [i for i in range(len(w) - 1) if _redex(algebra, w[i], w[i + 1]) is not None]
        if not positions:
            done[w] += c
            continue
        i = pick(positions)
        for c2, repl in _redex(algebra, w[i], w[i + 1]):
            work.append((c * c2, w[:i] + repl + w[i + 2:]))
    return done


def _word_to_monomial(graph, word):
    if len(word) == 1 and word[0].kind == "v":
        return Monomial.vertex(word[0].id)
    real = [l.id for l in word if l.kind == "e"]
    ghost = [l.id for l in reversed(word) if l.kind == "g"]
    if real and ghost:
        return Monomial(graph.path(real), graph.path(ghost))
    if real:
        return Monomial.real(graph.path(real))
    return Monomial.ghost(graph.path(ghost))


def _picker(strategy, seed):
    if strategy == "leftmost":
        return lambda positions: positions[0]
    if strategy == "rightmost":
        return lambda positions: positions[-1]
    if strategy == "random":
        rng = random.Random(seed)
        return rng.choice
    raise ValueError(f"unknown rewrite strategy {strategy!r}; expected one of {STRATEGIES}")


def normal_form(algebra, raw, strategy="leftmost", seed=None):
    """
    Rewrite a raw element {tuple of Letter: coeff} to its normal form.
    The empty word stands for the unit (a bare scalar term).
    """
    pick = _picker(strategy, seed)
    graph = algebra.graph
    totals = defaultdict(lambda: algebra.K.zero)
    for word, coeff in raw.items():
        c = algebra.scalar(coeff)
        if not c:
            continue
        for letter in word:
            if letter.kind == "v":
                graph.check_vertex(letter.id)
            else:
                graph.edge(letter.id)
        if not word:
            for v in graph.vertices:
                totals[Monomial.vertex(v)] += c
            continue
        for reduced, c2 in _reduce_word(algebra, tuple(word), pick).items():
            if c2:
                totals[_word_to_monomial(graph, reduced)] += c * c2
    return algebra.element(dict(totals))


# ---------------------------------------------------------------------------
# Expression parser
# ---------------------------------------------------------------------------

_GRAMMAR = rf"""
    expr: SIGN? term (SIGN term)*
    term: factor+
    factor: atom (STAR | exponent)*
    ?atom: scalar | symbol | "(" expr ")"
    exponent: "^" INT
    scalar: INT ("/" INT)?
    symbol: SYMBOL

    SIGN: "+" | "-"
    STAR: "*"
    SYMBOL: /{SYMBOL_PATTERN}/

    %import common.INT
    %import common.WS
    %ignore WS
"""

_PARSER = Lark(_GRAMMAR, start="expr", parser="lalr")


def _raw_product(x, y):
    result = defaultdict(int)
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            result[w1 + w2] += c1 * c2
    return dict(result)


def _raw_star(x):
    flip = {"v": "v", "e": "g", "g": "e"}
    return {tuple(Letter(flip[l.kind], l.id) for l in reversed(w)): c for w, c in x.items()}


class _RawBuilder(Transformer):
    """Builds raw values {word: coeff} bottom-up; the empty word is the unit."""

    def __init__(self, algebra):
        super().__init__()
        self.algebra = algebra

    def expr(self, items):
        total = defaultdict(lambda: self.algebra.K.zero)
        sign = 1
        for item in items:
            if isinstance(item, Token):
                sign = -1 if item == "-" else 1
                continue
            for w, c in item.items():
                total[w] += c if sign > 0 else -c
            sign = 1
        return dict(total)

    def term(self, items):
        value = items[0]
        for item in items[1:]:
            value = _raw_product(value, item)
        return value

    def factor(self, items):
        value = items[0]
        for suffix in items[1:]:
            if isinstance(suffix, Token):
                value = _raw_star(value)
                continue
            base = value
            for _ in range(suffix - 1):
                value = _raw_product(value, base)
        return value

    def exponent(self, items):
        token, = items
        if int(token) < 1:
            raise ExpressionSyntaxError("exponent must be a positive integer", token.start_pos)
        return int(token)

    def scalar(self, items):
        return {(): self.algebra.field("/".join(items))}

    def symbol(self, items):
        token, = items
        graph = self.algebra.graph
        if graph.has_vertex(token):
            letter = Letter("v", str(token))
        elif graph.has_edge(token):
            letter = Letter("e", str(token))
        else:
            raise UnknownSymbolError(f"undeclared symbol {str(token)!r} at position {token.start_pos}")
        return {(letter,): self.algebra.K.one}


def _syntax_error(err, text):
    if isinstance(err, UnexpectedEOF) or (isinstance(err, UnexpectedToken) and err.token.type == "$END"):
        return ExpressionSyntaxError("unexpected end of input", len(text.rstrip()))
    if isinstance(err, UnexpectedCharacters):
        return ExpressionSyntaxError(f"unexpected character {text[err.pos_in_stream]!r}", err.pos_in_stream)
    return ExpressionSyntaxError(f"unexpected {str(err.token)!r}", err.pos_in_stream)


def parse_raw(text, algebra):
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as err:
        raise _syntax_error(err, text) from None
    try:
        return _RawBuilder(algebra).transform(tree)
    except VisitError as err:
        if isinstance(err.orig_exc, LeavittError):
            raise err.orig_exc from None
        raise


def parse_expr(text, algebra, strategy="leftmost", seed=None):
    """Parse an expression over the graph's symbols and return its normal form."""
    return normal_form(algebra, parse_raw(text, algebra), strategy=strategy, seed=seed)

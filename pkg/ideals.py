"""
Two-sided ideals of L_K(E): presentations, a bounded membership oracle,
canonical cycle-polynomial generators, gcd merging, domination pruning and
the vertex trace of graded ideals.

Every claim of the form "y lies in the ideal generated by xs" comes with a
certificate y = sum(lambda * a * x_i * b) over monomials a, b that is
re-evaluated exactly before it is returned.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field

from sympy.polys.densearith import dup_quo, dup_quo_ground
from sympy.polys.densebasic import dup_strip
from sympy.polys.euclidtools import dup_gcdex
from sympy.polys.matrices import DomainMatrix

import config
from closures import closure, format_set, is_hereditary, is_saturated
from graph_core import (connecting_path, cp_factorize, csp_enumerate, is_acyclic,
                        longest_path_length, reaches)
from leavitt import (CyclePolynomial, GcdNormalizationError, Monomial, Path,
                     PreconditionError)
from lpa_algebra import (cycle_poly_eval, is_ghost, is_real, make_cycle_polynomial,
                         mul, parse_expr, peirce_split, render, star)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateTerm:
    left: Monomial
    generator: int
    right: Monomial
    scalar: object

    @property
    def size(self):
        return self.left.length + self.right.length


@dataclass(frozen=True)
class MembershipCertificate:
    """
    Found: target = sum(scalar * left * generators[generator] * right).
    Not found: no combination exists with |left| + |right| <= bound; this is
    a proof of non-membership only when `complete` is set.
    """
    target: object
    found: bool
    bound: int
    terms: tuple = ()
    complete: bool = False

    @property
    def verdict(self):
        return "Found" if self.found else f"NotFoundAtBound({self.bound})"

    @property
    def size(self):
        return max((t.size for t in self.terms), default=0)

    def evaluate(self, generators):
        return evaluate_terms(self.target.algebra, self.terms, generators)

    def verify(self, generators):
        return self.found and self.evaluate(generators) == self.target

    def records(self):
        """(a, generator index, b, scalar) tuples as text for independent re-checking."""
        K = self.target.algebra.field
        return [(str(t.left), t.generator, str(t.right), K.format(t.scalar)) for t in self.terms]

    def to_dict(self):
        return {
            "target": render(self.target),
            "verdict": self.verdict,
            "bound": self.bound,
            "complete": self.complete,
            "terms": [list(r) for r in self.records()],
        }


def evaluate_terms(algebra, terms, generators):
    acc = defaultdict(lambda: algebra.K.zero)
    for t in terms:
        product = mul(mul(algebra.monomial(t.left), generators[t.generator]), algebra.monomial(t.right))
        for m, c in product.terms.items():
            acc[m] += t.scalar * c
    return algebra.element(dict(acc))


def _sorted_terms(terms):
    return tuple(sorted(terms, key=lambda t: (t.generator, t.left.key(), t.right.key())))


def _certificate(target, terms):
    """Found certificate whose bound is the largest |a| + |b| it uses."""
    terms = _sorted_terms(terms)
    return MembershipCertificate(target, True, max((t.size for t in terms), default=0), terms)


def _sandwich(algebra, left, terms, right, scale=None):
    """Certificate terms for left * (sum of terms) * right, expanded into monomials."""
    s = algebra.K.one if scale is None else algebra.scalar(scale)
    out = defaultdict(lambda: algebra.K.zero)
    for t in terms:
        la = mul(left, algebra.monomial(t.left))
        if not la:
            continue
        rb = mul(algebra.monomial(t.right), right)
        for m1, c1 in la.terms.items():
            for m2, c2 in rb.terms.items():
                out[(m1, t.generator, m2)] += s * t.scalar * c1 * c2
    return [CertificateTerm(a, i, b, c) for (a, i, b), c in out.items() if c]


def _scaled(algebra, terms, scale):
    s = algebra.scalar(scale)
    return [CertificateTerm(t.left, t.generator, t.right, s * t.scalar) for t in terms]


def _shifted(terms, offset):
    return [CertificateTerm(t.left, t.generator + offset, t.right, t.scalar) for t in terms]


def _identity(v, index, algebra):
    vm = Monomial.vertex(v)
    return [CertificateTerm(vm, index, vm, algebra.K.one)]


def _substitute(algebra, terms, express):
    """Rewrite terms over old generators using express[old] (terms over new generators)."""
    out = defaultdict(lambda: algebra.K.zero)
    for t in terms:
        for u in _sandwich(algebra, algebra.monomial(t.left), express[t.generator],
                           algebra.monomial(t.right), t.scalar):
            out[(u.left, u.generator, u.right)] += u.scalar
    return [CertificateTerm(a, i, b, c) for (a, i, b), c in out.items() if c]


def _star_terms(terms):
    """star(sum(lambda a x b)) = sum(lambda star(b) star(x) star(a))."""
    return [CertificateTerm(t.right.star(), t.generator, t.left.star(), t.scalar) for t in terms]


# ---------------------------------------------------------------------------
# Ideal presentations and the bounded membership oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealPresentation:
    algebra: object
    generators: tuple
    bound: int = field(default_factory=lambda: config.MEMBERSHIP_BOUND)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for i, x in enumerate(self.generators):
            if x.algebra != self.algebra:
                raise PreconditionError(f"generator {i} belongs to a different algebra")
            if not x:
                raise PreconditionError(f"generator {i} is zero")
        if self.bound < 1:
            raise PreconditionError(f"membership bound must be >= 1, got {self.bound}")

    @classmethod
    def parse(cls, algebra, texts, bound=None):
        gens = [parse_expr(t, algebra) for t in texts]
        return cls(algebra, gens, config.MEMBERSHIP_BOUND if bound is None else bound)


def oracle_is_complete(graph, bound):
    """
    On an acyclic graph every basis monomial has |mu|, |nu| <= L (longest
    path), so the ideal is spanned by a*x*b with |a| + |b| <= 4L.
    """
    return is_acyclic(graph) and bound >= 4 * longest_path_length(graph)


def _solve(algebra, columns, target):
    """Coefficients expressing target in the span of columns, or None."""
    rows = {}
    dod = defaultdict(dict)
    for j, element in enumerate(columns + [target]):
        for m, c in element.terms.items():
            i = rows.setdefault(m, len(rows))
            dod[i][j] = c
    ncols = len(columns) + 1
    matrix = DomainMatrix(dict(dod), (len(rows), ncols), algebra.K)
    reduced, pivots = matrix.rref()
    if ncols - 1 in pivots:
        return None
    coeffs = {}
    for r, col in enumerate(pivots):
        c = reduced[r, ncols - 1].element
        if c:
            coeffs[col] = c
    return coeffs


def membership_bounded(ideal, target, bound=None):
    """
    Exact search for target in span{a*x*b : x generator, |a| + |b| <= N} over
    normal-form monomials a, b. Bounds 0..N are tried in turn so the reported
    certificate uses the smallest sufficient bound.
    """
    algebra = ideal.algebra
    N = ideal.bound if bound is None else bound
    complete = oracle_is_complete(algebra.graph, N)
    if not target:
        return MembershipCertificate(target, True, 0, (), complete)
    monomials = algebra.monomials(N)
    by_length = defaultdict(list)
    for m in monomials:
        by_length[m.length].append(m)
    candidates, provenance, seen = [], [], set()
    left_products = {}
    for n in range(N + 1):
        added = 0
        for i, x in enumerate(ideal.generators):
            sources = {m.source for m in x.terms}
            for la in range(n + 1):
                for a in by_length[la]:
                    if a.range not in sources:
                        continue
                    key = (a, i)
                    if key not in left_products:
                        left_products[key] = mul(algebra.monomial(a), x)
                    ax = left_products[key]
                    if not ax:
                        continue
                    ranges = {m.range for m in ax.terms}
                    for b in by_length[n - la]:
                        if b.source not in ranges:
                            continue
                        axb = mul(ax, algebra.monomial(b))
                        if axb and axb not in seen:
                            seen.add(axb)
                            candidates.append(axb)
                            provenance.append((a, i, b))
                            added += 1
        if not added:
            continue
        logger.debug(f"membership: bound {n}, {len(candidates)} candidate products")
        coeffs = _solve(algebra, candidates, target)
        if coeffs is None:
            continue
        terms = [CertificateTerm(provenance[j][0], provenance[j][1], provenance[j][2], c)
                 for j, c in sorted(coeffs.items())]
        cert = MembershipCertificate(target, True, n, _sorted_terms(terms), complete)
        if not cert.verify(ideal.generators):
            raise RuntimeError(f"membership certificate for {render(target)} does not re-evaluate")
        return cert
    return MembershipCertificate(target, False, N, (), complete)


# ---------------------------------------------------------------------------
# Polynomials in K[x] (dense, highest degree first)
# ---------------------------------------------------------------------------

def _dup(c, K):
    return dup_strip(list(reversed(c.coeffs)))


def _ascending(f):
    return tuple(reversed(f))


def _power_monomial(cycle, base, k):
    return Monomial.real(cycle * k if k else Path.trivial(base))


def _polynomial_terms(algebra, cycle, base, coeffs, generator):
    """Terms for a(g) * x_generator with a given by ascending coefficients."""
    vm = Monomial.vertex(base)
    return [CertificateTerm(_power_monomial(cycle, base, k), generator, vm, c)
            for k, c in enumerate(coeffs) if c]


@dataclass(frozen=True)
class GcdMerge:
    """q(g) = alpha(g) p1(g) + beta(g) p2(g) with q = gcd(p1, p2), q(0) = 1."""
    result: CyclePolynomial
    alpha: tuple
    beta: tuple
    cofactors: tuple
    certificate: MembershipCertificate


def gcd_merge(algebra, c1, c2):
    if c1.base != c2.base:
        raise PreconditionError(f"generators live at different vertices {c1.base} and {c2.base}")
    if not (c1.is_trivial or c2.is_trivial) and c1.cycle != c2.cycle:
        raise PreconditionError(f"generators use different cycles {c1.cycle} and {c2.cycle}")
    K = algebra.K
    base = c1.base
    cycle = c1.cycle or c2.cycle
    f1, f2 = _dup(c1, K), _dup(c2, K)
    s, t, h = dup_gcdex(f1, f2, K)
    constant = h[-1] if h else K.zero
    if not constant:
        raise GcdNormalizationError("gcd has zero constant term and cannot be normalized to q(0) = 1")
    s, t, h = (dup_quo_ground(p, constant, K) for p in (s, t, h))
    q = make_cycle_polynomial(algebra, base, cycle, _ascending(h))
    terms = (_polynomial_terms(algebra, cycle, base, _ascending(s), 0)
             + _polynomial_terms(algebra, cycle, base, _ascending(t), 1))
    target = cycle_poly_eval(algebra, q)
    cert = _certificate(target, terms)
    if not cert.verify([cycle_poly_eval(algebra, c1), cycle_poly_eval(algebra, c2)]):
        raise RuntimeError("Bezout certificate does not re-evaluate")
    cofactors = (_ascending(dup_quo(f1, h, K)), _ascending(dup_quo(f2, h, K)))
    logger.debug(f"gcd_merge at {base}: {q.format_poly(algebra.field)}")
    return GcdMerge(q, _ascending(s), _ascending(t), cofactors, cert)


# ---------------------------------------------------------------------------
# Domination pruning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pruning:
    """Surviving generators and, per dropped generator, its certificate over them."""
    generators: tuple
    dropped: tuple


def _domination_terms(algebra, dominator, index, dominated, bound, off_cycle):
    """
    Certificate for dominated in <dominator> via conjugation by a path, or
    None when the pair does not match. With g = mu nu and h = nu mu (v on g)
    the identity is q(h) = mu* p(g) mu for q = p. With `off_cycle`, a v below
    u and off g (or a trivial dominator) gives mu* p(g) mu = v instead.
    """
    graph = algebra.graph
    u, v = dominator.base, dominated.base
    if u == v or not reaches(graph, u, v):
        return None
    g = dominator.cycle
    on_cycle = g is not None and v in g.vertices[:-1]
    if on_cycle:
        if dominated.is_trivial or dominated.coeffs != dominator.coeffs:
            return None
        pos = g.vertices.index(v)
        mu, nu = g.sub(0, pos), g.sub(pos)
        if nu + mu != dominated.cycle:
            return None
    elif off_cycle:
        mu = connecting_path(graph, u, v)
    else:
        return None
    if 2 * len(mu) > bound:
        return None
    core = [CertificateTerm(Monomial.ghost(mu), index, Monomial.real(mu), algebra.K.one)]
    if on_cycle:
        return core
    return _sandwich(algebra, cycle_poly_eval(algebra, dominated), core, algebra.vertex(v))


def prune_dominated(algebra, gens, bound=None, off_cycle=False):
    """
    Drop generators that lie in the ideal of a surviving generator at a
    vertex above them, each with a verified certificate. By default only
    rotations of the dominator's cycle qualify; `off_cycle` also lets a
    generator absorb everything at vertices it reaches off its cycle.
    Iterates to a fixed point; surviving order follows the input order.
    """
    N = config.MEMBERSHIP_BOUND if bound is None else bound
    gens = list(gens)
    elements = [cycle_poly_eval(algebra, c) for c in gens]
    alive = list(range(len(gens)))
    drops = []
    changed = True
    while changed:
        changed = False
        # Generators at the greatest vertex ids are tried for removal first
        for j in sorted(alive, key=lambda k: _poly_key(gens[k]), reverse=True):
            for i in alive:
                if i == j:
                    continue
                terms = _domination_terms(algebra, gens[i], i, gens[j], N, off_cycle)
                if terms is None:
                    continue
                if evaluate_terms(algebra, terms, elements) != elements[j]:
                    logger.debug(f"prune: conjugation identity failed for {gens[j].describe(algebra.field)}")
                    continue
                logger.debug(f"prune: {render(elements[j])} lies in <{render(elements[i])}>")
                drops.append((j, terms))
                alive.remove(j)
                changed = True
                break
            if changed:
                break
    # Later drops only reference generators alive at their time; resolve newest first
    resolved = {i: _identity(gens[i].base, i, algebra) for i in alive}
    for j, terms in reversed(drops):
        resolved[j] = _substitute(algebra, terms, resolved)
    position = {old: new for new, old in enumerate(alive)}
    dropped = []
    for j, _ in drops:
        terms = [CertificateTerm(t.left, position[t.generator], t.right, t.scalar) for t in resolved[j]]
        target = elements[j]
        dropped.append((gens[j], _certificate(target, terms)))
    return Pruning(tuple(gens[i] for i in alive), tuple(dropped))


# ---------------------------------------------------------------------------
# Canonical generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Canonicalization:
    """
    Cycle-polynomial generators for the ideal of `inputs`, with forward
    certificates (each generator over the inputs) and backward certificates
    (each input over the generators).
    """
    algebra: object
    inputs: tuple
    generators: tuple
    forward: tuple
    backward: tuple

    def elements(self):
        return [cycle_poly_eval(self.algebra, c) for c in self.generators]

    def verify(self):
        outputs = self.elements()
        return (all(cert.verify(self.inputs) for cert in self.forward)
                and all(cert.verify(outputs) for cert in self.backward))

    @property
    def certificate_size(self):
        return max((c.size for c in self.forward + self.backward), default=0)

    def to_dict(self):
        K = self.algebra.field
        return {
            "inputs": [render(x) for x in self.inputs],
            "generators": [
                {
                    "vertex": c.base,
                    "cycle": str(c.cycle) if c.cycle else None,
                    "polynomial": c.format_poly(K),
                    "element": render(cycle_poly_eval(self.algebra, c)),
                }
                for c in self.generators
            ],
            "forward": [cert.to_dict() for cert in self.forward],
            "backward": [cert.to_dict() for cert in self.backward],
        }


class _Reducer:
    """
    Recursive reduction of an element to cycle polynomials. Every call gets
    `fwd`, the certificate of its input over the root generators, and
    returns (derived, back): derived is a list of (CyclePolynomial, forward
    terms) and back expresses the input over the derived list.
    """

    def __init__(self, algebra):
        self.algebra = algebra
        self.graph = algebra.graph
        self.K = algebra.K

    def general(self, y, fwd):
        derived, back = [], []
        for part in peirce_split(y):
            u, w = next(iter(part.terms)).source, next(iter(part.terms)).range
            part_fwd = _sandwich(self.algebra, self.algebra.vertex(u), fwd, self.algebra.vertex(w))
            if is_real(part):
                d, b = self.real(part, part_fwd)
            elif is_ghost(part):
                d, b = self._ghost(part, part_fwd)
            else:
                d, b = self._mixed(part, part_fwd, u, w)
            back += _shifted(b, len(derived))
            derived += d
        return derived, back

    def real(self, y, fwd):
        derived, back = [], []
        for part in peirce_split(y):
            u, w = next(iter(part.terms)).source, next(iter(part.terms)).range
            part_fwd = _sandwich(self.algebra, self.algebra.vertex(u), fwd, self.algebra.vertex(w))
            d, b = self._real_corner(part, part_fwd, u, w)
            back += _shifted(b, len(derived))
            derived += d
        return derived, back

    def _mixed(self, y, fwd, u, w):
        """y = sum over e in s^-1(w) of (y e) e*; each y e has shorter ghost parts."""
        algebra = self.algebra
        derived, back = [], []
        for e in self.graph.out_edges(w):
            child = mul(y, algebra.edge(e.id))
            if not child:
                continue
            child_fwd = _sandwich(algebra, algebra.vertex(u), fwd, algebra.edge(e.id))
            d, b = self.general(child, child_fwd)
            back += _shifted(_sandwich(algebra, algebra.vertex(u), b, algebra.ghost(e.id)), len(derived))
            derived += d
        return derived, back

    def _real_corner(self, y, fwd, u, w):
        algebra = self.algebra
        const = y.terms.get(Monomial.vertex(u)) if u == w else None
        if const is None:
            # Strip leading edges: y = sum e (e* y)
            derived, back = [], []
            leading = sorted({m.mu.edges[0] for m in y.terms})
            for eid in leading:
                child = mul(algebra.ghost(eid), y)
                child_fwd = _sandwich(algebra, algebra.ghost(eid), fwd, algebra.vertex(w))
                d, b = self.real(child, child_fwd)
                back += _shifted(_sandwich(algebra, algebra.edge(eid), b, algebra.vertex(w)), len(derived))
                derived += d
            return derived, back

        inverse = self.K.one / const
        unit_back = [CertificateTerm(Monomial.vertex(u), 0, Monomial.vertex(u), const)]
        others = [m for m in y.terms if not m.is_vertex]
        if not others:
            return [(_trivial(algebra, u), _scaled(algebra, fwd, inverse))], unit_back

        maxlen = y.length
        csps = csp_enumerate(self.graph, u, max(maxlen + 1, 2 * len(self.graph.vertices)))
        if len(csps) == 1:
            g = csps[0]
            coeffs = [self.K.zero] * (maxlen // len(g) + 1)
            coeffs[0] = self.K.one
            for m in others:
                factors = cp_factorize(self.graph, m.mu)
                if any(f != g for f in factors):
                    raise RuntimeError(f"closed path {m.mu} is not a power of {g}")
                coeffs[len(factors)] = y.terms[m] * inverse
            poly = make_cycle_polynomial(algebra, u, g, coeffs)
            logger.debug(f"single cycle at {u}: {poly.describe(algebra.field)}")
            return [(poly, _scaled(algebra, fwd, inverse))], unit_back

        # Two cycles at u: conjugating by g1^k g2 isolates the vertex term
        g1, g2 = csps[0], csps[1]
        k = maxlen // len(g1) + 1
        conj = g1 * k + g2
        left, right = Monomial.ghost(conj), Monomial.real(conj)
        z = mul(mul(algebra.monomial(left), y), algebra.monomial(right))
        if z != algebra.vertex(u).scale(const):
            raise RuntimeError(f"conjugation by {conj} did not isolate {u}")
        logger.debug(f"two cycles at {u}: conjugate by ({g1})^{k} {g2}")
        vertex_fwd = _sandwich(algebra, algebra.monomial(left), fwd, algebra.monomial(right), inverse)
        back = [CertificateTerm(Monomial.real(m.mu), 0, Monomial.vertex(u), c) for m, c in y.terms.items()]
        return [(_trivial(algebra, u), vertex_fwd)], back

    def _ghost(self, y, fwd):
        """
        Ghost-only corner: canonicalize star(y), star the results back to
        q(g*) and rewrite each as the real polynomial p(x) = x^m q(1/x) / q_m,
        using q(g*) = q_m (g*)^m p(g) and p(g) = q(g*) g^m / q_m.
        """
        algebra = self.algebra
        s = star(y)
        first = next(iter(s.terms))
        local = [CertificateTerm(Monomial.vertex(first.source), 0, Monomial.vertex(first.range), self.K.one)]
        derived_s, back_s = self.real(s, local)
        derived, express = [], {}
        for j, (c, local_fwd) in enumerate(derived_s):
            # star(c) over y, then over the root generators
            over_y = _star_terms(local_fwd)
            q_fwd = _substitute(algebra, over_y, {0: fwd})
            if c.is_trivial:
                derived.append((c, q_fwd))
                express[j] = _identity(c.base, j, algebra)
                continue
            m = c.degree
            lead = c.coeffs[-1]
            p = make_cycle_polynomial(algebra, c.base, c.cycle, [x / lead for x in reversed(c.coeffs)])
            g_m = Monomial.real(c.cycle * m)
            derived.append((p, _sandwich(algebra, algebra.vertex(c.base), q_fwd, algebra.monomial(g_m), self.K.one / lead)))
            express[j] = [CertificateTerm(Monomial.ghost(c.cycle * m), j, Monomial.vertex(c.base), lead)]
        back = _substitute(algebra, _star_terms(back_s), express)
        return derived, back


def _trivial(algebra, v):
    return make_cycle_polynomial(algebra, v, None, [1])


def _poly_key(c):
    return (c.base, c.cycle.edges if c.cycle else (), len(c.coeffs), tuple(str(x) for x in c.coeffs))


class _GeneratorSet:
    """
    Working list of derived generators with forward certificates over the
    inputs and backward certificates of every input over the list. Each
    rewrite supplies, for every old generator, its terms over the new list.
    """

    def __init__(self, algebra, inputs, derived, backs):
        self.algebra = algebra
        self.inputs = inputs
        self.gens = [c for c, _ in derived]
        self.fwd = [f for _, f in derived]
        self.backs = backs

    def replace(self, new_gens, new_fwd, express):
        self.backs = [_substitute(self.algebra, b, express) for b in self.backs]
        self.gens, self.fwd = list(new_gens), list(new_fwd)

    def dedupe(self):
        index, new_gens, new_fwd, express = {}, [], [], {}
        for j, c in enumerate(self.gens):
            if c not in index:
                index[c] = len(new_gens)
                new_gens.append(c)
                new_fwd.append(self.fwd[j])
            express[j] = _identity(c.base, index[c], self.algebra)
        self.replace(new_gens, new_fwd, express)

    def supersede_by_vertices(self):
        """Drop p(g) at v when the vertex v itself is a generator."""
        vertex_at = {c.base: j for j, c in enumerate(self.gens) if c.is_trivial}
        keep = [j for j, c in enumerate(self.gens) if c.is_trivial or c.base not in vertex_at]
        position = {old: new for new, old in enumerate(keep)}
        express = {}
        for j, c in enumerate(self.gens):
            if j in position:
                express[j] = _identity(c.base, position[j], self.algebra)
            else:
                express[j] = _polynomial_terms(self.algebra, c.cycle, c.base, c.coeffs, position[vertex_at[c.base]])
        self.replace([self.gens[j] for j in keep], [self.fwd[j] for j in keep], express)

    def merge_gcds(self):
        algebra = self.algebra
        groups = defaultdict(list)
        for j, c in enumerate(self.gens):
            if not c.is_trivial:
                groups[(c.base, c.cycle)].append(j)
        merged = {}
        for members in groups.values():
            if len(members) < 2:
                continue
            current, current_fwd = self.gens[members[0]], self.fwd[members[0]]
            for j in members[1:]:
                step = gcd_merge(algebra, current, self.gens[j])
                lhs = _substitute(algebra, list(step.certificate.terms), {0: current_fwd, 1: self.fwd[j]})
                current, current_fwd = step.result, lhs
            merged[members[0]] = (current, current_fwd, members)
        if not merged:
            return
        new_gens, new_fwd, express = [], [], {}
        owner = {}
        for first, (_, _, members) in merged.items():
            for j in members:
                owner[j] = first
        slot = {}
        for j, c in enumerate(self.gens):
            if j in owner:
                first = owner[j]
                if first not in slot:
                    slot[first] = len(new_gens)
                    new_gens.append(merged[first][0])
                    new_fwd.append(merged[first][1])
            else:
                slot[j] = len(new_gens)
                new_gens.append(c)
                new_fwd.append(self.fwd[j])
        K = algebra.K
        for j, c in enumerate(self.gens):
            if j not in owner:
                express[j] = _identity(c.base, slot[j], algebra)
                continue
            q = merged[owner[j]][0]
            cofactor = _ascending(dup_quo(_dup(c, K), _dup(q, K), K))
            express[j] = _polynomial_terms(algebra, c.cycle, c.base, cofactor, slot[owner[j]])
        self.replace(new_gens, new_fwd, express)

    def prune(self, bound):
        pruning = prune_dominated(self.algebra, self.gens, bound, off_cycle=True)
        survivors = list(pruning.generators)
        kept = []
        used = set()
        for c in survivors:
            j = next(i for i, g in enumerate(self.gens) if g == c and i not in used)
            used.add(j)
            kept.append(j)
        express = {j: _identity(self.gens[j].base, n, self.algebra) for n, j in enumerate(kept)}
        dropped = dict(pruning.dropped)
        for j, c in enumerate(self.gens):
            if j not in express:
                express[j] = list(dropped[c].terms)
        self.replace(survivors, [self.fwd[j] for j in kept], express)

    def sort(self):
        order = sorted(range(len(self.gens)), key=lambda j: _poly_key(self.gens[j]))
        express = {old: _identity(self.gens[old].base, new, self.algebra) for new, old in enumerate(order)}
        self.replace([self.gens[j] for j in order], [self.fwd[j] for j in order], express)

    def result(self):
        algebra = self.algebra
        outputs = [cycle_poly_eval(algebra, c) for c in self.gens]
        forward = []
        for c, terms, target in zip(self.gens, self.fwd, outputs):
            forward.append(_certificate(target, terms))
        backward = []
        for x, terms in zip(self.inputs, self.backs):
            backward.append(_certificate(x, terms))
        result = Canonicalization(algebra, tuple(self.inputs), tuple(self.gens), tuple(forward), tuple(backward))
        if not result.verify():
            raise RuntimeError("canonical generator certificates do not re-evaluate")
        return result


def canonicalize_real(algebra, x):
    """Cycle polynomials generating the ideal of a nonzero real element x."""
    if not x:
        raise PreconditionError("cannot canonicalize the zero element")
    if not is_real(x):
        raise PreconditionError(f"{render(x)} contains ghost edges")
    reducer = _Reducer(algebra)
    root = _root_terms(algebra, x, 0)
    derived, back = reducer.real(x, root)
    working = _GeneratorSet(algebra, [x], derived, [back])
    working.dedupe()
    return working.result()


def _root_terms(algebra, x, index):
    """x = sum over its corners of u * x * w."""
    out = []
    for part in peirce_split(x):
        first = next(iter(part.terms))
        out.append(CertificateTerm(Monomial.vertex(first.source), index, Monomial.vertex(first.range), algebra.K.one))
    return out


def canonical_generators(ideal):
    """
    Cycle-polynomial generators of the same two-sided ideal: reduce every
    generator, then dedupe, let vertex generators supersede polynomials at
    the same vertex, merge polynomials on a common cycle by gcd and drop
    generators dominated by one at a higher vertex.
    """
    algebra = ideal.algebra
    reducer = _Reducer(algebra)
    derived, backs = [], []
    for i, x in enumerate(ideal.generators):
        d, b = reducer.general(x, _root_terms(algebra, x, i))
        backs.append(_shifted(b, len(derived)))
        derived += d
    working = _GeneratorSet(algebra, list(ideal.generators), derived, backs)
    working.dedupe()
    working.merge_gcds()
    working.dedupe()
    working.supersede_by_vertices()
    working.prune(ideal.bound)
    working.sort()
    result = working.result()
    logger.info(f"canonical_generators: {len(ideal.generators)} inputs -> {len(result.generators)} generators")
    return result


# ---------------------------------------------------------------------------
# Graded ideals
# ---------------------------------------------------------------------------

def closure_certificates(algebra, X):
    """
    For every w in the closure of X, terms expressing w over the vertex
    generators sorted(X): w = mu* x mu along a path x -> w for Lambda_0, and
    v = sum(e r(e) e*) for the saturation steps.
    """
    graph = algebra.graph
    trace = closure(graph, X)
    seeds = sorted(trace.seeds)
    index = {x: i for i, x in enumerate(seeds)}
    certs = {}
    for w in sorted(trace.steps[0]):
        if w in index:
            certs[w] = _identity(w, index[w], algebra)
            continue
        x = next(s for s in seeds if reaches(graph, s, w))
        mu = connecting_path(graph, x, w)
        certs[w] = [CertificateTerm(Monomial.ghost(mu), index[x], Monomial.real(mu), algebra.K.one)]
    for previous, step in zip(trace.steps[:-1], trace.steps[1:]):
        for v in sorted(step - previous):
            terms = []
            for e in graph.out_edges(v):
                terms += _sandwich(algebra, algebra.edge(e.id), certs[e.dst], algebra.ghost(e.id))
            certs[v] = terms
    gens = [algebra.vertex(s) for s in seeds]
    result = {}
    for w, terms in certs.items():
        target = algebra.vertex(w)
        cert = _certificate(target, terms)
        if not cert.verify(gens):
            raise RuntimeError(f"closure certificate for {w} does not re-evaluate")
        result[w] = cert
    return dict(sorted(result.items()))


@dataclass(frozen=True)
class GradedTrace:
    hset: frozenset
    bound: int
    verdicts: dict
    closure_certificates: dict = field(default_factory=dict)
    seeds: tuple = ()

    @property
    def found(self):
        return frozenset(v for v, cert in self.verdicts.items() if cert.found)

    @property
    def consistent(self):
        """The vertices certified in the ideal of H are exactly H."""
        return self.found == self.hset

    def to_dict(self):
        return {
            "hset": sorted(self.hset),
            "bound": self.bound,
            "consistent": self.consistent,
            "verdicts": {v: cert.to_dict() for v, cert in self.verdicts.items()},
            "seeds": list(self.seeds),
            "closure_certificates": {v: cert.to_dict() for v, cert in self.closure_certificates.items()},
        }


def graded_vertex_trace(algebra, H, bound=None, seeds=None):
    """
    For the graded ideal generated by a hereditary saturated H: every vertex
    of H is Found (u = u*u*u) and every other vertex is searched with the
    membership oracle. When `seeds` is given, closure certificates over the
    seed vertices are attached for every vertex of their closure.
    """
    graph = algebra.graph
    H = frozenset(graph.check_vertex(v) for v in H)
    if not (is_hereditary(graph, H) and is_saturated(graph, H)):
        raise PreconditionError(f"{format_set(H)} is not hereditary and saturated")
    N = config.MEMBERSHIP_BOUND if bound is None else bound
    members = sorted(H)
    gens = [algebra.vertex(h) for h in members]
    ideal = IdealPresentation(algebra, gens, N)
    verdicts = {}
    for u in sorted(graph.vertices):
        target = algebra.vertex(u)
        if u in H:
            cert = MembershipCertificate(target, True, 0, tuple(_identity(u, members.index(u), algebra)),
                                         oracle_is_complete(graph, N))
        else:
            cert = membership_bounded(ideal, target, N)
            if not cert.found and not cert.complete:
                logger.warning(f"{u}: not found at bound {N} (bounded evidence only)")
        verdicts[u] = cert
    certs = {}
    seed_list = ()
    if seeds is not None:
        seed_list = tuple(sorted(graph.check_vertex(s) for s in seeds))
        certs = closure_certificates(algebra, seed_list)
    return GradedTrace(H, N, verdicts, certs, seed_list)

"""Exact polynomials and polynomial maps g -> V over Q and Q(i).

Polynomials are sympy ``PolyElement`` objects of a graded-lex ring in the
coordinates x0, ..., x(n-1) of the algebra; their term map (exponent tuple ->
coefficient) is the sparse representation used throughout. A ``PolyMap``
bundles one polynomial per coordinate of the target space.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial, prod

import numpy as np
from sympy import QQ, QQ_I, symbols
from sympy.polys.domains.gaussiandomains import GaussianElement, GaussianRational
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from liecov.errors import DimensionMismatch, InvalidInput

logger = logging.getLogger(__name__)


class Field(Enum):
    Q = 'Q'
    QI = 'Q(i)'

    @property
    def domain(self):
        return QQ if self is Field.Q else QQ_I

    @classmethod
    def of(cls, domain):
        return cls.QI if domain == QQ_I else cls.Q

    @staticmethod
    def join(*fields):
        return Field.QI if Field.QI in fields else Field.Q


@lru_cache(maxsize=None)
def poly_ring(nvars, field=Field.Q):
    return PolyRing(symbols(f'x0:{nvars}'), field.domain, grlex)


# -- scalars -----------------------------------------------------------------


def gaussian(real, imag=0):
    return GaussianRational(QQ.convert(real), QQ.convert(imag))


def scalar(value, field=Field.Q):
    """Convert ints, Fractions, strings and domain elements to a Scalar"""
    if isinstance(value, str):
        parsed, parsed_field = parse_scalar(value)
        return scalar(parsed, field) if parsed_field is Field.Q else _narrow(parsed, field)
    if isinstance(value, Fraction):
        value = QQ(value.numerator, value.denominator)
    if isinstance(value, GaussianElement):
        return _narrow(value, field)
    value = QQ.convert(value)
    return gaussian(value) if field is Field.QI else value


def _narrow(value, field):
    if field is Field.QI:
        return value
    if value.y:
        raise InvalidInput(f"{format_scalar(value)} is not rational")
    return value.x


def lift(value, domain):
    """View a rational as an element of ``domain``"""
    if domain == QQ_I and not isinstance(value, GaussianElement):
        return gaussian(value)
    return value


def conjugate(value):
    if isinstance(value, GaussianElement):
        return GaussianRational(value.x, -value.y)
    return value


def field_of(values):
    """Q(i) if any value is a Gaussian rational"""
    return Field.QI if any(isinstance(v, GaussianElement) for v in values) else Field.Q


def is_real(value):
    return not isinstance(value, GaussianElement) or not value.y


def format_rational(value):
    value = QQ.convert(value)
    numerator, denominator = int(value.numerator), int(value.denominator)
    return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"


def format_scalar(value):
    """Exact text form: ``p/q`` or ``p/q+r/si``"""
    if isinstance(value, GaussianElement):
        if not value.y:
            return format_rational(value.x)
        sign = '-' if value.y < 0 else '+'
        return f"{format_rational(value.x)}{sign}{format_rational(abs(value.y))}i"
    return format_rational(value)


def parse_rational(text):
    try:
        fraction = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not an exact rational: '{text}'")
    return QQ(fraction.numerator, fraction.denominator)


def parse_scalar(text):
    """Parse ``p/q`` or ``p/q+r/s i``; returns (value, Field)"""
    body = text.replace(' ', '')
    if not body.endswith('i'):
        return parse_rational(body), Field.Q
    body = body[:-1]
    split = max(body.rfind('+'), body.rfind('-'))
    if split > 0:
        real, imag = body[:split], body[split:]
    else:
        real, imag = '0', body
    if imag in ('', '+', '-'):
        imag += '1'
    return gaussian(parse_rational(real), parse_rational(imag)), Field.QI


def to_complex(value):
    if isinstance(value, GaussianElement):
        return complex(_to_float(value.x), _to_float(value.y))
    return _to_float(value)


def _to_float(value):
    value = QQ.convert(value)
    return int(value.numerator) / int(value.denominator)


# -- single polynomials --------------------------------------------------------


@lru_cache(maxsize=None)
def monomials(nvars, degree):
    """Exponent tuples of total degree ``degree``, graded-lex largest first"""
    result = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exponents = [0] * nvars
        for i in combo:
            exponents[i] += 1
        result.append(tuple(exponents))
    return tuple(sorted(result, key=grlex, reverse=True))


def total_degree(p):
    """Total degree; -1 for the zero polynomial"""
    return max((sum(m) for m in p.keys()), default=-1)


def is_homogeneous(p):
    return len({sum(m) for m in p.keys()}) <= 1


def homogeneous_parts(p):
    parts = {}
    for monom, coeff in p.items():
        parts.setdefault(sum(monom), {})[monom] = coeff
    return {d: p.ring.from_dict(terms) for d, terms in sorted(parts.items())}


def convert_poly(p, field):
    """Move ``p`` into the ring with the same variables over ``field``"""
    target = poly_ring(p.ring.ngens, field)
    if p.ring == target:
        return p
    if field is Field.QI:
        return target.from_dict({m: gaussian(c) for m, c in p.items()})
    return target.from_dict({m: _narrow(c, Field.Q) for m, c in p.items()})


def conjugate_poly(p):
    if p.ring.domain != QQ_I:
        return p
    return p.ring.from_dict({m: conjugate(c) for m, c in p.items()})


def evaluate_poly(p, values):
    domain = p.ring.domain
    total = domain.zero
    for monom, coeff in p.items():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term = term * v ** e
        total += term
    return total


def jet_value(p, point, alpha):
    """(d^alpha p)(point), exact"""
    derived = p
    for i, order in enumerate(alpha):
        for _ in range(order):
            derived = derived.diff(p.ring.gens[i])
            if not derived:
                return p.ring.domain.zero
    if not any(point):
        return derived.get(tuple([0] * p.ring.ngens), p.ring.domain.zero)
    values = [lift(v, p.ring.domain) for v in point]
    return evaluate_poly(derived, values)


def kappa_poly(algebra, field=Field.Q):
    """x -> kappa(x, x)"""
    ring = poly_ring(algebra.dim, field)
    gens = ring.gens
    total = ring.zero
    for i, row in enumerate(algebra.kappa_matrix):
        for j, value in enumerate(row):
            if value:
                total += gens[i] * gens[j] * lift(value, ring.domain)
    return total


# -- polynomial maps -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolyMap:
    """Vector-valued polynomial map with one exact polynomial per coordinate"""

    ring: PolyRing
    components: tuple

    def __post_init__(self):
        converted = []
        for component in self.components:
            if isinstance(component, PolyElement):
                if component.ring != self.ring:
                    component = convert_poly(component, Field.of(self.ring.domain))
            else:
                component = self.ring(component)
            converted.append(component)
        object.__setattr__(self, 'components', tuple(converted))

    def __repr__(self):
        return (f'<PolyMap {self.domain_dim}->{self.target_dim} '
                f'deg={self.degree} over {self.field.value}>')

    @property
    def domain_dim(self):
        return self.ring.ngens

    @property
    def target_dim(self):
        return len(self.components)

    @property
    def field(self):
        return Field.of(self.ring.domain)

    @property
    def degree(self):
        return max((total_degree(c) for c in self.components), default=-1)

    def is_zero(self):
        return not any(self.components)

    @property
    def homogeneous_degree(self):
        """Common degree of all nonzero components, or None"""
        degrees = set()
        for component in self.components:
            degrees.update(sum(m) for m in component.keys())
        return degrees.pop() if len(degrees) == 1 else None

    @property
    def is_homogeneous(self):
        return self.is_zero() or self.homogeneous_degree is not None

    def homogeneous_parts(self):
        parts = {}
        for k, component in enumerate(self.components):
            for d, piece in homogeneous_parts(component).items():
                parts.setdefault(d, [self.ring.zero] * self.target_dim)[k] = piece
        return {d: PolyMap(self.ring, tuple(c)) for d, c in sorted(parts.items())}

    def to_field(self, field):
        if field is self.field:
            return self
        ring = poly_ring(self.domain_dim, field)
        return PolyMap(ring, tuple(convert_poly(c, field) for c in self.components))

    def map_coefficients(self, fn):
        return PolyMap(self.ring, tuple(
            self.ring.from_dict({m: fn(c) for m, c in component.items()})
            for component in self.components
        ))

    def _unify(self, other):
        if other.domain_dim != self.domain_dim or other.target_dim != self.target_dim:
            raise DimensionMismatch(
                f"cannot combine {self!r} with {other!r}"
            )
        field = Field.join(self.field, other.field)
        return self.to_field(field), other.to_field(field)

    def __add__(self, other):
        a, b = self._unify(other)
        return PolyMap(a.ring, tuple(x + y for x, y in zip(a.components, b.components)))

    def __sub__(self, other):
        a, b = self._unify(other)
        return PolyMap(a.ring, tuple(x - y for x, y in zip(a.components, b.components)))

    def __neg__(self):
        return PolyMap(self.ring, tuple(-c for c in self.components))

    def __mul__(self, factor):
        """Multiply by a scalar or by a scalar polynomial"""
        target = self
        if isinstance(factor, PolyElement):
            if factor.ring.ngens != self.domain_dim:
                raise DimensionMismatch("polynomial factor has the wrong variables")
            field = Field.join(self.field, Field.of(factor.ring.domain))
            target = self.to_field(field)
            factor = convert_poly(factor, field)
        else:
            if isinstance(factor, GaussianElement) and factor.y:
                target = self.to_field(Field.QI)
            factor = scalar(factor, target.field)
        return PolyMap(target.ring, tuple(c * factor for c in target.components))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        try:
            a, b = self._unify(other)
        except DimensionMismatch:
            return False
        return all(x == y for x, y in zip(a.components, b.components))

    __hash__ = None


def zero_map(nvars, target_dim, field=Field.Q):
    ring = poly_ring(nvars, field)
    return PolyMap(ring, (ring.zero,) * target_dim)


def identity_map(nvars, field=Field.Q):
    ring = poly_ring(nvars, field)
    return PolyMap(ring, ring.gens)


def constant_map(vector, nvars, field=Field.Q):
    ring = poly_ring(nvars, field)
    return PolyMap(ring, tuple(ring(scalar(v, field)) for v in vector))


def linear_map(rows, field=Field.Q):
    """x -> A x for a matrix given by rows"""
    ring = poly_ring(len(rows[0]), field)
    gens = ring.gens
    return PolyMap(ring, tuple(
        sum((gens[j] * scalar(a, field) for j, a in enumerate(row) if a), ring.zero)
        for row in rows
    ))


def scalar_map(p):
    """A scalar polynomial as a map into a one-dimensional space"""
    return PolyMap(p.ring, (p,))


def evaluate(P, x):
    """Exact evaluation of a PolyMap at a point"""
    coords = tuple(x)
    if len(coords) != P.domain_dim:
        raise DimensionMismatch(
            f"point has {len(coords)} coordinates, map expects {P.domain_dim}"
        )
    if P.field is Field.Q and any(isinstance(c, GaussianElement) and c.y
                                  for c in coords):
        P = P.to_field(Field.QI)
    domain = P.ring.domain
    values = [scalar(c, P.field) for c in coords]
    return [evaluate_poly(c, values) if c else domain.zero for c in P.components]


def evaluate_numeric(P, points):
    """Floating evaluation at each row of ``points``; shape (k, target_dim)"""
    points = np.atleast_2d(np.asarray(points))
    complex_valued = P.field is Field.QI or np.iscomplexobj(points)
    out = np.zeros((points.shape[0], P.target_dim),
                   dtype=complex if complex_valued else float)
    for k, component in enumerate(P.components):
        if not component:
            continue
        exponents = np.array(list(component.keys()))
        coeffs = np.array([to_complex(c) for c in component.values()])
        powers = np.prod(points[:, None, :] ** exponents[None, :, :], axis=2)
        out[:, k] = powers @ coeffs
    return out


def directional_derivative(P, direction):
    """x -> dP_x(direction(x))"""
    if direction.domain_dim != P.domain_dim or direction.target_dim != P.domain_dim:
        raise DimensionMismatch(
            f"direction {direction!r} does not match map {P!r}"
        )
    field = Field.join(P.field, direction.field)
    P, direction = P.to_field(field), direction.to_field(field)
    gens = P.ring.gens
    result = []
    for component in P.components:
        total = P.ring.zero
        for i, gen in enumerate(gens):
            if not direction.components[i]:
                continue
            partial = component.diff(gen)
            if partial:
                total += partial * direction.components[i]
        result.append(total)
    return PolyMap(P.ring, tuple(result))


def apply_field(X, f):
    """Derivative of a function (Poly or PolyMap) along the vector field X"""
    if isinstance(f, PolyMap):
        return directional_derivative(f, X)
    if X.target_dim != f.ring.ngens or X.domain_dim != f.ring.ngens:
        raise DimensionMismatch(f"field {X!r} does not act on functions of "
                                f"{f.ring.ngens} variables")
    return directional_derivative(scalar_map(f), X).components[0]


def kappa_gradient(p, algebra):
    """The map grad p with kappa(grad p(x), y) = dp_x(y)"""
    if p.ring.ngens != algebra.dim:
        raise DimensionMismatch(
            f"polynomial in {p.ring.ngens} variables on {algebra.name}"
        )
    ring = p.ring
    partials = [p.diff(g) for g in ring.gens]
    inverse = algebra.kappa_inverse
    components = []
    for k in range(algebra.dim):
        total = ring.zero
        for i, partial in enumerate(partials):
            if partial and inverse[k][i]:
                total += partial * lift(inverse[k][i], ring.domain)
        components.append(total)
    return PolyMap(ring, tuple(components))


def tau_field(algebra, xi, field=Field.Q):
    """The adjoint vector field x -> [x, xi]"""
    ring = poly_ring(algebra.dim, field)
    gens = ring.gens
    components = [ring.zero] * algebra.dim
    for (i, j), column in algebra.bracket_table.items():
        if not xi[j]:
            continue
        for k, value in column.items():
            components[k] += gens[i] * lift(value * xi[j], ring.domain)
    return PolyMap(ring, tuple(components))


def bracket_map(algebra, X, Y):
    """x -> [X(x), Y(x)] for g-valued maps"""
    if X.target_dim != algebra.dim or Y.target_dim != algebra.dim:
        raise DimensionMismatch("bracket of maps not valued in the algebra")
    X, Y = X._unify(Y)
    components = [X.ring.zero] * algebra.dim
    for (i, j), column in algebra.bracket_table.items():
        a, b = X.components[i], Y.components[j]
        if not a or not b:
            continue
        product = a * b
        for k, value in column.items():
            components[k] += product * lift(value, X.ring.domain)
    return PolyMap(X.ring, tuple(components))


def kappa_pairing(algebra, X, Y):
    """x -> kappa(X(x), Y(x)) as a polynomial"""
    X, Y = X._unify(Y)
    total = X.ring.zero
    for i, row in enumerate(algebra.kappa_matrix):
        if not X.components[i]:
            continue
        for j, value in enumerate(row):
            if value and Y.components[j]:
                total += X.components[i] * Y.components[j] * lift(value, X.ring.domain)
    return total


class GradedIndex:
    """Column numbering of homogeneous degree-d maps by (monomial, component).

    Columns run graded-lex largest monomial first, so echelon forms computed
    on these coordinates have graded-lex leading terms as pivots.
    """

    def __init__(self, nvars, degree, target_dim, allowed=None):
        self.nvars = nvars
        self.degree = degree
        self.target_dim = target_dim
        self.keys = [
            (m, c)
            for m in monomials(nvars, degree)
            for c in range(target_dim)
            if allowed is None or allowed(m, c)
        ]
        self.position = {key: i for i, key in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def vector(self, P):
        """Coordinates of the degree-d part of P"""
        result = {}
        for c, component in enumerate(P.components):
            for monom, coeff in component.items():
                if sum(monom) != self.degree:
                    continue
                column = self.position.get((monom, c))
                if column is None:
                    raise InvalidInput(f"term {monom} in component {c} is outside "
                                       f"the index")
                result[column] = coeff
        return result

    def polymap(self, vector, field=Field.Q):
        ring = poly_ring(self.nvars, field)
        terms = [{} for _ in range(self.target_dim)]
        for column, coeff in vector.items():
            if coeff:
                monom, c = self.keys[column]
                terms[c][monom] = coeff
        return PolyMap(ring, tuple(ring.from_dict(t) for t in terms))


def monomial_value(monom):
    """alpha! for the pairing of d^alpha delta_0 with x^alpha"""
    return prod(factorial(e) for e in monom)

"""Point-supported V-valued distributions on g, paired with polynomial test maps.

A distribution here is a finite sum of terms coeff * d^alpha delta_p * v_c.
Such distributions have compact support, so they extend to polynomial test
functions independently of any cut-off, and their pairings with monomials
determine them. For a scalar test polynomial f,

    <T, f> = sum coeff * (d^alpha f)(p) v_c

is a vector of V; for a test map f whose components are read in the dual
basis of V the pairing is the scalar sum coeff * (d^alpha f_c)(p).

Covariance is the infinitesimal form of <g.T, f> = pi(g) <T, g^-1 . f>:

    pi(xi) <T, f> + <T, D_xi f> = 0,   D_xi f(x) = df_x([xi, x]).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

from sympy import QQ
from sympy.polys.domains.gaussiandomains import GaussianElement

from liecov import linalg
from liecov.covariants import CovariantBasis, drift_terms, weight_filter
from liecov.errors import (
    ConsistencyFailure,
    DimensionMismatch,
    InvalidInput,
    NoFactorization,
    NotCovariant,
)
from liecov.polyalg import (
    Field,
    GradedIndex,
    PolyMap,
    apply_field,
    bracket_map,
    field_of,
    identity_map,
    jet_value,
    lift,
    monomial_value,
    monomials,
    poly_ring,
    tau_field,
)
from liecov.rep import trivial_rep

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PointDistribution:
    nvars: int
    target_dim: int
    terms: tuple

    @classmethod
    def from_terms(cls, nvars, target_dim, items):
        """Build from (point, alpha, component, coeff) entries, merging repeats"""
        combined = {}
        for point, alpha, component, coeff in items:
            point = tuple(QQ.convert(v) for v in point)
            alpha = tuple(int(a) for a in alpha)
            if len(point) != nvars or len(alpha) != nvars:
                raise DimensionMismatch(
                    f"term at {point} with multi-index {alpha} in {nvars} variables"
                )
            if not 0 <= component < target_dim or min(alpha, default=0) < 0:
                raise InvalidInput(f"bad component {component} or multi-index {alpha}")
            key = (point, alpha, component)
            combined.setdefault(key, []).append(coeff)
        values = [c for group in combined.values() for c in group]
        domain = field_of(values).domain
        totals = {
            key: _narrowed(sum((lift(_rational(c), domain) for c in group), domain.zero))
            for key, group in combined.items()
        }
        terms = tuple(sorted(
            ((key, value) for key, value in totals.items() if value),
            key=lambda item: (item[0][0], tuple(-a for a in item[0][1]), item[0][2]),
        ))
        return cls(nvars, target_dim, terms)

    def __repr__(self):
        return (f'<PointDistribution {len(self.terms)} terms order={self.order} '
                f'dim={self.target_dim}>')

    def items(self):
        for (point, alpha, component), coeff in self.terms:
            yield point, alpha, component, coeff

    @property
    def order(self):
        return max((sum(alpha) for _, alpha, _, _ in self.items()), default=0)

    @property
    def orders(self):
        return sorted({sum(alpha) for _, alpha, _, _ in self.items()})

    @property
    def field(self):
        return field_of(coeff for *_, coeff in self.items())

    def is_zero(self):
        return not self.terms

    @property
    def at_origin(self):
        return all(not any(point) for point, *_ in self.items())

    def _check(self, other):
        if (other.nvars, other.target_dim) != (self.nvars, self.target_dim):
            raise DimensionMismatch("distributions live on different spaces")

    def __add__(self, other):
        self._check(other)
        return PointDistribution.from_terms(
            self.nvars, self.target_dim, list(self.items()) + list(other.items()))

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, factor):
        return PointDistribution.from_terms(
            self.nvars, self.target_dim,
            [(p, a, c, factor * v) for p, a, c, v in self.items()])

    def moments(self):
        """{order k: {(beta, c): <T, x^beta>_c}} for a distribution at the origin"""
        if not self.at_origin:
            raise InvalidInput("moments are defined for distributions at the origin")
        result = {}
        for _, alpha, component, coeff in self.items():
            result.setdefault(sum(alpha), {})[(alpha, component)] = (
                coeff * monomial_value(alpha))
        return result

    def __eq__(self, other):
        if not isinstance(other, PointDistribution):
            return NotImplemented
        return (self.nvars, self.target_dim, self.terms) == (
            other.nvars, other.target_dim, other.terms)

    __hash__ = None


def _rational(value):
    return value if isinstance(value, GaussianElement) else QQ.convert(value)


def _narrowed(value):
    if isinstance(value, GaussianElement) and not value.y:
        return value.x
    return value


def delta(nvars, point=None, alpha=None, component=0, target_dim=1, coeff=1):
    """coeff * d^alpha delta_point * v_component"""
    point = point if point is not None else (0,) * nvars
    alpha = alpha if alpha is not None else (0,) * nvars
    return PointDistribution.from_terms(
        nvars, target_dim, [(point, alpha, component, QQ.convert(coeff))])


def _jet(p, point, alpha):
    if not any(point):
        value = p.get(alpha)
        return value * monomial_value(alpha) if value else p.ring.domain.zero
    return jet_value(p, point, alpha)


def pair(T, f):
    """<T, f>: a vector for scalar test polynomials, a scalar for test maps"""
    if isinstance(f, PolyMap):
        if f.domain_dim != T.nvars:
            raise DimensionMismatch(f"test map on {f.domain_dim} variables, "
                                    f"distribution on {T.nvars}")
        if f.target_dim != T.target_dim:
            raise DimensionMismatch(
                f"test map with {f.target_dim} components against a "
                f"distribution valued in dimension {T.target_dim}"
            )
        domain = Field.join(f.field, T.field).domain
        total = domain.zero
        for point, alpha, component, coeff in T.items():
            if f.components[component]:
                total += lift(coeff, domain) * lift(
                    _jet(f.components[component], point, alpha), domain)
        return total
    if f.ring.ngens != T.nvars:
        raise DimensionMismatch(f"test polynomial in {f.ring.ngens} variables")
    domain = Field.join(Field.of(f.ring.domain), T.field).domain
    result = [domain.zero] * T.target_dim
    if not f:
        return result
    for point, alpha, component, coeff in T.items():
        result[component] += lift(coeff, domain) * lift(_jet(f, point, alpha), domain)
    return result


def _multi_binomial(alpha, beta):
    value = 1
    for a, b in zip(alpha, beta):
        value *= comb(a, b)
    return value


def theta_chi(theta, chi):
    """The V-valued distribution <theta chi, f> = sum_k <theta, f chi_k> v_k"""
    if theta.target_dim != 1:
        raise DimensionMismatch("theta must be a scalar distribution")
    if chi.domain_dim != theta.nvars:
        raise DimensionMismatch(f"{chi!r} does not live on {theta.nvars} variables")
    items = []
    for point, alpha, _, coeff in theta.items():
        for beta in product(*(range(a + 1) for a in alpha)):
            rest = tuple(a - b for a, b in zip(alpha, beta))
            weight = _multi_binomial(alpha, beta)
            for k, component in enumerate(chi.components):
                if not component:
                    continue
                value = _jet(component, point, rest)
                if value:
                    items.append((point, beta, k, coeff * weight * value))
    return PointDistribution.from_terms(theta.nvars, chi.target_dim, items)


@dataclass(frozen=True)
class CovarianceDefect:
    """Nonzero defects pi(xi_j) <T, x^beta> + <T, D_j x^beta>, keyed by (j, beta)"""

    entries: dict
    test_degree: int

    @property
    def is_zero(self):
        return not self.entries


def covariance_defect(T, rep, test_degree=None):
    """Defect against every monomial test function up to ``test_degree``.

    The default degree order(T) + 1 is enough to decide covariance.
    """
    algebra = rep.algebra
    if T.nvars != algebra.dim or T.target_dim != rep.target_dim:
        raise DimensionMismatch(f"{T!r} does not match {rep!r}")
    if test_degree is None:
        test_degree = T.order + 1
    field = T.field
    ring = poly_ring(algebra.dim, field)
    domain = field.domain
    drifts = [-tau_field(algebra, e, field) for e in algebra.basis]
    orders = set(T.orders)
    entries = {}
    for degree in range(test_degree + 1):
        if T.at_origin and degree not in orders:
            continue
        for beta in monomials(algebra.dim, degree):
            f = ring.from_dict({beta: domain.one})
            base = pair(T, f)
            for j, matrix in enumerate(rep.matrices):
                moved = pair(T, apply_field(drifts[j], f))
                value = [
                    moved[a] + sum((lift(matrix[a][c], domain) * base[c]
                                    for c in range(rep.target_dim) if matrix[a][c]),
                                   domain.zero)
                    for a in range(rep.target_dim)
                ]
                if any(value):
                    entries[(j, beta)] = tuple(value)
    return CovarianceDefect(entries, test_degree)


def is_covariant(T, rep):
    return covariance_defect(T, rep).is_zero


@lru_cache(maxsize=None)
def _covariant_moments(rep, order):
    """Kernel of the covariance equations on the moments u_(beta, c), |beta| = order"""
    algebra = rep.algebra
    allowed, solved = weight_filter(rep, sign=-1)
    index = GradedIndex(algebra.dim, order, rep.target_dim, allowed)
    if not len(index):
        return index, ()
    drift = drift_terms(algebra)
    equations = [j for j in range(algebra.dim) if j not in solved]
    rows = {}
    columns = []
    for gamma, a in index.keys:
        column = {}
        for j in equations:
            for k, i, value in drift[j]:
                beta = list(gamma)
                beta[k] += 1
                beta[i] -= 1
                if beta[i] < 0:
                    continue
                _add(column, rows, (j, tuple(beta), a), beta[k] * value)
            for b, value in rep.columns[j][a].items():
                _add(column, rows, (j, gamma, b), value)
        columns.append(column)
    system = linalg.transpose_columns(columns, len(rows))
    kernel = linalg.kernel(system, len(index), QQ)
    basis, _ = linalg.echelon(kernel, len(index), QQ)
    logger.debug(f"{rep.label} order {order}: {len(basis)} covariant distributions")
    return index, tuple(basis)


def _add(column, rows, key, value):
    row = rows.setdefault(key, len(rows))
    updated = column[row] + value if row in column else value
    if updated:
        column[row] = updated
    else:
        column.pop(row, None)


def _from_moments(nvars, target_dim, moments):
    origin = (0,) * nvars
    return PointDistribution.from_terms(nvars, target_dim, [
        (origin, beta, c, u / monomial_value(beta))
        for (beta, c), u in moments.items() if u
    ])


def covariant_point_space(rep, order):
    """Basis of the covariant distributions at 0 of order <= ``order``.

    The homogeneous order-k part of a covariant distribution at 0 is itself
    covariant, so the basis is the union of the per-order bases.
    """
    basis = []
    for k in range(order + 1):
        index, vectors = _covariant_moments(rep, k)
        for vector in vectors:
            moments = {index.keys[col]: value for col, value in vector.items()}
            basis.append(_from_moments(rep.algebra.dim, rep.target_dim, moments))
    return basis


def invariant_point_space(algebra, order):
    return covariant_point_space(trivial_rep(algebra), order)


def lower_with_kappa(f, algebra):
    """Read a g-valued map as g*-valued through kappa"""
    if f.target_dim != algebra.dim:
        raise DimensionMismatch(f"{f!r} is not valued in {algebra.name}")
    domain = f.ring.domain
    components = []
    for row in algebra.kappa_matrix:
        total = f.ring.zero
        for b, value in enumerate(row):
            if value and f.components[b]:
                total += f.components[b] * lift(value, domain)
        components.append(total)
    return PolyMap(f.ring, tuple(components))


def kernel_orthogonality_check(T, phi, rep):
    """<T, x -> [x, phi(x)]> for a covariant g-valued T; zero for every phi"""
    algebra = rep.algebra
    if rep.target_dim != algebra.dim:
        raise DimensionMismatch("kernel orthogonality needs g-valued distributions")
    defect = covariance_defect(T, rep)
    if not defect.is_zero:
        raise NotCovariant(f"distribution has {len(defect.entries)} nonzero defects")
    f = bracket_map(algebra, identity_map(algebra.dim, phi.field), phi)
    return pair(T, lower_with_kappa(f, algebra))


@dataclass(frozen=True, eq=False)
class Factorization:
    """Scalar distributions theta_i with T = sum_i theta_i F_i"""

    thetas: tuple
    family: tuple
    invariant: bool
    invariant_solution_exists: bool

    def reconstruct(self, target_dim):
        nvars = self.family[0].domain_dim if self.family else 0
        total = PointDistribution.from_terms(nvars, target_dim, [])
        for theta, F in zip(self.thetas, self.family):
            total = total + theta_chi(theta, F)
        return total

    @property
    def supported_at_origin(self):
        return all(theta.at_origin for theta in self.thetas)


def support_remark(T, factorization):
    """A distribution supported at 0 factors through thetas supported at 0"""
    return not T.at_origin or factorization.supported_at_origin


def _solve_factors(T, family, algebra, invariant):
    """Moments w_(i, alpha) = <theta_i, x^alpha> solving sum theta_i F_i = T"""
    field = Field.join(T.field, *(F.field for F in family))
    domain = field.domain
    family_terms = [
        [(c, mu, coeff) for c, component in enumerate(F.components)
         for mu, coeff in component.items()]
        for F in family
    ]
    drift = drift_terms(algebra)
    allowed, solved = weight_filter(trivial_rep(algebra), sign=1)
    equations = [j for j in range(algebra.dim) if not invariant or j not in solved]
    solution = {}
    for order, targets in T.moments().items():
        rows, columns, owners = {}, [], []
        for i, F in enumerate(family):
            degree = order + F.degree
            for alpha in monomials(algebra.dim, degree):
                if invariant and allowed is not None and not allowed(alpha, 0):
                    continue
                column = {}
                for c, mu, coeff in family_terms[i]:
                    beta = tuple(a - m for a, m in zip(alpha, mu))
                    if min(beta) < 0:
                        continue
                    _add(column, rows, ('pairing', beta, c), lift(coeff, domain))
                if invariant:
                    for j in equations:
                        for k, s, value in drift[j]:
                            beta = list(alpha)
                            beta[k] += 1
                            beta[s] -= 1
                            if beta[s] < 0:
                                continue
                            _add(column, rows, ('invariance', i, j, tuple(beta)),
                                 lift(beta[k] * value, domain))
                columns.append(column)
                owners.append((i, alpha))
        for key in targets:
            rows.setdefault(('pairing',) + key, len(rows))
        system = linalg.transpose_columns(columns, len(rows))
        rhs = [domain.zero] * len(rows)
        for (beta, c), u in targets.items():
            rhs[rows[('pairing', beta, c)]] = lift(u, domain)
        values = linalg.solve(system, rhs, len(columns), domain)
        if values is None:
            return None
        for column, value in values.items():
            solution[owners[column]] = value
    return solution


def factor_point_distribution(T, gens, rep, invariant=None):
    """Scalar theta_i with T = sum_i theta_i F_i.

    ``gens`` is either the invariant generators, F_i being the gradient
    covariants q_i (V = g), or a one-generator Kostant basis, F = P. By default
    theta is required to be invariant only in the second case; otherwise the
    result records whether an invariant solution exists at the searched orders.
    """
    if isinstance(gens, CovariantBasis):
        family = gens.generators
        invariant = True if invariant is None else invariant
    else:
        family = gens.qmaps
        invariant = False if invariant is None else invariant
    algebra = rep.algebra
    if not T.at_origin:
        raise InvalidInput("factorization needs a distribution supported at 0")
    defect = covariance_defect(T, rep)
    if not defect.is_zero:
        raise NotCovariant(f"distribution has {len(defect.entries)} nonzero defects")
    solution = _solve_factors(T, family, algebra, invariant)
    if solution is None:
        raise NoFactorization(
            f"no {'invariant ' if invariant else ''}factorization of {T!r} through "
            f"{len(family)} maps",
            orders=T.orders,
        )
    exists = invariant or _solve_factors(T, family, algebra, True) is not None
    origin = (0,) * algebra.dim
    thetas = tuple(
        PointDistribution.from_terms(algebra.dim, 1, [
            (origin, alpha, 0, value / monomial_value(alpha))
            for (owner, alpha), value in solution.items() if owner == i
        ])
        for i in range(len(family))
    )
    factorization = Factorization(thetas, tuple(family), invariant, exists)
    if factorization.reconstruct(rep.target_dim) != T:
        raise NoFactorization("factorization does not reconstruct the distribution")
    if not support_remark(T, factorization):
        raise ConsistencyFailure("thetas of a distribution at 0 left the origin")
    logger.info(f"factored {T!r}; invariant solution exists: {exists}")
    return factorization

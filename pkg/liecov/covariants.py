"""Covariant polynomial maps, invariant polynomials and Kostant module bases.

A map P: g -> V is covariant when dP_x([xi, x]) = pi(xi) P(x) for every xi,
the derivative at t = 0 of P(Ad(exp t xi) x) = pi(exp t xi) P(x). The adjoint
group is connected, so this infinitesimal condition is equivalent to the
global one. Covariants are solved one homogeneous degree at a time as the
kernel of a sparse exact linear system.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from sympy import QQ

from liecov import linalg
from liecov.errors import (
    ConsistencyFailure,
    DegreeBoundExceeded,
    DimensionMismatch,
    NotRegular,
    RankMismatch,
)
from liecov.polyalg import (
    Field,
    GradedIndex,
    PolyMap,
    directional_derivative,
    evaluate,
    field_of,
    kappa_gradient,
    lift,
    poly_ring,
    scalar_map,
    tau_field,
    total_degree,
)
from liecov.rep import dual_rep, trivial_rep, zero_weight_multiplicity

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class InvariantGenerators:
    """Homogeneous invariant generators p_i and their kappa-gradients q_i"""

    algebra: object
    gens: tuple
    qmaps: tuple

    @property
    def degrees(self):
        return tuple(total_degree(p) for p in self.gens)

    @property
    def q_degrees(self):
        return tuple(q.degree for q in self.qmaps)


@dataclass(frozen=True, eq=False)
class CovariantBasis:
    """Homogeneous generators of the covariant module, one per zero weight"""

    rep: object
    generators: tuple
    degrees: tuple
    degree_bound_used: int

    @property
    def r(self):
        return len(self.generators)

    @property
    def algebra(self):
        return self.rep.algebra


# -- the covariance system ----------------------------------------------------


@lru_cache(maxsize=None)
def drift_terms(algebra):
    """For each basis xi_j, the triples (k, i, c) with [e_j, e_i] = ... + c e_k"""
    terms = [[] for _ in range(algebra.dim)]
    for (j, i), column in algebra.bracket_table.items():
        for k, value in column.items():
            terms[j].append((k, i, value))
    return tuple(tuple(t) for t in terms)


def weight_filter(rep, sign=1):
    """Predicate on (monomial, component) from Cartan weights, or None.

    With diagonal Cartan action a term x^m v_c survives the Cartan equations
    only if sum_i m_i lambda_i == sign * mu_c. Returns (predicate, Cartan
    equation indices that the predicate already solves).
    """
    coordinate_weights = rep.algebra.cartan_weights
    vector_weights = rep.cartan_weights
    if coordinate_weights is None or vector_weights is None:
        return None, frozenset()
    rank = rep.algebra.rank

    def allowed(monomial, component):
        target = vector_weights[component]
        for h in range(rank):
            total = sum((e * coordinate_weights[i][h] for i, e in enumerate(monomial) if e),
                        QQ.zero)
            if total != sign * target[h]:
                return False
        return True

    return allowed, frozenset(rep.algebra.cartan_indices)


def _accumulate(column, rows, key, value):
    row = rows.setdefault(key, len(rows))
    updated = column.get(row, QQ.zero) + value
    if updated:
        column[row] = updated
    else:
        column.pop(row, None)


@lru_cache(maxsize=None)
def _covariant_vectors(rep, degree):
    algebra = rep.algebra
    allowed, solved = weight_filter(rep)
    index = GradedIndex(algebra.dim, degree, rep.target_dim, allowed)
    if not len(index):
        return index, ()
    drift = drift_terms(algebra)
    equations = [j for j in range(algebra.dim) if j not in solved]
    rows = {}
    columns = []
    for monomial, component in index.keys:
        column = {}
        for j in equations:
            for k, i, value in drift[j]:
                if not monomial[k]:
                    continue
                image = list(monomial)
                image[k] -= 1
                image[i] += 1
                _accumulate(column, rows, (j, tuple(image), component),
                            monomial[k] * value)
            for a, value in rep.columns[j][component].items():
                _accumulate(column, rows, (j, monomial, a), -value)
        columns.append(column)
    system = linalg.transpose_columns(columns, len(rows))
    logger.debug(f"{rep.label} degree {degree}: {len(rows)} equations, "
                 f"{len(index)} unknowns")
    kernel = linalg.kernel(system, len(index), QQ)
    basis, _ = linalg.echelon(kernel, len(index), QQ)
    return index, tuple(basis)


def equivariance_defect(P, rep):
    """One map per basis element xi_j: x -> dP_x([xi_j, x]) - pi(xi_j) P(x)"""
    algebra = rep.algebra
    if P.target_dim != rep.target_dim or P.domain_dim != algebra.dim:
        raise DimensionMismatch(f"{P!r} is not a map {algebra.name} -> {rep.label}")
    defects = []
    for j, xi in enumerate(algebra.basis):
        drift = -tau_field(algebra, xi, P.field)
        defects.append(directional_derivative(P, drift) - act(rep.matrices[j], P))
    return defects


def act(matrix, P):
    """x -> A P(x)"""
    domain = P.ring.domain
    components = []
    for row in matrix:
        total = P.ring.zero
        for b, value in enumerate(row):
            if value and P.components[b]:
                total += P.components[b] * lift(value, domain)
        components.append(total)
    return PolyMap(P.ring, tuple(components))


def is_covariant(P, rep):
    return all(d.is_zero() for d in equivariance_defect(P, rep))


def covariant_space(rep, degree):
    """Echelon basis of the homogeneous degree-d covariants g -> V"""
    if degree < 0:
        return []
    index, basis = _covariant_vectors(rep, degree)
    return [index.polymap(v) for v in basis]


@lru_cache(maxsize=None)
def _invariants(algebra, degree):
    return tuple(P.components[0] for P in covariant_space(trivial_rep(algebra), degree))


def invariant_space(algebra, degree):
    """Echelon basis of the homogeneous degree-d invariant polynomials"""
    return list(_invariants(algebra, degree)) if degree >= 0 else []


def _products(factors, degree, one):
    """Products of (poly, degree) factors, with repetition, of total ``degree``"""
    result = []

    def extend(start, remaining, current):
        if remaining == 0:
            result.append(current)
            return
        for i in range(start, len(factors)):
            poly, d = factors[i]
            if d <= remaining:
                extend(i, remaining - d, current * poly)

    extend(0, degree, one)
    return result


def _new_modulo(candidates, spanned, ncols):
    """Echelon basis of span(candidates) modulo span(spanned)"""
    reduced, pivots = linalg.echelon(spanned, ncols, QQ)
    residues = [linalg.reduce_vector(v, reduced, pivots) for v in candidates]
    residues = [v for v in residues if v]
    return linalg.echelon(residues, ncols, QQ)[0]


def invariant_generators(algebra, degree_bound):
    """rank-many homogeneous invariants, none a polynomial in the earlier ones"""
    ring = poly_ring(algebra.dim)
    found = []
    for degree in range(1, degree_bound + 1):
        if len(found) >= algebra.rank:
            break
        space = invariant_space(algebra, degree)
        if not space:
            continue
        index = GradedIndex(algebra.dim, degree, 1)
        products = [index.vector(scalar_map(p)) for p in _products(found, degree, ring.one)]
        candidates = [index.vector(scalar_map(p)) for p in space]
        for vector in _new_modulo(candidates, products, len(index)):
            p = index.polymap(vector).components[0]
            found.append((p, degree))
            logger.info(f"{algebra.name}: invariant generator of degree {degree}")
    if len(found) > algebra.rank:
        raise RankMismatch(
            f"{algebra.name}: {len(found)} invariant generators for rank {algebra.rank}"
        )
    if len(found) < algebra.rank:
        raise DegreeBoundExceeded(
            f"{algebra.name}: only {len(found)} of {algebra.rank} invariant "
            f"generators up to degree {degree_bound}",
            degrees=[d for _, d in found],
        )
    gens = tuple(p for p, _ in found)
    return InvariantGenerators(algebra, gens, tuple(kappa_gradient(p, algebra) for p in gens))


def _degree_spaces(rep, degree_bound, threads):
    if threads <= 1:
        for degree in range(degree_bound + 1):
            yield degree, _covariant_vectors(rep, degree)
        return
    pool = ThreadPoolExecutor(max_workers=threads)
    try:
        futures = [pool.submit(_covariant_vectors, rep, d) for d in range(degree_bound + 1)]
        for degree, future in enumerate(futures):
            yield degree, future.result()
    finally:
        pool.shutdown(wait=True, cancel_futures=True)


def kostant_basis(rep, degree_bound, threads=1):
    """Homogeneous module basis of the covariants g -> V.

    Degrees are scanned upwards; in degree d the new generators are the echelon
    basis of the covariants modulo products Q * P of positive-degree invariants
    with generators already chosen. The scan stops as soon as r generators are
    known, r being the zero-weight multiplicity.
    """
    algebra = rep.algebra
    r = zero_weight_multiplicity(rep)
    if r == 0:
        logger.info(f"{rep.label}: zero weight does not occur, the module is zero")
        return CovariantBasis(rep, (), (), 0)
    generators = []
    used = 0
    for degree, (index, space) in _degree_spaces(rep, degree_bound, threads):
        used = degree
        if not space:
            continue
        products = [
            index.vector(P * Q)
            for P in generators
            for Q in invariant_space(algebra, degree - P.degree)
            if degree - P.degree >= 1
        ]
        quotient = len(space) - linalg.rank(products, len(index), QQ)
        if quotient <= 0:
            continue
        new = _new_modulo(space, products, len(index))
        if len(new) != quotient:
            raise ConsistencyFailure(
                f"{rep.label} degree {degree}: expected {quotient} new generators, "
                f"found {len(new)}"
            )
        for vector in new:
            generators.append(index.polymap(vector))
            logger.info(f"{algebra.name}/{rep.label}: generator of degree {degree}")
        if len(generators) > r:
            raise RankMismatch(
                f"{rep.label}: {len(generators)} independent generators but the "
                f"zero weight has multiplicity {r}",
                degree=degree,
            )
        if len(generators) == r:
            break
    if len(generators) < r:
        raise DegreeBoundExceeded(
            f"{rep.label}: {len(generators)} of {r} generators up to degree "
            f"{degree_bound}",
            degree_bound=degree_bound,
        )
    degrees = tuple(P.degree for P in generators)
    return CovariantBasis(rep, tuple(generators), degrees, used)


def module_relations(basis, degree):
    """Dimension of the relations sum Q_i P_i = 0 in degree ``degree``"""
    algebra = basis.algebra
    index = GradedIndex(algebra.dim, degree, basis.rep.target_dim)
    field = Field.join(*(P.field for P in basis.generators))
    columns = []
    for P, d in zip(basis.generators, basis.degrees):
        if degree - d < 0:
            continue
        for Q in invariant_space(algebra, degree - d):
            columns.append(index.vector(P.to_field(field) * Q))
    return len(columns) - linalg.rank(columns, len(index), field.domain)


def is_free_through(basis, max_degree):
    """No nontrivial invariant relation among the generators up to ``max_degree``"""
    return all(module_relations(basis, d) == 0 for d in range(max_degree + 1))


# -- pointwise properties -----------------------------------------------------


def _domain_of(vectors):
    return field_of(c for v in vectors for c in v).domain


def _apply_lifted(matrix, vector, domain):
    return [
        sum((lift(row[b], domain) * vector[b] for b in range(len(vector))
             if row[b] and vector[b]), domain.zero)
        for row in matrix
    ]


def pointwise_fixed_space(rep, x):
    """Basis of V^{g^x}: vectors killed by pi(z) for every z centralizing x"""
    rows = []
    for z in rep.algebra.centralizer(x):
        rows.extend(dict(enumerate(row)) for row in rep.matrix_of(z))
    kernel = linalg.kernel(rows, rep.target_dim, QQ)
    return [[v.get(a, QQ.zero) for a in range(rep.target_dim)] for v in kernel]


def is_pointwise_fixed(rep, x, v):
    if len(v) != rep.target_dim:
        raise DimensionMismatch(f"vector of length {len(v)} for {rep!r}")
    domain = _domain_of([v])
    vector = [lift(c, domain) for c in v]
    for z in rep.algebra.centralizer(x):
        if any(_apply_lifted(rep.matrix_of(z), vector, domain)):
            return False
    return True


def verify_k2(basis, x):
    """P_1(x), ..., P_r(x) is a basis of V^{g^x} at the regular element x"""
    rep = basis.rep
    if not rep.algebra.is_regular(x):
        raise NotRegular(f"{tuple(x)} is not regular in {rep.algebra.name}")
    values = [evaluate(P, x) for P in basis.generators]
    fixed = pointwise_fixed_space(rep, x)
    if len(fixed) != len(values):
        logger.warning(f"fixed space has dimension {len(fixed)}, basis has "
                       f"{len(values)} generators")
        return False
    if not all(is_pointwise_fixed(rep, x, v) for v in values):
        return False
    domain = _domain_of(values)
    rows = [{a: lift(c, domain) for a, c in enumerate(v) if c} for v in values]
    return linalg.rank(rows, rep.target_dim, domain) == len(values)


def dual_basis(basis, threads=1):
    """Kostant basis of the dual representation, searched to the same degree"""
    return kostant_basis(dual_rep(basis.rep), max(basis.degree_bound_used, 1),
                         threads=threads)

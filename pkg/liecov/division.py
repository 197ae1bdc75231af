"""Decomposition over a Kostant basis, tangency and division of vector fields."""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import QQ

from liecov import linalg
from liecov.covariants import equivariance_defect, invariant_generators, invariant_space
from liecov.errors import (
    ConsistencyFailure,
    DegreeBoundExceeded,
    DimensionMismatch,
    NotCovariant,
    NotInModule,
    NotPointwiseFixed,
    NotRegular,
    NotTangent,
)
from liecov.polyalg import (
    Field,
    GradedIndex,
    bracket_map,
    convert_poly,
    evaluate,
    evaluate_numeric,
    identity_map,
    kappa_pairing,
    lift,
    poly_ring,
    to_complex,
    zero_map,
)

logger = logging.getLogger(__name__)

INPUT_TOLERANCE = 1e-6
RESIDUAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Decomposition:
    coefficients: tuple
    basis_ref: object

    def reconstruct(self):
        """sum_i Q_i P_i"""
        basis = self.basis_ref
        total = zero_map(basis.algebra.dim, basis.rep.target_dim)
        for Q, P in zip(self.coefficients, basis.generators):
            if Q:
                total = total + P * Q
        return total


@dataclass(frozen=True)
class PointwiseDecomposition:
    points: tuple
    coeff_values: tuple
    residuals: tuple

    @property
    def max_residual(self):
        return max(self.residuals, default=0.0)


def solve_module_coefficients(P, family, algebra):
    """Invariant polynomials Q_i with sum_i Q_i F_i == P, or None.

    ``family`` holds homogeneous maps F_i; each homogeneous part of P of
    degree d is solved separately over the products (degree d - deg F_i
    invariant basis) * F_i. Free unknowns are set to zero.
    """
    field = Field.join(P.field, *(F.field for F in family))
    ring = poly_ring(algebra.dim, field)
    domain = field.domain
    coefficients = [ring.zero] * len(family)
    for degree, part in P.homogeneous_parts().items():
        index = GradedIndex(algebra.dim, degree, P.target_dim)
        columns, owners = [], []
        for i, F in enumerate(family):
            if F.is_zero() or degree - F.degree < 0:
                continue
            for Q in invariant_space(algebra, degree - F.degree):
                columns.append(index.vector(F.to_field(field) * Q))
                owners.append((i, Q))
        rhs = index.vector(part.to_field(field))
        rows = linalg.transpose_columns(columns, len(index))
        values = [rhs.get(row, domain.zero) for row in range(len(index))]
        solution = linalg.solve(rows, values, len(columns), domain)
        if solution is None:
            logger.debug(f"degree {degree} part is outside the span of the family")
            return None
        for column, value in solution.items():
            i, Q = owners[column]
            coefficients[i] += convert_poly(Q, field) * value
    return coefficients


def kostant_decompose(P, basis):
    """Unique invariant coefficients Q_i with P = sum_i Q_i P_i"""
    defects = equivariance_defect(P, basis.rep)
    nonzero = [j for j, d in enumerate(defects) if not d.is_zero()]
    if nonzero:
        raise NotCovariant(
            f"map is not covariant for {basis.rep.label}",
            basis_elements=nonzero,
        )
    coefficients = solve_module_coefficients(P, basis.generators, basis.algebra)
    if coefficients is None:
        raise NotInModule(f"covariant map is not in the span of the {basis.r} "
                          f"generators")
    decomposition = Decomposition(tuple(coefficients), basis)
    if decomposition.reconstruct() != P:
        raise ConsistencyFailure("decomposition does not reconstruct the input")
    return decomposition


def tangency_defect(X, gens):
    """x -> kappa(q_i(x), X(x)) for each gradient covariant q_i"""
    algebra = gens.algebra
    if X.target_dim != algebra.dim or X.domain_dim != algebra.dim:
        raise DimensionMismatch(f"{X!r} is not a vector field on {algebra.name}")
    return [kappa_pairing(algebra, q, X) for q in gens.qmaps]


def _bracket_columns(algebra, index_in, index_out):
    """Columns of Y -> (x -> [x, Y(x)]) on homogeneous coordinates"""
    position = {key: i for i, key in enumerate(index_out.keys)}
    columns = []
    for monomial, c in index_in.keys:
        column = {}
        for i in range(algebra.dim):
            bracket = algebra.bracket_table.get((i, c))
            if not bracket:
                continue
            image = list(monomial)
            image[i] += 1
            image = tuple(image)
            for k, value in bracket.items():
                row = position[(image, k)]
                column[row] = column.get(row, QQ.zero) + value
        columns.append({r: v for r, v in column.items() if v})
    return columns


def dixmier_divide(X, gens, degree_bound):
    """Polynomial Y with [x, Y(x)] == X(x) for a field X tangent to the orbits.

    The bracket with x raises degrees by one, so each homogeneous part of X of
    degree d is divided separately by a homogeneous Y of degree d - 1; mixed
    degrees cannot help. Among the solutions the echelon one, with free
    unknowns set to zero, is returned.
    """
    algebra = gens.algebra
    defects = tangency_defect(X, gens)
    for i, delta in enumerate(defects):
        if delta:
            raise NotTangent(
                f"field is not tangent to adjoint orbits: component {i} of the "
                f"defect is nonzero",
                component=i,
                defect=delta.as_expr(),
            )
    field = X.field
    domain = field.domain
    Y = zero_map(algebra.dim, algebra.dim, field)
    for degree, part in X.homogeneous_parts().items():
        if degree - 1 > degree_bound or degree == 0:
            raise DegreeBoundExceeded(
                f"no polynomial Y for the degree {degree} part within degree "
                f"{degree_bound}",
                degree=degree,
            )
        index_in = GradedIndex(algebra.dim, degree - 1, algebra.dim)
        index_out = GradedIndex(algebra.dim, degree, algebra.dim)
        columns = [
            {r: lift(v, domain) for r, v in c.items()}
            for c in _bracket_columns(algebra, index_in, index_out)
        ]
        rows = linalg.transpose_columns(columns, len(index_out))
        rhs = index_out.vector(part)
        values = [rhs.get(r, domain.zero) for r in range(len(index_out))]
        solution = linalg.solve(rows, values, len(index_in), domain)
        if solution is None:
            raise DegreeBoundExceeded(
                f"no homogeneous Y of degree {degree - 1} divides the degree "
                f"{degree} part",
                degree=degree,
            )
        Y = Y + index_in.polymap(solution, field)
        logger.debug(f"divided degree {degree}: {len(solution)} nonzero coefficients")
    if bracket_map(algebra, identity_map(algebra.dim, field), Y) != X:
        raise ConsistencyFailure("division result fails [x, Y(x)] == X(x)")
    return Y


def _exact(value):
    fraction = Fraction(float(value))
    return QQ(fraction.numerator, fraction.denominator)


def _numeric_matrices(rep):
    return [np.array([[to_complex(v) for v in row] for row in matrix], dtype=float)
            for matrix in rep.matrices]


def pointwise_decompose(samples, basis, gens=None, tol_input=INPUT_TOLERANCE,
                        tol_residual=RESIDUAL_TOLERANCE, degree_bound=6):
    """Coefficients f_i(x_k) with f(x_k) = sum_i f_i(x_k) P_i(x_k) at sample points.

    Every sample must sit at a regular point and satisfy pi(q_i(x)) f(x) = 0
    for all gradient covariants q_i, up to ``tol_input`` relative to |f(x)|.
    The per-point solve is a least-squares fit on the values P_i(x_k), unique
    because they are independent at regular points.
    """
    rep = basis.rep
    algebra = rep.algebra
    if gens is None:
        gens = invariant_generators(algebra, degree_bound)
    matrices = _numeric_matrices(rep)
    points, coeff_values, residuals = [], [], []
    for k, (x, f) in enumerate(samples):
        x = np.asarray(x, dtype=float)
        f = np.asarray(f, dtype=float)
        if x.shape != (algebra.dim,) or f.shape != (rep.target_dim,):
            raise DimensionMismatch(f"sample {k} has shape {x.shape} -> {f.shape}")
        point = algebra.element(_exact(v) for v in x)
        if not algebra.is_regular(point):
            raise NotRegular(f"sample point {k} is not regular", point=tuple(x))
        size = np.linalg.norm(f)
        for i, q in enumerate(gens.qmaps):
            z = evaluate_numeric(q, x)[0].real
            action = sum(c * m for c, m in zip(z, matrices))
            violation = np.linalg.norm(action @ f)
            if violation > tol_input * size:
                raise NotPointwiseFixed(
                    f"sample {k} is not fixed by q_{i + 1}(x)",
                    violation=violation,
                )
        values = np.column_stack([evaluate_numeric(P, x)[0].real for P in basis.generators])
        coefficients, *_ = np.linalg.lstsq(values, f, rcond=None)
        residual = float(np.linalg.norm(values @ coefficients - f))
        if residual > tol_residual * (1 + size):
            logger.warning(f"sample {k}: residual {residual:.3e} above tolerance")
        points.append(point)
        coeff_values.append(tuple(float(c) for c in coefficients))
        residuals.append(residual)
    return PointwiseDecomposition(tuple(points), tuple(coeff_values), tuple(residuals))


def _image_check(P, rep, seeds):
    """Seed of a regular point where P(x) leaves the image of pi(x), or None"""
    n = rep.target_dim
    for seed in seeds:
        x = rep.algebra.random_regular(seed)
        matrix = rep.matrix_of(x)
        columns = [{a: matrix[a][b] for a in range(n) if matrix[a][b]} for b in range(n)]
        image_rank = linalg.rank(linalg.transpose_columns(columns, n), n, QQ)
        value = evaluate(P, x)
        columns.append({a: v for a, v in enumerate(value) if v})
        if linalg.rank(linalg.transpose_columns(columns, n), n + 1, QQ) != image_rank:
            return seed
    return None


def generalized_divide(P, rep, gens, degree_bound, seeds=(0, 1, 2)):
    """Experimental: maps P_i with P(x) = sum_i pi(q_i(x)) P_i(x).

    Existence is not known in general. Each homogeneous part of P of degree d
    is solved over P_i of degree d - deg q_i; DegreeBoundExceeded reports that
    no polynomial solution exists in that degree.
    """
    algebra = rep.algebra
    if P.target_dim != rep.target_dim or P.domain_dim != algebra.dim:
        raise DimensionMismatch(f"{P!r} is not a map {algebra.name} -> {rep.label}")
    logger.info("generalized division is experimental, no solution is guaranteed")
    failing = _image_check(P, rep, seeds) if P.field is Field.Q else None
    if failing is not None:
        raise NotTangent(f"P(x) leaves the image of pi(x) at the point of seed {failing}",
                         seed=failing)
    field = P.field
    domain = field.domain
    quotients = [zero_map(algebra.dim, rep.target_dim, field) for _ in gens.qmaps]
    for degree, part in P.homogeneous_parts().items():
        index_out = GradedIndex(algebra.dim, degree, rep.target_dim)
        columns, owners = [], []
        for i, q in enumerate(gens.qmaps):
            d = degree - q.degree
            if d < 0 or d > degree_bound:
                continue
            index_in = GradedIndex(algebra.dim, d, rep.target_dim)
            for monomial, c in index_in.keys:
                column = {}
                for b, component in enumerate(q.components):
                    image_column = rep.columns[b][c]
                    if not component or not image_column:
                        continue
                    for mu, coeff in component.items():
                        target = tuple(s + t for s, t in zip(mu, monomial))
                        for a, value in image_column.items():
                            row = index_out.position[(target, a)]
                            column[row] = column.get(row, QQ.zero) + coeff * value
                columns.append({r: lift(v, domain) for r, v in column.items() if v})
                owners.append((i, index_in, monomial, c))
        rows = linalg.transpose_columns(columns, len(index_out))
        rhs = index_out.vector(part)
        values = [rhs.get(r, domain.zero) for r in range(len(index_out))]
        solution = linalg.solve(rows, values, len(columns), domain)
        if solution is None:
            raise DegreeBoundExceeded(
                f"no polynomial quotients for the degree {degree} part",
                degree=degree,
            )
        for column, value in solution.items():
            i, index_in, monomial, c = owners[column]
            quotients[i] = quotients[i] + index_in.polymap(
                {index_in.position[(monomial, c)]: value}, field)
    return quotients

"""Descent of a Q(i) module basis to one fixed by complex conjugation.

Degrees are processed in ascending order. At degree d, with every lower
generator already conjugation-fixed, the conjugates of the degree-d
generators Q_1..Q_k are written as

    sigma(Q_j) = sum_i lambda_ij Q_i + sum_n R_nj Q_n        (deg Q_n < d)

Then Lambda conj(Lambda) = I and R conj(Lambda) + sigma(R) = 0. A matrix M with
Lambda conj(M) = M is found by Hilbert 90, T = R conj(M) / 2, and the new
generators P_j = sum_i mu_ij Q_i + sum_n T_nj Q_n are conjugation-fixed.
"""

import logging
from dataclasses import dataclass

import numpy as np
from sympy import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianElement

from liecov import linalg
from liecov.covariants import CovariantBasis, invariant_space
from liecov.division import solve_module_coefficients
from liecov.errors import (
    ConsistencyFailure,
    NotExpressible,
    RetryBudgetExhausted,
)
from liecov.polyalg import (
    Field,
    conjugate,
    conjugate_poly,
    convert_poly,
    gaussian,
    poly_ring,
)

logger = logging.getLogger(__name__)

HILBERT90_BOX = 2
HILBERT90_RETRIES = 32
SCRAMBLE_BOX = 2


def sigma(P):
    """Coefficient-wise complex conjugation"""
    if P.field is Field.Q:
        return P
    return P.map_coefficients(conjugate)


def is_sigma_fixed(P):
    return sigma(P) == P


# -- Gaussian matrices as lists of rows ---------------------------------------


def _g(value):
    return value if isinstance(value, GaussianElement) else gaussian(value)


def _conj(matrix):
    return [[conjugate(_g(v)) for v in row] for row in matrix]


def _mul(a, b):
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((_g(a[i][k]) * _g(b[k][j]) for k in range(inner)), QQ_I.zero)
             for j in range(cols)] for i in range(len(a))]


def _identity(k):
    return [[QQ_I.one if i == j else QQ_I.zero for j in range(k)] for i in range(k)]


def _same(a, b):
    return all(_g(x) == _g(y) for r, s in zip(a, b) for x, y in zip(r, s))


def _poly_matrix_mul(polys, scalars, ring):
    """(polynomial matrix) x (scalar matrix)"""
    cols = len(scalars[0]) if scalars else 0
    return [[sum((row[i] * _g(scalars[i][j]) for i in range(len(scalars))), ring.zero)
             for j in range(cols)] for row in polys]


@dataclass(frozen=True)
class RealificationStep:
    """Matrices of one degree of the descent"""

    degree: int
    indices: tuple
    lower: tuple
    lambda_matrix: tuple
    r_matrix: tuple
    m_matrix: tuple
    t_matrix: tuple


@dataclass(frozen=True, eq=False)
class RealificationCertificate:
    steps: tuple
    new_generators: tuple
    basis: object

    def step(self, degree):
        return next(s for s in self.steps if s.degree == degree)

    @property
    def lambda_matrix(self):
        return _block_diagonal([s.lambda_matrix for s in self.steps])

    @property
    def m_matrix(self):
        return _block_diagonal([s.m_matrix for s in self.steps])


def _block_diagonal(blocks):
    size = sum(len(b) for b in blocks)
    result = [[QQ_I.zero] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, value in enumerate(row):
                result[offset + i][offset + j] = _g(value)
        offset += len(block)
    return result


def express_sigma_in_basis(generators, algebra, degree):
    """(Lambda, R, degree-d indices, lower indices) for the degree-d generators.

    Generators below ``degree`` must already be conjugation-fixed.
    """
    degrees = [P.degree for P in generators]
    indices = tuple(j for j, d in enumerate(degrees) if d == degree)
    lower = tuple(n for n, d in enumerate(degrees) if d < degree)
    family = [generators[j] for j in indices] + [generators[n] for n in lower]
    ring = poly_ring(algebra.dim, Field.QI)
    lam = [[QQ_I.zero] * len(indices) for _ in indices]
    r_matrix = [[ring.zero] * len(indices) for _ in lower]
    for column, j in enumerate(indices):
        coefficients = solve_module_coefficients(sigma(generators[j]), family, algebra)
        if coefficients is None:
            raise NotExpressible(
                f"sigma of generator {j} is not a combination of the basis",
                degree=degree,
            )
        for i in range(len(indices)):
            constant = convert_poly(coefficients[i], Field.QI)
            lam[i][column] = constant.get(ring.zero_monom, QQ_I.zero)
        for n in range(len(lower)):
            r_matrix[n][column] = convert_poly(coefficients[len(indices) + n], Field.QI)
    if not _same(_mul(lam, _conj(lam)), _identity(len(indices))):
        raise ConsistencyFailure(f"Lambda conj(Lambda) != I at degree {degree}")
    check = _poly_matrix_mul(r_matrix, _conj(lam), ring)
    for n in range(len(lower)):
        for j in range(len(indices)):
            if check[n][j] + conjugate_poly(r_matrix[n][j]):
                raise ConsistencyFailure(
                    f"R conj(Lambda) + sigma(R) != 0 at degree {degree}"
                )
    return lam, r_matrix, indices, lower


def _random_gaussian_matrix(rng, k, box):
    real = rng.integers(-box, box + 1, size=(k, k))
    imag = rng.integers(-box, box + 1, size=(k, k))
    return [[gaussian(int(real[i][j]), int(imag[i][j])) for j in range(k)]
            for i in range(k)]


def _invertible(matrix):
    return linalg.is_invertible(linalg.dense(matrix, QQ_I))


def hilbert90_solve(lam, seed=0, box=HILBERT90_BOX, retries=HILBERT90_RETRIES):
    """Invertible M with Lambda conj(M) = M, given Lambda conj(Lambda) = I.

    M = Lambda conj(C) + C satisfies the identity for every C; random
    Gaussian-integer C are drawn until M is invertible.
    """
    k = len(lam)
    identity = _identity(k)
    if not _same(_mul(lam, _conj(lam)), identity):
        raise ConsistencyFailure("Lambda conj(Lambda) != I")
    if _same(lam, identity):
        return identity
    rng = np.random.default_rng(seed)
    for attempt in range(retries):
        c = _random_gaussian_matrix(rng, k, box)
        m = [[x + y for x, y in zip(r, s)] for r, s in zip(_mul(lam, _conj(c)), c)]
        if _invertible(m):
            logger.debug(f"Hilbert 90 solved after {attempt + 1} draws")
            return m
    raise RetryBudgetExhausted(f"no invertible M in {retries} draws", seed=seed)


def realify_basis(basis, seed=0):
    """Conjugation-fixed module basis from a Q(i) basis, with the certificate"""
    algebra = basis.algebra
    ring = poly_ring(algebra.dim, Field.QI)
    current = [P.to_field(Field.QI) for P in basis.generators]
    steps = []
    for degree in sorted(set(P.degree for P in current)):
        lam, r_matrix, indices, lower = express_sigma_in_basis(current, algebra, degree)
        m = hilbert90_solve(lam, seed=seed + degree)
        t_matrix = [[p * gaussian(QQ(1, 2)) for p in row]
                    for row in _poly_matrix_mul(r_matrix, _conj(m), ring)]
        replaced = []
        for column, j in enumerate(indices):
            P = current[j] * QQ_I.zero
            for i, source in enumerate(indices):
                P = P + current[source] * m[i][column]
            for n, source in enumerate(lower):
                if t_matrix[n][column]:
                    P = P + current[source] * t_matrix[n][column]
            replaced.append(P)
        step = RealificationStep(
            degree, indices, lower,
            tuple(map(tuple, lam)), tuple(map(tuple, r_matrix)),
            tuple(map(tuple, m)), tuple(map(tuple, t_matrix)),
        )
        _check_step(step)
        for j, P in zip(indices, replaced):
            if not is_sigma_fixed(P):
                raise ConsistencyFailure(f"generator {j} is not conjugation-fixed")
            current[j] = P
        steps.append(step)
        logger.info(f"realified degree {degree}: {len(indices)} generators")
    generators = tuple(P.to_field(Field.Q) for P in current)
    new_basis = CovariantBasis(basis.rep, generators, tuple(P.degree for P in generators),
                               basis.degree_bound_used)
    _check_generation(basis, new_basis)
    return RealificationCertificate(tuple(steps), generators, new_basis)


def _check_step(step):
    lam, m = step.lambda_matrix, step.m_matrix
    k = len(step.indices)
    if not _same(_mul(lam, _conj(lam)), _identity(k)):
        raise ConsistencyFailure(f"degree {step.degree}: Lambda conj(Lambda) != I")
    if not _same(_mul(lam, _conj(m)), m):
        raise ConsistencyFailure(f"degree {step.degree}: Lambda conj(M) != M")
    if not _invertible(m):
        raise ConsistencyFailure(f"degree {step.degree}: M is singular")
    if step.lower:
        ring = step.r_matrix[0][0].ring
        rm = _poly_matrix_mul(step.r_matrix, _conj(m), ring)
        for n in range(len(step.lower)):
            for j in range(k):
                if rm[n][j] + conjugate_poly(step.t_matrix[n][j]) != step.t_matrix[n][j]:
                    raise ConsistencyFailure(
                        f"degree {step.degree}: R conj(M) + sigma(T) != T"
                    )


def _check_generation(old, new):
    """Old and new generators express each other over the invariants"""
    algebra = old.algebra
    for source, target in ((old, new), (new, old)):
        for P in source.generators:
            if solve_module_coefficients(P, target.generators, algebra) is None:
                raise ConsistencyFailure("realified family does not generate the module")


def verify_certificate(certificate):
    """Recheck every identity recorded in a certificate"""
    for step in certificate.steps:
        _check_step(step)
    for P in certificate.new_generators:
        if not is_sigma_fixed(P):
            raise ConsistencyFailure("certificate generator is not conjugation-fixed")
    return True


def scramble_basis(basis, seed=0, box=SCRAMBLE_BOX):
    """A Q(i) module basis mixing a real one within degrees plus invariant shears.

    Degree-d generators are replaced by an invertible Gaussian-integer mix of
    themselves plus random Gaussian multiples of (invariant of the right
    degree) * (lower generator).
    """
    algebra = basis.algebra
    rng = np.random.default_rng(seed)
    generators = [P.to_field(Field.QI) for P in basis.generators]
    scrambled = list(generators)
    for degree in sorted(set(basis.degrees)):
        indices = [j for j, d in enumerate(basis.degrees) if d == degree]
        lower = [n for n, d in enumerate(basis.degrees) if d < degree]
        k = len(indices)
        for _ in range(HILBERT90_RETRIES):
            mix = _random_gaussian_matrix(rng, k, box)
            if _invertible(mix):
                break
        else:
            raise RetryBudgetExhausted(f"no invertible mix of degree {degree}")
        for column, j in enumerate(indices):
            P = generators[j] * QQ_I.zero
            for i, source in enumerate(indices):
                P = P + generators[source] * mix[i][column]
            for n in lower:
                for Q in invariant_space(algebra, degree - basis.degrees[n]):
                    re, im = rng.integers(-box, box + 1, size=2)
                    if re or im:
                        P = P + generators[n] * (convert_poly(Q, Field.QI)
                                                 * gaussian(int(re), int(im)))
            scrambled[j] = P
    return CovariantBasis(basis.rep, tuple(scrambled), basis.degrees,
                          basis.degree_bound_used)

"""Matrix representations of a catalog or user algebra.

``matrices[i][a][b]`` is the v_a coordinate of pi(e_i) v_b, so columns are the
images of the basis vectors, the same layout as ``LieAlgebra.ad_matrix``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

from sympy import QQ, Poly, Symbol, roots

from liecov import linalg
from liecov.catalog import sl, sl_basis_matrices
from liecov.errors import DimensionMismatch, InvalidInput, NotSplit
from liecov.liecore import diagonal_weights
from liecov.polyalg import monomials

logger = logging.getLogger(__name__)

IRREDUCIBLE_SL2_MAX = 4


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: object
    target_dim: int
    matrices: tuple
    label: str

    def __post_init__(self):
        matrices = tuple(
            tuple(tuple(QQ.convert(v) for v in row) for row in matrix)
            for matrix in self.matrices
        )
        if len(matrices) != self.algebra.dim:
            raise DimensionMismatch(
                f"{self.label}: {len(matrices)} matrices for an algebra of "
                f"dimension {self.algebra.dim}"
            )
        for matrix in matrices:
            if len(matrix) != self.target_dim or any(
                len(row) != self.target_dim for row in matrix
            ):
                raise DimensionMismatch(
                    f"{self.label}: matrices must be {self.target_dim}x{self.target_dim}"
                )
        object.__setattr__(self, 'matrices', matrices)

    def __repr__(self):
        return (f'<Representation {self.label} of {self.algebra.name} '
                f'dim={self.target_dim}>')

    @cached_property
    def columns(self):
        """Sparse columns: columns[i][b] = {a: pi(e_i)[a][b]}"""
        return tuple(
            tuple(
                {a: matrix[a][b] for a in range(self.target_dim) if matrix[a][b]}
                for b in range(self.target_dim)
            )
            for matrix in self.matrices
        )

    @cached_property
    def cartan_weights(self):
        """Cartan eigenvalues of each basis vector when the Cartan acts diagonally"""
        return diagonal_weights([self.matrices[h] for h in self.algebra.cartan_indices])

    def matrix_of(self, xi):
        """pi(xi) as a list of rows"""
        if len(xi) != self.algebra.dim:
            raise DimensionMismatch(
                f"element of dimension {len(xi)} acting through {self!r}"
            )
        result = [[QQ.zero] * self.target_dim for _ in range(self.target_dim)]
        for i, c in enumerate(xi):
            if not c:
                continue
            for a, row in enumerate(self.matrices[i]):
                for b, value in enumerate(row):
                    if value:
                        result[a][b] += c * value
        return result


def check_homomorphism(rep):
    """pi([e_i, e_j]) == [pi(e_i), pi(e_j)] for every basis pair"""
    algebra = rep.algebra
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            lhs = rep.matrix_of(algebra.bracket(algebra.basis[i], algebra.basis[j]))
            rhs = _commutator(rep.matrices[i], rep.matrices[j])
            if lhs != rhs:
                raise InvalidInput(
                    f"{rep.label}: matrices are not a representation",
                    pair=(i, j),
                )
    return True


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n) if a[i][k]), QQ.zero)
             for j in range(n)] for i in range(n)]


def _commutator(a, b):
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


@lru_cache(maxsize=None)
def adjoint_rep(algebra):
    return Representation(algebra, algebra.dim, algebra.ad_basis, 'adjoint')


@lru_cache(maxsize=None)
def trivial_rep(algebra):
    zero = ((QQ.zero,),)
    return Representation(algebra, 1, (zero,) * algebra.dim, 'trivial')


def standard_rep(algebra):
    """Defining representation of sl(n) by its own matrices"""
    suffix = algebra.name[2:]
    if not algebra.name.startswith('sl') or not suffix.isdigit():
        raise InvalidInput(f"no standard representation known for {algebra.name}")
    n = int(suffix)
    if algebra is not sl(n):
        raise InvalidInput(f"{algebra.name} is not the catalog sl({n})")
    return Representation(algebra, n, sl_basis_matrices(n), 'standard')


def irreducible_sl2(m, algebra=None):
    """The (2m+1)-dimensional irreducible of sl(2) in a weight basis v_0..v_2m.

    pi(h) v_k = (2m - 2k) v_k, pi(e) v_k = k (2m - k + 1) v_(k-1),
    pi(f) v_k = v_(k+1).
    """
    algebra = algebra or sl(2)
    if algebra is not sl(2):
        raise InvalidInput("irreducible_sl2 needs the catalog sl2 (basis h, e, f)")
    if m < 0:
        raise InvalidInput(f"highest weight parameter must be >= 0, got {m}")
    dim = 2 * m + 1
    h = [[QQ.zero] * dim for _ in range(dim)]
    e = [[QQ.zero] * dim for _ in range(dim)]
    f = [[QQ.zero] * dim for _ in range(dim)]
    for k in range(dim):
        h[k][k] = QQ(2 * m - 2 * k)
        if k > 0:
            e[k - 1][k] = QQ(k * (2 * m - k + 1))
        if k + 1 < dim:
            f[k + 1][k] = QQ.one
    return Representation(algebra, dim, (h, e, f), f'irrep:{m}')


def symmetric_power(rep, k):
    """Sym^k of ``rep`` on the monomial basis y^alpha, |alpha| = k"""
    basis = monomials(rep.target_dim, k)
    position = {alpha: i for i, alpha in enumerate(basis)}
    dim = len(basis)
    matrices = []
    for matrix in rep.matrices:
        result = [[QQ.zero] * dim for _ in range(dim)]
        for col, alpha in enumerate(basis):
            # y_b -> sum_a matrix[a][b] y_a, extended as a derivation
            for b, power in enumerate(alpha):
                if not power:
                    continue
                for a in range(rep.target_dim):
                    value = matrix[a][b]
                    if not value:
                        continue
                    image = list(alpha)
                    image[b] -= 1
                    image[a] += 1
                    result[position[tuple(image)]][col] += power * value
        matrices.append(result)
    return Representation(rep.algebra, dim, matrices, f'sym{k}({rep.label})')


def symmetric_power_sl3(k):
    rep = symmetric_power(standard_rep(sl(3)), k)
    return Representation(rep.algebra, rep.target_dim, rep.matrices, f'sym:{k}')


def dual_rep(rep):
    matrices = [
        [[-matrix[b][a] for b in range(rep.target_dim)] for a in range(rep.target_dim)]
        for matrix in rep.matrices
    ]
    label = rep.label[5:] if rep.label.startswith('dual:') else f'dual:{rep.label}'
    return Representation(rep.algebra, rep.target_dim, matrices, label)


def apply(rep, xi, v):
    """pi(xi) v"""
    if len(v) != rep.target_dim:
        raise DimensionMismatch(
            f"vector of length {len(v)} for {rep!r}"
        )
    matrix = rep.matrix_of(xi)
    return [sum((row[b] * v[b] for b in range(rep.target_dim) if row[b]), QQ.zero)
            for row in matrix]


def zero_weight_multiplicity(rep):
    """Dimension of the joint kernel of the Cartan matrices"""
    rows = [
        dict(enumerate(row))
        for h in rep.algebra.cartan_indices
        for row in rep.matrices[h]
    ]
    return rep.target_dim - linalg.rank(rows, rep.target_dim, QQ)


def weights(rep):
    """Weight of every vector of a weight basis, as tuples over the Cartan basis.

    Uses the diagonal entries directly when the Cartan matrices are diagonal;
    otherwise decomposes a generic Cartan combination exactly and raises
    NotSplit when its eigenvalues are not rational or it is not diagonalizable.
    """
    diagonal = rep.cartan_weights
    if diagonal is not None:
        return sorted(diagonal, reverse=True)
    cartan = [rep.matrices[h] for h in rep.algebra.cartan_indices]
    n = rep.target_dim
    generic = [[QQ.zero] * n for _ in range(n)]
    for scale, matrix in zip((QQ(7) ** p for p in range(len(cartan))), cartan):
        for a in range(n):
            for b in range(n):
                generic[a][b] += scale * matrix[a][b]
    t = Symbol('t')
    charpoly = linalg.dense(generic, QQ).charpoly()
    eigen = roots(Poly([QQ.to_sympy(c) for c in charpoly], t), filter='Q')
    if sum(eigen.values()) != n:
        raise NotSplit(f"{rep.label}: Cartan eigenvalues are not all rational")
    result = []
    for value, multiplicity in eigen.items():
        value = QQ.from_sympy(value)
        shifted = [
            {b: generic[a][b] - (value if a == b else QQ.zero) for b in range(n)}
            for a in range(n)
        ]
        space = linalg.kernel(shifted, n, QQ)
        if len(space) != multiplicity:
            raise NotSplit(f"{rep.label}: Cartan action is not diagonalizable")
        for vector in space:
            result.append(_joint_eigenvalues(cartan, vector, n, rep.label))
    return sorted(result, reverse=True)


def _joint_eigenvalues(cartan, vector, n, label):
    pivot = min(vector)
    values = []
    for matrix in cartan:
        image = {a: sum((matrix[a][b] * c for b, c in vector.items()), QQ.zero)
                 for a in range(n)}
        value = image[pivot] / vector[pivot]
        if any(image[a] != value * vector.get(a, QQ.zero) for a in range(n)):
            raise NotSplit(f"{label}: weight spaces are not joint eigenspaces")
        values.append(value)
    return tuple(values)


def from_name(algebra, name):
    """Resolve 'adjoint', 'trivial', 'standard', 'irrep:m', 'm=2', 'sym:k', 'dual:...'"""
    key = name.strip().lower()
    if key.startswith('dual:'):
        return dual_rep(from_name(algebra, key[5:]))
    if key in ('adjoint', 'ad'):
        return adjoint_rep(algebra)
    if key == 'trivial':
        return trivial_rep(algebra)
    if key == 'standard':
        return standard_rep(algebra)
    try:
        if key.startswith('irrep:') or key.startswith('m='):
            m = int(key.split(':' if ':' in key else '=', 1)[1])
            if m > IRREDUCIBLE_SL2_MAX:
                logger.warning(f"irrep m={m} is beyond the tested range "
                               f"m <= {IRREDUCIBLE_SL2_MAX}")
            return irreducible_sl2(m, algebra)
        if key.startswith('sym:'):
            k = int(key[4:])
            if algebra is not sl(3):
                raise InvalidInput("symmetric powers are built for sl3 only")
            return symmetric_power_sl3(k)
    except ValueError:
        raise InvalidInput(f"bad representation parameter in '{name}'")
    raise InvalidInput(
        f"unknown representation '{name}'; use adjoint, trivial, standard, "
        f"irrep:m, sym:k or dual:<name>"
    )

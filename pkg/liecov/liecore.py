"""Split reductive Lie algebras over Q given by structure constants."""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import QQ

from liecov import linalg
from liecov.errors import DimensionMismatch, InvalidAlgebra, SamplingExhausted

logger = logging.getLogger(__name__)

REGULAR_SAMPLING_BOX = 10
REGULAR_SAMPLING_RETRIES = 64


@dataclass(frozen=True)
class Element:
    """Coordinates of an algebra element in the chosen basis"""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, 'coords', tuple(self.coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, index):
        return self.coords[index]

    def _check(self, other):
        if len(other) != len(self):
            raise DimensionMismatch(
                f"element of dimension {len(other)} where {len(self)} expected"
            )

    def __add__(self, other):
        self._check(other)
        return Element(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        return Element(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Element(-a for a in self.coords)

    def __mul__(self, scalar):
        return Element(scalar * a for a in self.coords)

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra with structure constants c_ij^k, i.e. [e_i, e_j] = sum_k c_ij^k e_k.

    ``structure_constants`` maps (i, j, k) to a nonzero rational; only one of
    (i, j, k) / (j, i, k) needs to be supplied, the other is filled in by
    antisymmetry when the algebra is built with :meth:`from_constants`.
    Instances compare by identity so they can key caches.
    """

    name: str
    dim: int
    structure_constants: dict
    cartan_indices: tuple

    @classmethod
    def from_constants(cls, name, dim, constants, cartan_indices, validate=True):
        table = {}
        for (i, j, k), value in constants.items():
            value = QQ.convert(value)
            if not value:
                continue
            for key, entry in (((i, j, k), value), ((j, i, k), -value)):
                previous = table.get(key)
                if previous is not None and previous != entry:
                    raise InvalidAlgebra(
                        f"{name}: structure constants are not antisymmetric",
                        index=key,
                    )
                table[key] = entry
        algebra = cls(name, dim, table, tuple(cartan_indices))
        if validate:
            algebra.validate()
        return algebra

    def __repr__(self):
        return f'<LieAlgebra {self.name} dim={self.dim} rank={self.rank}>'

    @property
    def rank(self):
        return len(self.cartan_indices)

    # -- basic data ---------------------------------------------------------

    @cached_property
    def bracket_table(self):
        """{(i, j): {k: c_ij^k}}"""
        table = {}
        for (i, j, k), value in self.structure_constants.items():
            table.setdefault((i, j), {})[k] = value
        return table

    @cached_property
    def basis(self):
        return tuple(self.basis_element(i) for i in range(self.dim))

    def basis_element(self, index):
        return Element(QQ.one if k == index else QQ.zero for k in range(self.dim))

    def element(self, coords):
        coords = tuple(QQ.convert(c) for c in coords)
        if len(coords) != self.dim:
            raise DimensionMismatch(
                f"{self.name} has dimension {self.dim}, got {len(coords)} coordinates"
            )
        return Element(coords)

    def zero(self):
        return Element((QQ.zero,) * self.dim)

    def _check(self, *elements):
        for x in elements:
            if len(x) != self.dim:
                raise DimensionMismatch(
                    f"{self.name} has dimension {self.dim}, got element of "
                    f"dimension {len(x)}"
                )

    # -- operations ---------------------------------------------------------

    def bracket(self, x, y):
        self._check(x, y)
        result = [QQ.zero] * self.dim
        for (i, j), column in self.bracket_table.items():
            a, b = x[i], y[j]
            if not a or not b:
                continue
            for k, value in column.items():
                result[k] += a * b * value
        return Element(result)

    def ad_matrix(self, x):
        """Rows of ad(x): entry [k][j] is the e_k coordinate of [x, e_j]"""
        self._check(x)
        rows = [[QQ.zero] * self.dim for _ in range(self.dim)]
        for (i, j), column in self.bracket_table.items():
            a = x[i]
            if not a:
                continue
            for k, value in column.items():
                rows[k][j] += a * value
        return rows

    @cached_property
    def ad_basis(self):
        return tuple(self.ad_matrix(e) for e in self.basis)

    @cached_property
    def kappa_matrix(self):
        """Gram matrix of the adjoint trace form"""
        gram = [[QQ.zero] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i, self.dim):
                value = _trace_product(self.ad_basis[i], self.ad_basis[j])
                gram[i][j] = gram[j][i] = value
        return gram

    @cached_property
    def kappa_inverse(self):
        inverse = linalg.inverse(linalg.dense(self.kappa_matrix, QQ))
        if inverse is None:
            raise InvalidAlgebra(f"{self.name}: trace form is degenerate")
        return linalg.to_lists(inverse)

    def kappa(self, x, y):
        self._check(x, y)
        gram = self.kappa_matrix
        total = QQ.zero
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b and gram[i][j]:
                    total += a * gram[i][j] * b
        return total

    def centralizer(self, x):
        """Exact echelon basis of g^x = ker ad(x)"""
        rows = [dict(enumerate(r)) for r in self.ad_matrix(x)]
        kernel = linalg.kernel(rows, self.dim, QQ)
        basis, _ = linalg.echelon(kernel, self.dim, QQ)
        return [
            Element(vector.get(k, QQ.zero) for k in range(self.dim))
            for vector in basis
        ]

    def is_regular(self, x):
        return len(self.centralizer(x)) == self.rank

    def random_element(self, rng, box=REGULAR_SAMPLING_BOX):
        values = rng.integers(-box, box + 1, size=self.dim)
        return self.element(int(v) for v in values)

    def random_regular(self, seed, box=REGULAR_SAMPLING_BOX,
                       retries=REGULAR_SAMPLING_RETRIES):
        """Deterministic regular element for a given seed"""
        if self.is_abelian():
            raise InvalidAlgebra(f"{self.name} is abelian, every element is regular")
        rng = np.random.default_rng(seed)
        for attempt in range(retries):
            x = self.random_element(rng, box)
            if self.is_regular(x):
                if attempt:
                    logger.debug(f"regular element after {attempt + 1} draws")
                return x
        raise SamplingExhausted(
            f"no regular element of {self.name} in {retries} draws", seed=seed
        )

    def is_abelian(self):
        return not self.structure_constants

    # -- Cartan data --------------------------------------------------------

    @cached_property
    def cartan_weights(self):
        """Eigenvalues of ad(h), h Cartan, on each basis vector, or None.

        Available only when every Cartan basis element acts diagonally on the
        chosen basis (root-vector bases of the catalog algebras).
        """
        return diagonal_weights([self.ad_basis[h] for h in self.cartan_indices])

    # -- validation ---------------------------------------------------------

    def validate(self):
        """Check Jacobi, non-degeneracy of kappa and the rank"""
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    ei, ej, ek = self.basis[i], self.basis[j], self.basis[k]
                    total = (self.bracket(ei, self.bracket(ej, ek))
                             + self.bracket(ej, self.bracket(ek, ei))
                             + self.bracket(ek, self.bracket(ei, ej)))
                    if not total.is_zero():
                        raise InvalidAlgebra(
                            f"{self.name}: Jacobi identity fails",
                            triple=(i, j, k),
                        )
        for h in self.cartan_indices:
            if not 0 <= h < self.dim:
                raise InvalidAlgebra(f"{self.name}: Cartan index {h} out of range")
        self.kappa_inverse
        for a in self.cartan_indices:
            for b in self.cartan_indices:
                if self.bracket(self.basis[a], self.basis[b]).is_zero():
                    continue
                raise InvalidAlgebra(f"{self.name}: Cartan elements do not commute")
        rng = np.random.default_rng(0)
        smallest = min(len(self.centralizer(self.random_element(rng)))
                       for _ in range(8))
        if smallest != self.rank:
            raise InvalidAlgebra(
                f"{self.name}: generic centralizer has dimension {smallest}, "
                f"but {self.rank} Cartan elements were given"
            )
        logger.debug(f"validated {self!r}")
        return self


def _trace_product(a, b):
    n = len(a)
    total = QQ.zero
    for i in range(n):
        row = a[i]
        for k in range(n):
            if row[k] and b[k][i]:
                total += row[k] * b[k][i]
    return total


def diagonal_weights(matrices):
    """Per-basis-vector tuples of diagonal entries if all matrices are diagonal"""
    if not matrices:
        return None
    n = len(matrices[0])
    for matrix in matrices:
        for i in range(n):
            for j in range(n):
                if i != j and matrix[i][j]:
                    return None
    return tuple(tuple(matrix[i][i] for matrix in matrices) for i in range(n))


def trace_of_ad(algebra, x):
    """tr ad(x); zero on a reductive algebra"""
    matrix = algebra.ad_matrix(x)
    return sum((matrix[i][i] for i in range(algebra.dim)), QQ.zero)

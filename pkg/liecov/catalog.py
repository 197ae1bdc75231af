"""Built-in split algebras: sl(2), sl(3), sl(4) and so(3)."""

import logging
from functools import lru_cache

from sympy import QQ

from liecov.errors import InvalidInput
from liecov.liecore import LieAlgebra

logger = logging.getLogger(__name__)

DEFAULT_DEGREE_BOUNDS = {
    'sl2': 4,
    'so3': 4,
    'sl3': 6,
    'sl4': 6,
}


def sl_basis_matrices(n):
    """Basis of sl(n): Cartan E_kk - E_(k+1)(k+1), then E_ij, E_ji for i < j.

    For n = 2 this is the usual (h, e, f).
    """
    def unit(i, j):
        matrix = [[QQ.zero] * n for _ in range(n)]
        matrix[i][j] = QQ.one
        return matrix

    basis = []
    for k in range(n - 1):
        matrix = unit(k, k)
        matrix[k + 1][k + 1] = -QQ.one
        basis.append(matrix)
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(unit(i, j))
            basis.append(unit(j, i))
    return basis


def _sl_coordinates(matrix, n):
    coords = []
    running = QQ.zero
    for k in range(n - 1):
        running += matrix[k][k]
        coords.append(running)
    for i in range(n):
        for j in range(i + 1, n):
            coords.append(matrix[i][j])
            coords.append(matrix[j][i])
    return coords


def _commutator(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] - b[i][k] * a[k][j] for k in range(n)), QQ.zero)
             for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def sl(n):
    if n < 2:
        raise InvalidInput(f"sl({n}) is not a simple algebra")
    basis = sl_basis_matrices(n)
    constants = {}
    for i, a in enumerate(basis):
        for j in range(i + 1, len(basis)):
            coords = _sl_coordinates(_commutator(a, basis[j]), n)
            for k, value in enumerate(coords):
                if value:
                    constants[(i, j, k)] = value
    algebra = LieAlgebra.from_constants(f'sl{n}', len(basis), constants,
                                        range(n - 1))
    logger.debug(f"built {algebra!r}")
    return algebra


@lru_cache(maxsize=None)
def so3():
    """so(3) with [L_i, L_j] = eps_ijk L_k and Cartan L_3"""
    constants = {(0, 1, 2): QQ.one, (1, 2, 0): QQ.one, (2, 0, 1): QQ.one}
    return LieAlgebra.from_constants('so3', 3, constants, (2,))


_CATALOG = {
    'sl2': lambda: sl(2),
    'sl3': lambda: sl(3),
    'sl4': lambda: sl(4),
    'so3': so3,
}


def catalog_names():
    return sorted(_CATALOG)


def get_algebra(name):
    """Catalog lookup by identifier (sl2, sl3, sl4, so3)"""
    key = name.lower().replace('(', '').replace(')', '')
    if key not in _CATALOG:
        raise InvalidInput(
            f"unknown algebra '{name}'; known: {', '.join(catalog_names())}"
        )
    return _CATALOG[key]()


def default_degree_bound(algebra):
    return DEFAULT_DEGREE_BOUNDS.get(algebra.name, 6)

"""Exact linear algebra over QQ and QQ_I.

Everything here works on sparse rows, i.e. lists of ``{column: coefficient}``
dicts, and delegates the elimination itself to sympy's ``DomainMatrix``
(sparse format), which keeps the large but very sparse covariance systems
cheap to reduce.
"""

import logging

from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


def _clean(row):
    return {j: v for j, v in row.items() if v}


def sparse_matrix(rows, ncols, domain):
    """Build a sparse DomainMatrix from a list of row dicts"""
    data = {}
    for i, row in enumerate(rows):
        entries = _clean(row)
        if entries:
            data[i] = entries
    return DomainMatrix(data, (len(rows), ncols), domain)


def _as_rows(matrix):
    sdm = matrix.to_sparse().rep
    return [dict(sdm[i]) for i in sorted(sdm)]


def rref(rows, ncols, domain):
    """Reduced row echelon form: (nonzero rows, pivot columns)"""
    if not rows:
        return [], ()
    matrix = sparse_matrix(rows, ncols, domain)
    if not matrix.to_sparse().rep:
        return [], ()
    reduced, pivots = matrix.rref()
    result = _as_rows(reduced)
    logger.debug(f"rref {len(rows)}x{ncols} over {domain}: rank {len(pivots)}")
    return result[:len(pivots)], tuple(pivots)


def rank(rows, ncols, domain):
    return len(rref(rows, ncols, domain)[1])


def kernel(rows, ncols, domain):
    """Basis of {v : A v = 0}, one vector per free column"""
    reduced, pivots = rref(rows, ncols, domain)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: domain.one}
        for row, pivot in zip(reduced, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def echelon(vectors, ncols, domain):
    """Canonical echelon basis of the span of ``vectors``.

    Columns are read left to right, so callers order their coordinates with
    the leading (graded-lex largest) term first; every returned vector then
    has leading coefficient 1 and the leading columns are distinct.
    """
    return rref(list(vectors), ncols, domain)


def reduce_vector(vector, reduced, pivots):
    """Reduce ``vector`` modulo the row space of an rref basis"""
    result = dict(vector)
    for row, pivot in zip(reduced, pivots):
        coeff = result.get(pivot)
        if not coeff:
            continue
        for j, value in row.items():
            updated = result.get(j, 0) - coeff * value
            if updated:
                result[j] = updated
            else:
                result.pop(j, None)
    return _clean(result)


def solve(rows, rhs, ncols, domain):
    """Solve A v = b exactly; free variables are set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    augmented = []
    for row, value in zip(rows, rhs):
        extended = dict(row)
        if value:
            extended[ncols] = value
        augmented.append(extended)
    reduced, pivots = rref(augmented, ncols + 1, domain)
    if ncols in pivots:
        return None
    return _clean({p: row.get(ncols, domain.zero) for row, p in zip(reduced, pivots)})


def transpose_columns(columns, nrows=None):
    """Turn a list of column dicts (row -> value) into row dicts"""
    table = {}
    for j, column in enumerate(columns):
        for i, value in column.items():
            if value:
                table.setdefault(i, {})[j] = value
    keys = sorted(table) if nrows is None else range(nrows)
    return [table.get(i, {}) for i in keys]


def dense(entries, domain):
    """Dense DomainMatrix from a list of lists of domain elements"""
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    return DomainMatrix([[domain.convert(v) for v in row] for row in entries],
                        (nrows, ncols), domain)


def to_lists(matrix):
    domain = matrix.domain
    return [[domain.convert(v) for v in row] for row in matrix.to_dense().to_list()]


def identity(n, domain):
    return DomainMatrix.eye(n, domain)


def is_invertible(matrix):
    rows, cols = matrix.shape
    return rows == cols and (rows == 0 or matrix.det() != matrix.domain.zero)


def inverse(matrix):
    """Inverse of a square DomainMatrix, or None when it is singular"""
    if not is_invertible(matrix):
        return None
    return matrix.inv()

"""Readers and writers for the toolkit's text files and JSON reports.

Text formats (``#`` starts a comment everywhere):

algebra       ``dim n``, then ``i j k p/q`` per nonzero structure constant
              [e_i, e_j] = ... + p/q e_k, then ``cartan: i1 i2 ...``;
              an optional ``name: ...`` line labels the algebra
representation
              ``dim m``, then for every basis element of the algebra an m x m
              block of rows; blocks may be separated by ``---``
polynomial    one term per line ``coeff : e1 e2 ... en``; a map is a list of
              such blocks separated by ``---``, block k being component k
samples       ``x1 ... xn : v1 ... vm`` decimal floats
distribution  ``point | alpha | component | coeff``

JSON reports carry exact values as strings and are dumped with sorted keys.
"""

import json
import logging
from pathlib import Path

import numpy as np

from liecov.catalog import get_algebra
from liecov.distkit import PointDistribution
from liecov.errors import DimensionMismatch, InvalidInput
from liecov.liecore import LieAlgebra
from liecov.polyalg import (
    Field,
    PolyMap,
    format_scalar,
    parse_rational,
    parse_scalar,
    poly_ring,
    scalar,
)
from liecov.rep import Representation, check_homomorphism, from_name

logger = logging.getLogger(__name__)

BLOCK_SEPARATOR = '---'


def read_text(path):
    path = Path(path)
    if not path.is_file():
        raise InvalidInput(f"file not found: {path}")
    logger.debug(f"reading {path}")
    return path.read_text()


def _lines(text):
    """Non-empty lines with comments stripped, numbered from 1"""
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield number, line


def _header(number, line, keyword):
    parts = line.split()
    if parts[0] != keyword or len(parts) < 2:
        raise InvalidInput(f"line {number}: expected '{keyword} <n>', got '{line}'")
    try:
        return [int(p) for p in parts[1:]]
    except ValueError:
        raise InvalidInput(f"line {number}: bad header '{line}'")


# -- algebras ------------------------------------------------------------------


def parse_algebra(text, name='user'):
    lines = []
    for number, line in _lines(text):
        if line.startswith('name:'):
            name = line[5:].strip() or name
        else:
            lines.append((number, line))
    if not lines:
        raise InvalidInput("empty algebra file")
    number, line = lines[0]
    dim = _header(number, line, 'dim')[0]
    constants = {}
    cartan = None
    for number, line in lines[1:]:
        if line.startswith('cartan:'):
            try:
                cartan = tuple(int(i) for i in line[7:].split())
            except ValueError:
                raise InvalidInput(f"line {number}: bad Cartan indices '{line}'")
            continue
        parts = line.split()
        if len(parts) != 4:
            raise InvalidInput(f"line {number}: expected 'i j k p/q', got '{line}'")
        try:
            i, j, k = (int(p) for p in parts[:3])
        except ValueError:
            raise InvalidInput(f"line {number}: bad indices in '{line}'")
        if not all(0 <= index < dim for index in (i, j, k)):
            raise InvalidInput(f"line {number}: index out of range for dim {dim}")
        constants[(i, j, k)] = parse_rational(parts[3])
    if cartan is None:
        raise InvalidInput("algebra file has no 'cartan:' line")
    if any(not 0 <= h < dim for h in cartan):
        raise InvalidInput(f"Cartan index out of range for dim {dim}")
    return LieAlgebra.from_constants(name, dim, constants, cartan)


def format_algebra(algebra):
    lines = [f'name: {algebra.name}', f'dim {algebra.dim}']
    for (i, j, k), value in sorted(algebra.structure_constants.items()):
        if i < j:
            lines.append(f'{i} {j} {k} {format_scalar(value)}')
    lines.append('cartan: ' + ' '.join(str(h) for h in algebra.cartan_indices))
    return '\n'.join(lines) + '\n'


def load_algebra(source):
    """A catalog identifier or the path of an algebra file"""
    if Path(source).suffix or Path(source).is_file():
        return parse_algebra(read_text(source), name=Path(source).stem)
    return get_algebra(source)


# -- representations -----------------------------------------------------------


def parse_representation(text, algebra, label='file'):
    lines = [(n, line) for n, line in _lines(text) if line != BLOCK_SEPARATOR]
    if not lines:
        raise InvalidInput("empty representation file")
    number, line = lines[0]
    dim = _header(number, line, 'dim')[0]
    rows = lines[1:]
    if len(rows) != algebra.dim * dim:
        raise DimensionMismatch(
            f"expected {algebra.dim} blocks of {dim} rows, found {len(rows)} rows"
        )
    matrices = []
    for start in range(0, len(rows), dim):
        block = []
        for number, line in rows[start:start + dim]:
            entries = [parse_rational(v) for v in line.split()]
            if len(entries) != dim:
                raise InvalidInput(f"line {number}: expected {dim} entries")
            block.append(entries)
        matrices.append(block)
    rep = Representation(algebra, dim, tuple(matrices), label)
    check_homomorphism(rep)
    return rep


def format_representation(rep):
    lines = [f'dim {rep.target_dim}']
    for i, matrix in enumerate(rep.matrices):
        if i:
            lines.append(BLOCK_SEPARATOR)
        lines.extend(' '.join(format_scalar(v) for v in row) for row in matrix)
    return '\n'.join(lines) + '\n'


def load_representation(source, algebra):
    """A representation name ('adjoint', 'irrep:2', ...) or a file path"""
    if Path(source).suffix or Path(source).is_file():
        return parse_representation(read_text(source), algebra, label=Path(source).stem)
    return from_name(algebra, source)


# -- polynomials -----------------------------------------------------------------


def _terms(lines, nvars):
    terms = []
    for number, line in lines:
        if ':' not in line:
            raise InvalidInput(f"line {number}: expected 'coeff : e1 ... en'")
        coeff, exponents = line.split(':', 1)
        try:
            monom = tuple(int(e) for e in exponents.split())
        except ValueError:
            raise InvalidInput(f"line {number}: bad exponents '{exponents.strip()}'")
        if len(monom) != nvars:
            raise DimensionMismatch(
                f"line {number}: {len(monom)} exponents for {nvars} variables"
            )
        if min(monom, default=0) < 0:
            raise InvalidInput(f"line {number}: negative exponent")
        terms.append((monom, parse_scalar(coeff)))
    return terms


def _build(blocks, nvars):
    field = Field.join(Field.Q, *(f for block in blocks for _, (_, f) in block))
    ring = poly_ring(nvars, field)
    components = []
    for block in blocks:
        total = {}
        for monom, (value, _) in block:
            value = scalar(value, field)
            total[monom] = total[monom] + value if monom in total else value
        components.append(ring.from_dict({m: c for m, c in total.items() if c}))
    return ring, components


def parse_poly(text, nvars):
    ring, (p,) = _build([_terms(_lines(text), nvars)], nvars)
    return p


def parse_polymap(text, nvars):
    blocks = [[]]
    for number, line in _lines(text):
        if line == BLOCK_SEPARATOR:
            blocks.append([])
        else:
            blocks[-1].append((number, line))
    ring, components = _build([_terms(block, nvars) for block in blocks], nvars)
    return PolyMap(ring, tuple(components))


def format_poly(p):
    return '\n'.join(
        f"{format_scalar(coeff)} : {' '.join(str(e) for e in monom)}"
        for monom, coeff in p.terms()
    )


def format_polymap(P):
    blocks = [format_poly(c) for c in P.components]
    return ('\n' + BLOCK_SEPARATOR + '\n').join(blocks) + '\n'


# -- samples and distributions ---------------------------------------------------


def parse_samples(text, nvars=None, target_dim=None):
    samples = []
    for number, line in _lines(text):
        if ':' not in line:
            raise InvalidInput(f"line {number}: expected 'x1 ... xn : v1 ... vm'")
        left, right = line.split(':', 1)
        try:
            x = np.array([float(v) for v in left.split()])
            v = np.array([float(c) for c in right.split()])
        except ValueError:
            raise InvalidInput(f"line {number}: samples must be decimal numbers")
        if (nvars is not None and len(x) != nvars) or (
            target_dim is not None and len(v) != target_dim
        ):
            raise DimensionMismatch(f"line {number}: sample of shape {len(x)} -> {len(v)}")
        samples.append((x, v))
    return samples


def format_samples(samples):
    return '\n'.join(
        f"{' '.join(repr(float(c)) for c in x)} : {' '.join(repr(float(c)) for c in v)}"
        for x, v in samples
    ) + '\n'


def parse_distribution(text, nvars, target_dim):
    items = []
    for number, line in _lines(text):
        parts = [p.strip() for p in line.split('|')]
        if len(parts) != 4:
            raise InvalidInput(
                f"line {number}: expected 'point | alpha | component | coeff'"
            )
        point = [parse_rational(v) for v in parts[0].split()]
        try:
            alpha = [int(a) for a in parts[1].split()]
            component = int(parts[2])
        except ValueError:
            raise InvalidInput(f"line {number}: bad multi-index or component")
        coeff, _ = parse_scalar(parts[3])
        items.append((point, alpha, component, coeff))
    return PointDistribution.from_terms(nvars, target_dim, items)


def format_distribution(T):
    return ''.join(
        f"{' '.join(format_scalar(v) for v in point)} | "
        f"{' '.join(str(a) for a in alpha)} | {component} | {format_scalar(coeff)}\n"
        for point, alpha, component, coeff in T.items()
    )


# -- JSON reports ----------------------------------------------------------------


def dump_json(data):
    return json.dumps(data, indent=2, sort_keys=True) + '\n'


def _matrix(rows):
    return [[format_scalar(v) for v in row] for row in rows]


def _poly_matrix(rows):
    return [[format_poly(p) for p in row] for row in rows]


def basis_manifest(basis, algebra_name=None):
    return {
        'algebra': algebra_name or basis.algebra.name,
        'rep': basis.rep.label,
        'r': basis.r,
        'degrees': list(basis.degrees),
        'degree_bound_used': basis.degree_bound_used,
        'generators': [format_polymap(P) for P in basis.generators],
    }


def decomposition_report(decomposition):
    return {
        'rep': decomposition.basis_ref.rep.label,
        'coefficients': [format_poly(Q) for Q in decomposition.coefficients],
    }


def pointwise_report(result):
    return {
        'points': [[format_scalar(c) for c in x] for x in result.points],
        'coefficients': [list(c) for c in result.coeff_values],
        'residuals': list(result.residuals),
    }


def division_report(Y, defects=None):
    report = {'quotient': format_polymap(Y)}
    if defects is not None:
        report['tangency_defect'] = [format_poly(d) or '0' for d in defects]
    return report


def certificate_report(certificate):
    return {
        'steps': [
            {
                'degree': step.degree,
                'indices': list(step.indices),
                'lower': list(step.lower),
                'lambda': _matrix(step.lambda_matrix),
                'R': _poly_matrix(step.r_matrix),
                'M': _matrix(step.m_matrix),
                'T': _poly_matrix(step.t_matrix),
            }
            for step in certificate.steps
        ],
        'generators': [format_polymap(P) for P in certificate.new_generators],
        'degrees': list(certificate.basis.degrees),
    }


def factorization_report(factorization):
    return {
        'invariant': factorization.invariant,
        'invariant_solution_exists': factorization.invariant_solution_exists,
        'supported_at_origin': factorization.supported_at_origin,
        'thetas': [format_distribution(theta) for theta in factorization.thetas],
    }


def error_report(error):
    return error.to_dict()


# -- generator lists -------------------------------------------------------------

GENERATOR_SEPARATOR = '==='


def parse_generators(text, nvars):
    """PolyMaps in the map format, one after another, separated by ``===``"""
    chunks = [[]]
    for line in text.splitlines():
        if line.split('#', 1)[0].strip() == GENERATOR_SEPARATOR:
            chunks.append([])
        else:
            chunks[-1].append(line)
    maps = [parse_polymap('\n'.join(chunk), nvars) for chunk in chunks
            if any(_lines('\n'.join(chunk)))]
    if not maps:
        raise InvalidInput("no generators found")
    return maps


def format_generators(maps):
    return (GENERATOR_SEPARATOR + '\n').join(format_polymap(P) for P in maps)

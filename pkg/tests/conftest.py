import os
import random
from pathlib import Path

import pytest

from liecov.catalog import sl, so3
from liecov.covariants import invariant_generators, invariant_space, kostant_basis
from liecov.polyalg import poly_ring
from liecov.rep import adjoint_rep, irreducible_sl2

SEED_DIR = Path(__file__).resolve().parent.parent / 'seed_data'


@pytest.fixture(scope="session", autouse=True)
def test_environment():
    """Testing configuration for the entire session."""
    os.environ['LIECOV_ENV'] = 'testing'
    os.environ.setdefault('LIECOV_SEED', '0')
    return {
        'LIECOV_ENV': 'testing',
        'LIECOV_SEED': os.environ['LIECOV_SEED'],
    }


@pytest.fixture(scope="session")
def seed():
    return int(os.environ.get('LIECOV_SEED', '0'))


@pytest.fixture
def rng(seed):
    """Seeded generator for random coefficients."""
    return random.Random(seed)


@pytest.fixture(scope="session")
def seed_dir():
    return SEED_DIR


@pytest.fixture(scope="session")
def sl2():
    return sl(2)


@pytest.fixture(scope="session")
def sl3():
    return sl(3)


@pytest.fixture(scope="session")
def so3_algebra():
    return so3()


@pytest.fixture(scope="session")
def sl2_adjoint(sl2):
    return adjoint_rep(sl2)


@pytest.fixture(scope="session")
def sl3_adjoint(sl3):
    return adjoint_rep(sl3)


@pytest.fixture(scope="session")
def sl2_irrep2(sl2):
    return irreducible_sl2(2)


@pytest.fixture(scope="session")
def sl2_basis(sl2_adjoint):
    return kostant_basis(sl2_adjoint, 4)


@pytest.fixture(scope="session")
def sl3_basis(sl3_adjoint):
    return kostant_basis(sl3_adjoint, 6)


@pytest.fixture(scope="session")
def irrep2_basis(sl2_irrep2):
    return kostant_basis(sl2_irrep2, 4)


@pytest.fixture(scope="session")
def sl2_invariants(sl2):
    return invariant_generators(sl2, 4)


@pytest.fixture(scope="session")
def sl3_invariants(sl3):
    return invariant_generators(sl3, 6)


@pytest.fixture
def random_invariant():
    """Random invariant polynomials of bounded degree with small integer coefficients"""
    def make(algebra, max_degree, rng):
        ring = poly_ring(algebra.dim)
        total = ring.zero
        for degree in range(max_degree + 1):
            for p in invariant_space(algebra, degree):
                total += p * rng.randint(-3, 3)
        return total

    return make

from itertools import combinations

import numpy as np
import pytest
from sympy import QQ

from liecov.catalog import (
    DEFAULT_DEGREE_BOUNDS,
    catalog_names,
    default_degree_bound,
    get_algebra,
    sl,
)
from liecov.errors import InvalidAlgebra, InvalidInput
from liecov.liecore import LieAlgebra, trace_of_ad


class TestBracket:
    """Structure constants of the catalog sl(2) with basis (h, e, f)."""

    def test_sl2_relations(self, sl2):
        """Test [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
        h, e, f = sl2.basis
        assert sl2.bracket(h, e) == e * 2
        assert sl2.bracket(h, f) == f * -2
        assert sl2.bracket(e, f) == h

    def test_bracket_is_antisymmetric(self, sl3):
        """Test [x, y] = -[y, x] on basis pairs."""
        for x in sl3.basis:
            for y in sl3.basis:
                assert sl3.bracket(x, y) == -sl3.bracket(y, x)

    def test_ad_matrix_of_h(self, sl2):
        """Test ad(h) is diag(0, 2, -2)."""
        assert sl2.ad_matrix(sl2.basis[0]) == [
            [0, 0, 0],
            [0, 2, 0],
            [0, 0, -2],
        ]

    def test_trace_of_ad_vanishes(self, sl3, rng):
        x = sl3.element(rng.randint(-5, 5) for _ in range(sl3.dim))
        assert trace_of_ad(sl3, x) == 0


class TestKillingForm:
    """Adjoint trace form."""

    def test_sl2_kappa_values(self, sl2):
        """Test kappa(h, h) = 8 and kappa(e, f) = 4."""
        h, e, f = sl2.basis
        assert sl2.kappa(h, h) == 8
        assert sl2.kappa(e, f) == 4
        assert sl2.kappa(e, e) == 0
        assert sl2.kappa_matrix == [[8, 0, 0], [0, 0, 4], [0, 4, 0]]

    def test_kappa_is_invariant(self, sl3, rng):
        """Test kappa([x, y], z) = -kappa(y, [x, z])."""
        def draw():
            return sl3.element(rng.randint(-3, 3) for _ in range(sl3.dim))

        for _ in range(5):
            x, y, z = draw(), draw(), draw()
            assert sl3.kappa(sl3.bracket(x, y), z) == -sl3.kappa(y, sl3.bracket(x, z))

    def test_kappa_inverse(self, sl2):
        assert sl2.kappa_inverse == [
            [QQ(1, 8), 0, 0],
            [0, 0, QQ(1, 4)],
            [0, QQ(1, 4), 0],
        ]


class TestRegularElements:
    """Centralizers and regularity."""

    def test_centralizer_of_h(self, sl2):
        h = sl2.basis[0]
        assert sl2.centralizer(h) == [h]
        assert sl2.is_regular(h)

    def test_nilpotent_element_of_sl2_is_regular(self, sl2):
        assert sl2.is_regular(sl2.basis[1])

    def test_zero_is_not_regular(self, sl2):
        assert not sl2.is_regular(sl2.zero())
        assert len(sl2.centralizer(sl2.zero())) == 3

    def test_random_regular_is_deterministic(self, sl3):
        """Test the same seed gives the same regular element."""
        x = sl3.random_regular(7)
        assert x == sl3.random_regular(7)
        assert sl3.is_regular(x)
        assert all(-10 <= c <= 10 for c in x)

    @pytest.mark.parametrize("name", ['sl2', 'sl3', 'so3'])
    def test_random_samples_are_regular(self, name):
        """Test every one of 100 random box samples is regular."""
        algebra = get_algebra(name)
        rng = np.random.default_rng(0)
        regular = sum(algebra.is_regular(algebra.random_element(rng)) for _ in range(100))
        assert regular == 100

    def test_rank(self, sl2, sl3, so3_algebra):
        assert sl2.rank == 1
        assert sl3.rank == 2
        assert so3_algebra.rank == 1


class TestValidation:
    """Algebras built from user constants."""

    def test_antisymmetry_conflict_rejected(self):
        with pytest.raises(InvalidAlgebra):
            LieAlgebra.from_constants('bad', 2, {(0, 1, 1): 1, (1, 0, 1): 1}, (0,))

    def test_jacobi_failure_rejected(self):
        """Test a bracket violating the Jacobi identity."""
        constants = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 2, (0, 2, 2): 1}
        with pytest.raises(InvalidAlgebra):
            LieAlgebra.from_constants('bad', 3, constants, (2,))

    def test_abelian_algebra_rejected(self):
        """Test a degenerate trace form is rejected."""
        with pytest.raises(InvalidAlgebra):
            LieAlgebra.from_constants('abelian', 2, {}, (0, 1))

    def test_wrong_rank_rejected(self):
        sl2 = sl(2)
        constants = {key: value for key, value in sl2.structure_constants.items()}
        with pytest.raises(InvalidAlgebra):
            LieAlgebra.from_constants('sl2-rank2', 3, constants, (0, 1))


class TestCatalog:
    """Catalog lookup."""

    def test_catalog_names(self):
        for name in ('sl2', 'sl3', 'sl4', 'so3', 'sl(3)'):
            assert get_algebra(name).dim in (3, 8, 15)

    def test_sl_is_cached(self):
        assert sl(3) is get_algebra('sl3')

    def test_unknown_algebra(self):
        with pytest.raises(InvalidInput):
            get_algebra('e8')

    def test_default_degree_bounds(self, sl2, sl3):
        assert default_degree_bound(sl2) == DEFAULT_DEGREE_BOUNDS['sl2'] == 4
        assert default_degree_bound(sl3) == 6

    @pytest.mark.parametrize("name", catalog_names())
    def test_jacobi_on_every_triple(self, name):
        """Test antisymmetry on every pair and Jacobi on every triple of basis elements."""
        algebra = get_algebra(name)
        bracket = algebra.bracket
        for ei, ej in combinations(algebra.basis, 2):
            assert bracket(ei, ej) == -bracket(ej, ei)
        for ei, ej, ek in combinations(algebra.basis, 3):
            total = (bracket(ei, bracket(ej, ek)) + bracket(ej, bracket(ek, ei))
                     + bracket(ek, bracket(ei, ej)))
            assert total.is_zero()

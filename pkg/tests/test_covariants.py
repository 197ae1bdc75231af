import pytest
from sympy import QQ

from liecov import linalg
from liecov.catalog import sl
from liecov.covariants import (
    covariant_space,
    dual_basis,
    equivariance_defect,
    invariant_generators,
    invariant_space,
    is_covariant,
    is_free_through,
    is_pointwise_fixed,
    kostant_basis,
    pointwise_fixed_space,
    verify_k2,
)
from liecov.errors import DegreeBoundExceeded, NotRegular
from liecov.polyalg import constant_map, evaluate, identity_map, poly_ring
from liecov.rep import adjoint_rep, irreducible_sl2, standard_rep, symmetric_power_sl3


class TestEquivariance:
    """Infinitesimal covariance of polynomial maps."""

    def test_identity_is_covariant(self, sl2_adjoint):
        assert all(d.is_zero() for d in equivariance_defect(identity_map(3), sl2_adjoint))

    def test_constant_is_not_covariant(self, sl2_adjoint):
        """Test the constant map h fails for e and f."""
        defects = equivariance_defect(constant_map((1, 0, 0), 3), sl2_adjoint)
        assert defects[0].is_zero()
        assert not defects[1].is_zero()
        assert not defects[2].is_zero()

    def test_invariant_times_covariant(self, sl3, sl3_adjoint):
        p = invariant_space(sl3, 2)[0]
        assert is_covariant(identity_map(8) * p, sl3_adjoint)


class TestCovariantSpaces:
    """Homogeneous covariants solved degree by degree."""

    def test_sl2_adjoint_degree_one(self, sl2_adjoint):
        assert covariant_space(sl2_adjoint, 1) == [identity_map(3)]

    def test_sl2_adjoint_degree_two_is_empty(self, sl2_adjoint):
        assert covariant_space(sl2_adjoint, 2) == []

    def test_sl3_adjoint_degree_two(self, sl3_adjoint):
        """Test x -> x^2 - tr(x^2)/3 spans the degree 2 covariants."""
        space = covariant_space(sl3_adjoint, 2)
        assert len(space) == 1
        assert is_covariant(space[0], sl3_adjoint)

    def test_every_solution_is_covariant(self, sl2_irrep2):
        for degree in range(4):
            for P in covariant_space(sl2_irrep2, degree):
                assert is_covariant(P, sl2_irrep2)

    def test_negative_degree(self, sl2_adjoint):
        assert covariant_space(sl2_adjoint, -1) == []


class TestInvariants:
    """Invariant polynomials and generators."""

    def test_sl2_degree_two(self, sl2):
        ring = poly_ring(3)
        a, b, c = ring.gens
        assert invariant_space(sl2, 2) == [a ** 2 + b * c]

    def test_sl2_degree_three_is_empty(self, sl2):
        assert invariant_space(sl2, 3) == []

    def test_constants(self, sl3):
        assert invariant_space(sl3, 0) == [poly_ring(8).one]

    def test_sl2_generators(self, sl2_invariants):
        assert sl2_invariants.degrees == (2,)
        assert sl2_invariants.qmaps[0] == identity_map(3) * QQ(1, 4)

    def test_sl3_generators(self, sl3_invariants):
        assert sl3_invariants.degrees == (2, 3)
        assert sl3_invariants.q_degrees == (1, 2)

    def test_degree_bound_too_small(self, sl3):
        with pytest.raises(DegreeBoundExceeded):
            invariant_generators(sl3, 2)


class TestKostantBasis:
    """Module bases of the covariants."""

    def test_sl2_adjoint_is_identity(self, sl2_basis):
        assert sl2_basis.r == 1
        assert sl2_basis.degrees == (1,)
        assert sl2_basis.generators[0] == identity_map(3)

    def test_sl3_adjoint_degrees(self, sl3_basis):
        assert sl3_basis.r == 2
        assert sl3_basis.degrees == (1, 2)
        assert sl3_basis.degree_bound_used == 2

    def test_so3_adjoint(self, so3_algebra):
        basis = kostant_basis(adjoint_rep(so3_algebra), 4)
        assert basis.r == 1
        assert basis.degrees == (1,)

    def test_sl2_irrep2(self, irrep2_basis):
        assert irrep2_basis.r == 1
        assert irrep2_basis.degrees == (2,)

    def test_zero_module(self):
        """Test a representation without zero weight has an empty basis."""
        basis = kostant_basis(standard_rep(sl(2)), 4)
        assert basis.r == 0
        assert basis.generators == ()

    def test_sym3_of_sl3(self):
        assert kostant_basis(symmetric_power_sl3(3), 6).r == 1

    def test_degree_bound_exceeded(self, sl3_adjoint):
        with pytest.raises(DegreeBoundExceeded):
            kostant_basis(sl3_adjoint, 1)

    def test_threads_give_same_basis(self, sl3_adjoint, sl3_basis):
        basis = kostant_basis(sl3_adjoint, 3, threads=2)
        assert basis.degrees == sl3_basis.degrees
        assert all(P == Q for P, Q in zip(basis.generators, sl3_basis.generators))

    def test_module_is_free(self, sl2_basis, sl3_basis, irrep2_basis):
        """Test no invariant relation sum Q_i P_i = 0 with degree up to 6."""
        for basis in (sl2_basis, sl3_basis, irrep2_basis):
            assert is_free_through(basis, 6)

    def test_dual_basis(self, sl2_basis):
        dual = dual_basis(sl2_basis)
        assert dual.r == 1
        assert dual.rep.label == 'dual:adjoint'


class TestPointwise:
    """Values of the basis at regular points."""

    @pytest.mark.parametrize("seed", range(10))
    def test_k2_sl3(self, sl3, sl3_basis, seed):
        assert verify_k2(sl3_basis, sl3.random_regular(seed))

    @pytest.mark.parametrize("seed", range(10))
    def test_k2_sl2_irrep(self, sl2, irrep2_basis, seed):
        assert verify_k2(irrep2_basis, sl2.random_regular(seed))

    @pytest.mark.parametrize("seed", range(5))
    def test_gradients_span_centralizer(self, sl2_invariants, sl3_invariants, seed):
        """Test q_1(x), ..., q_l(x) is a basis of the centralizer of x."""
        for gens in (sl2_invariants, sl3_invariants):
            algebra = gens.algebra
            x = algebra.random_regular(seed)
            values = [
                {k: c for k, c in enumerate(evaluate(q, x)) if c} for q in gens.qmaps
            ]
            centralizer = [{k: c for k, c in enumerate(z) if c}
                           for z in algebra.centralizer(x)]
            assert len(centralizer) == algebra.rank
            assert linalg.rank(values, algebra.dim, QQ) == algebra.rank
            assert linalg.rank(values + centralizer, algebra.dim, QQ) == algebra.rank

    def test_k2_requires_regular(self, sl2, sl2_basis):
        with pytest.raises(NotRegular):
            verify_k2(sl2_basis, sl2.zero())

    def test_fixed_space_of_h(self, sl2):
        """Test the centralizer of h fixes only the zero weight of irrep 2."""
        rep = irreducible_sl2(2)
        fixed = pointwise_fixed_space(rep, sl2.basis[0])
        assert fixed == [[0, 0, 1, 0, 0]]
        assert is_pointwise_fixed(rep, sl2.basis[0], [0, 0, 5, 0, 0])
        assert not is_pointwise_fixed(rep, sl2.basis[0], [1, 0, 0, 0, 0])

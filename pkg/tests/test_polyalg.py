import random

import numpy as np
import pytest
from sympy import QQ

from liecov.errors import DimensionMismatch, InvalidInput
from liecov.polyalg import (
    Field,
    GradedIndex,
    PolyMap,
    apply_field,
    bracket_map,
    constant_map,
    directional_derivative,
    evaluate,
    evaluate_numeric,
    format_scalar,
    gaussian,
    identity_map,
    jet_value,
    kappa_gradient,
    kappa_pairing,
    kappa_poly,
    linear_map,
    monomial_value,
    monomials,
    parse_scalar,
    poly_ring,
    scalar_map,
    tau_field,
    to_complex,
    total_degree,
)


def random_poly(ring, max_degree, rng):
    """Small integer coefficients on every monomial up to ``max_degree``"""
    return ring.from_dict({m: QQ(rng.randint(-3, 3)) for d in range(max_degree + 1)
                           for m in monomials(ring.ngens, d)})


class TestScalars:
    """Exact scalar parsing and formatting."""

    def test_parse_rational(self):
        value, field = parse_scalar('-3/4')
        assert value == QQ(-3, 4)
        assert field is Field.Q

    def test_parse_gaussian(self):
        value, field = parse_scalar('1/2+3/4i')
        assert field is Field.QI
        assert value == gaussian(QQ(1, 2), QQ(3, 4))

    def test_parse_pure_imaginary(self):
        assert parse_scalar('-i')[0] == gaussian(0, -1)

    def test_format_scalar(self):
        assert format_scalar(QQ(5, 3)) == '5/3'
        assert format_scalar(QQ(-2)) == '-2'
        assert format_scalar(gaussian(1, -2)) == '1-2i'

    def test_bad_scalar(self):
        with pytest.raises(InvalidInput):
            parse_scalar('one half')


class TestMonomials:
    def test_graded_lex_order(self):
        """Test monomials run largest first."""
        assert monomials(3, 2)[0] == (2, 0, 0)
        assert len(monomials(3, 2)) == 6
        assert len(monomials(8, 3)) == 120

    def test_monomial_value_is_factorial(self):
        assert monomial_value((2, 0, 3)) == 12

    def test_total_degree_of_zero(self):
        assert total_degree(poly_ring(3).zero) == -1


class TestPolyMap:
    """Polynomial maps and their arithmetic."""

    def test_evaluate_identity(self):
        x = (QQ(1), QQ(2), QQ(-3))
        assert evaluate(identity_map(3), x) == list(x)

    def test_evaluate_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            evaluate(identity_map(3), (1, 2))

    def test_scalar_promotion_to_gaussian(self):
        P = identity_map(2) * gaussian(0, 1)
        assert P.field is Field.QI
        assert evaluate(P, (1, 0)) == [gaussian(0, 1), gaussian(0)]

    def test_polynomial_times_map(self):
        ring = poly_ring(2)
        a, b = ring.gens
        P = identity_map(2) * (a + b)
        assert P.components == (a ** 2 + a * b, a * b + b ** 2)
        assert P.homogeneous_degree == 2

    def test_homogeneous_parts(self):
        ring = poly_ring(2)
        a, b = ring.gens
        P = PolyMap(ring, (a + b ** 2, ring(3)))
        parts = P.homogeneous_parts()
        assert sorted(parts) == [0, 1, 2]
        assert parts[1].components == (a, ring.zero)

    def test_equality_across_fields(self):
        assert identity_map(3) == identity_map(3, Field.QI)

    def test_evaluate_numeric_shape(self):
        values = evaluate_numeric(identity_map(3), np.array([[1.0, 2.0, 3.0], [0.5, 0, 0]]))
        assert values.shape == (2, 3)
        assert values[1, 0] == pytest.approx(0.5)


class TestDerivatives:
    """Directional derivatives and vector fields."""

    def test_directional_derivative_of_square(self):
        ring = poly_ring(2)
        a, b = ring.gens
        P = PolyMap(ring, (a * a,))
        direction = constant_map((1, 0), 2)
        assert directional_derivative(P, direction).components == (2 * a,)

    def test_jet_value(self):
        ring = poly_ring(2)
        a, b = ring.gens
        p = a ** 2 * b
        assert jet_value(p, (QQ(3), QQ(5)), (1, 0)) == 30
        assert jet_value(p, (0, 0), (2, 1)) == 2

    def test_tau_field_of_h(self, sl2):
        """Test tau(h) is x -> [x, h] = (0, -2b, 2c)."""
        ring = poly_ring(3)
        a, b, c = ring.gens
        field = tau_field(sl2, sl2.basis[0])
        assert field.components == (ring.zero, -2 * b, 2 * c)

    def test_apply_field_annihilates_invariants(self, sl3):
        p = kappa_poly(sl3)
        for xi in sl3.basis:
            assert apply_field(tau_field(sl3, xi), p) == 0

    def test_kappa_gradient_sl2(self, sl2):
        """Test the gradient of a^2 + bc is x / 4."""
        ring = poly_ring(3)
        a, b, c = ring.gens
        q = kappa_gradient(a ** 2 + b * c, sl2)
        assert q == identity_map(3) * QQ(1, 4)

    def test_kappa_pairing_of_identity(self, sl2):
        ring = poly_ring(3)
        a, b, c = ring.gens
        assert kappa_pairing(sl2, identity_map(3), identity_map(3)) == 8 * a ** 2 + 8 * b * c

    def test_bracket_map(self, sl2):
        """Test [x, e] = -c h + 2a e."""
        ring = poly_ring(3)
        a, b, c = ring.gens
        X = bracket_map(sl2, identity_map(3), constant_map((0, 1, 0), 3))
        assert X.components == (-c, 2 * a, ring.zero)

    def test_linear_map(self):
        ring = poly_ring(2)
        a, b = ring.gens
        assert linear_map([[0, 1], [1, 0]]).components == (b, a)


class TestGradedIndex:
    def test_vector_roundtrip(self):
        index = GradedIndex(3, 1, 3)
        assert len(index) == 9
        assert index.polymap(index.vector(identity_map(3))) == identity_map(3)

    def test_filtered_index_rejects_outside_terms(self):
        index = GradedIndex(3, 1, 3, allowed=lambda m, c: m.index(1) == c)
        assert len(index) == 3
        with pytest.raises(InvalidInput):
            index.vector(constant_map((0, 0, 0), 3) + linear_map([[0, 1, 0]] * 3))


class TestDerivativeProperties:
    """Derivatives agree with finite differences and obey the Leibniz rule."""

    @pytest.mark.parametrize("draw", range(5))
    def test_matches_finite_differences(self, draw):
        rng = np.random.default_rng(draw)
        ring = poly_ring(3)
        a, b, c = ring.gens
        P = PolyMap(ring, (a ** 2 * b - 3 * c ** 3 + a, b * c - QQ(1, 2) * a ** 2 * c))
        x = [QQ(int(n), int(d)) for n, d in zip(rng.integers(-5, 6, 3), rng.integers(1, 5, 3))]
        v = [QQ(int(n), int(d)) for n, d in zip(rng.integers(-5, 6, 3), rng.integers(1, 5, 3))]
        exact = [to_complex(value) for value in
                 evaluate(directional_derivative(P, constant_map(v, 3)), x)]
        point = np.array([to_complex(value) for value in x])
        step = 1e-6 * np.array([to_complex(value) for value in v])
        approx = (evaluate_numeric(P, point + step)[0] - evaluate_numeric(P, point)[0]) / 1e-6
        for d, fd in zip(exact, approx):
            assert abs(d - fd) <= 1e-3 * (1 + abs(d))

    @pytest.mark.parametrize("draw", range(5))
    def test_leibniz_rule(self, draw):
        rng = random.Random(draw)
        ring = poly_ring(3)
        f, g = random_poly(ring, 2, rng), random_poly(ring, 2, rng)
        X = PolyMap(ring, tuple(random_poly(ring, 2, rng) for _ in range(3)))
        assert apply_field(X, f * g) == apply_field(X, f) * g + f * apply_field(X, g)


class TestRingAxioms:
    """Exact polynomial arithmetic and evaluation."""

    @pytest.mark.parametrize("draw", range(3))
    def test_associative_and_distributive(self, draw):
        rng = random.Random(draw)
        ring = poly_ring(3)
        p, q, r = (random_poly(ring, 4, rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    @pytest.mark.parametrize("draw", range(5))
    def test_evaluate_is_multiplicative(self, draw):
        rng = random.Random(draw)
        ring = poly_ring(3)
        P = PolyMap(ring, tuple(random_poly(ring, 2, rng) for _ in range(2)))
        Q = random_poly(ring, 2, rng)
        x = [QQ(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
        factor = evaluate(scalar_map(Q), x)[0]
        assert evaluate(P * Q, x) == [value * factor for value in evaluate(P, x)]

"""The product model: Lie algebra data, vector fields, brackets, densities."""

from fractions import Fraction

import pytest

from redstar.funcs import Func
from redstar.geometry import (
    DensityWeight,
    LieAlgebraData,
    ModelSpace,
    abelian_lie,
    aff1,
    classical_BC_member,
    classical_reduced_bracket,
    fiber_integral,
    fundamental_vector_field,
    gaussian_base_weight,
    heisenberg3,
    lebesgue_weight,
    lift_density,
    modular_vector_field,
    poisson_bracket,
)
from redstar.scalars import GaussRational


class TestLieAlgebraData:
    def test_antisymmetry_diagnostics(self):
        with pytest.raises(ValueError, match=r"antisymmetry violated at C\[1\]\[2\]\^1"):
            LieAlgebraData(2, {(0, 1, 0): 1, (1, 0, 0): 1})

    def test_jacobi_diagnostics(self):
        bad = {(0, 1, 2): 1, (1, 0, 2): -1,
               (0, 2, 1): 1, (2, 0, 1): -1,
               (1, 2, 2): 1, (2, 1, 2): -1}
        with pytest.raises(ValueError, match="Jacobi identity violated"):
            LieAlgebraData(3, bad)

    def test_modular_covector(self):
        assert aff1().modular == (Fraction(1), Fraction(0))
        assert heisenberg3().modular == (0, 0, 0)
        assert heisenberg3().is_unimodular and not aff1().is_unimodular

    def test_nilpotency_detection(self):
        assert abelian_lie(2).nilpotency_class == 1
        assert heisenberg3().nilpotency_class == 2
        assert aff1().nilpotency_class is None

    def test_group_coordinates_gated(self):
        assert ModelSpace(heisenberg3(), 2, 3).has_group
        assert not ModelSpace(aff1(), 2, 3).has_group
        with pytest.raises(ValueError):
            ModelSpace(aff1(), 2, 3, group_level=True)


class TestFundamentalFields:
    def test_abelian_line(self, model_r):
        xi = fundamental_vector_field(model_r, (1,), on="C")
        g = model_r.var("g")
        assert (xi.apply(g) + model_r.one()).is_zero()  # -d/dg

    def test_heisenberg_example(self, model_heis):
        xi = fundamental_vector_field(model_heis, model_heis.basis_vector(0), on="C")
        # -(d/dg1 - (g2/2) d/dg3)
        assert (xi.apply(model_heis.var("g1")) + model_heis.one()).is_zero()
        assert (xi.apply(model_heis.var("g3"))
                - model_heis.var("g2") * Fraction(1, 2)).is_zero()

    def test_coadjoint_part_abelian(self, model_r):
        xi = fundamental_vector_field(model_r, (1,), on="M")
        assert xi.apply(model_r.var("J")).is_zero()

    def test_bracket_antihomomorphism(self, model_heis, rand):
        m = model_heis
        t = rand.poly(m, 3)
        for a in range(3):
            for b in range(3):
                xa = m.fundamental_field_M(m.basis_vector(a))
                xb = m.fundamental_field_M(m.basis_vector(b))
                lhs = xa.apply(xb.apply(t)) - xb.apply(xa.apply(t))
                br = m.lie.bracket_vec(m.basis_vector(a), m.basis_vector(b))
                rhs = m.fundamental_field_M(br).apply(t) * GaussRational(-1)
                assert (lhs - rhs).is_zero()


class TestPoissonBracket:
    def test_canonical_pair(self, model_r):
        m = model_r
        assert (poisson_bracket(m, m.var("q"), m.var("p")) - m.one()).is_zero()

    def test_equivariance(self, model_heis):
        m = model_heis
        for a in range(3):
            for b in range(3):
                br = poisson_bracket(m, m.momentum(a), m.momentum(b))
                expect = m.momentum_of(m.lie.bracket_vec(
                    m.basis_vector(a), m.basis_vector(b)))
                assert (br - expect).is_zero()

    def test_antisymmetry_and_jacobi(self, model_heis, rand):
        m = model_heis
        for _ in range(6):
            f, g, h = rand.poly(m, 2), rand.poly(m, 2), rand.poly(m, 2)
            assert (poisson_bracket(m, f, f)).is_zero()
            assert (poisson_bracket(m, f, g) + poisson_bracket(m, g, f)).is_zero()
            jac = poisson_bracket(m, f, poisson_bracket(m, g, h))
            jac = jac + poisson_bracket(m, g, poisson_bracket(m, h, f))
            jac = jac + poisson_bracket(m, h, poisson_bracket(m, f, g))
            assert jac.is_zero()

    def test_leibniz(self, model_r, rand):
        m = model_r
        f, g, h = rand.poly(m, 2), rand.poly(m, 2), rand.poly(m, 2)
        lhs = poisson_bracket(m, f, g * h)
        rhs = poisson_bracket(m, f, g) * h + g * poisson_bracket(m, f, h)
        assert (lhs - rhs).is_zero()

    def test_group_coordinate_bracket(self, model_r):
        m = model_r
        br = poisson_bracket(m, m.var("g"), m.momentum(0))
        assert (br + m.one()).is_zero()  # {g, J} = -1 for the abelian line


class TestConstraintAlgebra:
    def test_momentum_square_is_member(self, model_heis):
        m = model_heis
        assert classical_BC_member(m, m.momentum(0) * m.momentum(0))

    def test_base_only_member_abelian(self, model_r, rand):
        assert classical_BC_member(model_r, rand.base(model_r, 3))

    def test_group_coordinate_not_member(self, model_r):
        assert not classical_BC_member(model_r, model_r.var("g"))

    def test_reduced_bracket(self, model_r):
        m = model_r
        q, p = m.var("q"), m.var("p")
        assert (classical_reduced_bracket(m, q, p) - m.one()).is_zero()
        assert (classical_reduced_bracket(m, q * q, p) - q * 2).is_zero()
        assert classical_reduced_bracket(m, q, m.constant(5)).is_zero()


class TestDensities:
    def test_lift_is_module_map(self, model_r):
        m = model_r
        om = gaussian_base_weight(m, 1)
        mu = lift_density(m, om)
        assert mu.gauss == om.gauss
        mu2 = lift_density(m, om.scaled(2))
        assert mu2.prefactor == (om.prefactor * 2)
        assert mu.leading_constant().re > 0

    def test_lift_requires_nilpotent(self, model_aff):
        with pytest.raises(ValueError):
            lift_density(model_aff, gaussian_base_weight(model_aff, 1))

    def test_fiber_integral_examples(self, model_r, rand):
        m = model_r
        phi = m.fiber_state(m.one()) * m.fiber_state(m.one())  # e^{-g^2}
        out = fiber_integral(m, phi)
        assert out.pi4 == 2 and out.series.coeffs[0].constant_term() == GaussRational(1)
        u = rand.base(m, 2)
        out = fiber_integral(m, u * phi)
        assert (out - Func(u.series, {}, 2)).is_zero()
        g2 = m.var("g") * m.var("g") * phi
        assert fiber_integral(m, g2).series.coeffs[0].constant_term() == GaussRational(
            Fraction(1, 2)
        )

    def test_fiber_integral_kills_derivatives(self, model_heis, rand):
        m = model_heis
        phi = m.fiber_state(rand.poly(m, 2, m.base_names + m.group_names))
        phi = phi * m.fiber_state(m.one())
        for a in range(3):
            out = fiber_integral(m, m.lie_derivative_C(a, phi))
            assert out.is_zero()

    def test_modular_vector_field(self, model_r):
        m = model_r
        assert modular_vector_field(m, lebesgue_weight(m)).is_zero()
        om = gaussian_base_weight(m, 1)
        delta = modular_vector_field(m, om)
        assert (delta.apply(m.var("q")) - m.var("p") * 2).is_zero()
        assert delta.apply(m.one()).is_zero()
        f, g = m.var("q") * m.var("p"), m.var("q")
        lhs = delta.apply(f * g)
        rhs = delta.apply(f) * g + f * delta.apply(g)
        assert (lhs - rhs).is_zero()

"""The conjugation transport, the positive functional and its representation,
the weighted involution, KMS structures and the modular class."""

from fractions import Fraction

import pytest

from redstar.funcs import Func
from redstar.geometry import (
    ModelSpace,
    abelian_lie,
    aff1,
    gaussian_base_weight,
    heisenberg3,
    lebesgue_weight,
    lift_density,
    modular_vector_field,
)
from redstar.involution import (
    PositiveFunctional,
    conj_transport,
    conj_transport_check,
    density_ratio_hat,
    gns_check,
    inner_product_mu,
    involution_comparison,
    kms_check,
    kms_functional,
    modular_class,
    modular_inner_difference,
    omega_mu,
    reduced_involution,
    transport_A,
)
from redstar.koszul import ReductionConfig, SuperObservable, quantized_koszul, right_module
from redstar.scalars import GaussRational, I
from redstar.series import LambdaSeries
from redstar.starprod import moyal
from redstar.suites import SuiteContext, suite_gns, suite_involution, suite_kms


def mstar(m):
    return lambda a, b: moyal(m, a, b)


class TestConjTransport:
    def test_displays_all_models_and_kappas(self, model_r, model_heis, model_aff, rand):
        for m in (model_r, model_heis, model_aff):
            for kap in (0, Fraction(1, 2), [Fraction(1, 2), 1]):
                cfg = ReductionConfig(m, kap)
                rep = conj_transport_check(cfg, rand.poly(m, 2))
                assert all(rep.values()), (m.lie.label, kap, rep)

    def test_abelian_b_vanishes(self, model_r, rand):
        cfg = ReductionConfig(model_r, Fraction(1, 2))
        ops = conj_transport(cfg, rand.poly(model_r, 2))
        assert ops["B"].is_zero()

    def test_transport_kills_prolongations_at_leading_order(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        phi = m.prolong(rand.poly(m, 2, m.base_names + m.group_names))
        a0 = transport_A(cfg, 0, phi)
        assert a0.series.coeffs[0].is_zero()

    def test_invariant_functions_conjugate_cleanly(self, model_r, rand):
        from redstar.koszul import deformed_restriction

        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        u = rand.base(m, 3)  # base functions are invariant
        lhs = deformed_restriction(cfg, u).conj()
        rhs = deformed_restriction(cfg, u.conj())
        assert (lhs - rhs).is_zero()


class TestPositiveFunctional:
    def test_positivity_battery(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        mu = lift_density(m, gaussian_base_weight(m, 1))
        posf = PositiveFunctional(cfg, mu)
        for _ in range(25):
            f = rand.poly(m, 2).with_profile(
                {g: Fraction(1, 2) for g in m.group_names})
            assert posf.positivity(f)

    def test_gelfand_ideal(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        mu = lift_density(m, gaussian_base_weight(m, 1))
        posf = PositiveFunctional(cfg, mu)
        x = SuperObservable(m, {(0,): m.fiber_state(rand.poly(m, 1))})
        elt = quantized_koszul(cfg, x).comps.get((), m.zero())
        assert posf.in_gelfand_ideal(elt)
        assert omega_mu(cfg, cfg.star(elt.conj(), elt), mu).is_zero()

    def test_gns_identification(self, model_r, model_heis, rand):
        for m in (model_r, model_heis):
            cfg = ReductionConfig(m, Fraction(1, 2))
            mu = lift_density(m, gaussian_base_weight(m, 1))
            f, g = rand.state(m, 2), rand.state(m, 2)
            rep = gns_check(cfg, f, g, mu)
            assert rep["isometry"] and rep["intertwining"]

    def test_inner_product_normalization(self):
        # trivial base: the half-Gaussian pairs to the plain Gaussian integral
        m = ModelSpace(abelian_lie(1), base_dim=0, order=3)
        cfg = ReductionConfig(m, Fraction(1, 2))
        mu = lift_density(m, lebesgue_weight(m))
        phi = m.fiber_state(m.one())
        val = inner_product_mu(cfg, phi, phi, mu)
        assert val.coeffs[0].value == GaussRational(1)
        assert val.coeffs[0].pi4 == 2
        assert all(c.is_zero() for c in val.coeffs[1:])


class TestReducedInvolution:
    def test_lebesgue_is_conjugation(self, model_r, rand):
        m = model_r
        u = rand.base(m, 3) + rand.base(m, 2) * I
        assert (reduced_involution(m, u, lebesgue_weight(m)) - u.conj()).is_zero()

    def test_unit_fixed(self, model_r):
        m = model_r
        om = gaussian_base_weight(m, 1)
        assert (reduced_involution(m, m.one(), om) - m.one()).is_zero()

    def test_gaussian_first_order(self, model_r):
        m = model_r
        om = gaussian_base_weight(m, 1)
        q = m.var("q")
        us = reduced_involution(m, q, om)
        first = us.series.coeffs[1]
        assert first == (m.var("p").series.coeffs[0] * (I * 2))

    def test_axioms(self, model_r, rand):
        m = model_r
        om = gaussian_base_weight(m, 1)
        mul = mstar(m)
        for _ in range(6):
            u, v = rand.base(m, 2), rand.base(m, 2)
            su = reduced_involution(m, u, om)
            sv = reduced_involution(m, v, om)
            assert (reduced_involution(m, su, om) - u).is_zero()
            assert (reduced_involution(m, mul(u, v), om) - mul(sv, su)).is_zero()
            assert (reduced_involution(m, u * I, om) + su * I).is_zero()

    def test_defining_adjointness(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        mu = lift_density(m, om)
        u = rand.base(m, 2)
        us = reduced_involution(m, u, om)
        for _ in range(4):
            phi, psi = rand.state(m, 2), rand.state(m, 2)
            lhs = inner_product_mu(cfg, phi, right_module(cfg, psi, u), mu)
            rhs = inner_product_mu(cfg, right_module(cfg, phi, us), psi, mu)
            assert lhs == rhs

    def test_unsupported_weight_rejected(self, model_r):
        m = model_r
        bad = gaussian_base_weight(m, 1, prefactor=(
            __import__("redstar.poly", fromlist=["Poly"]).Poly.one(m.gens)
            + __import__("redstar.poly", fromlist=["Poly"]).Poly.var(m.gens, "q") ** 2))
        with pytest.raises(ValueError):
            reduced_involution(m, m.var("q"), bad)


class TestKMS:
    def test_gaussian_kms(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        for _ in range(6):
            u, v = rand.base(m, 3), rand.base(m, 3)
            rep = kms_check(cfg, u, v, om, star=mstar(m))
            assert rep["holds"]

    def test_lebesgue_trace(self, model_r, rand):
        m = model_r
        mul = mstar(m)
        leb = lebesgue_weight(m)
        damp = {n: Fraction(1, 2) for n in m.base_names}
        for _ in range(6):
            u = rand.base(m, 2).with_profile(damp)
            v = rand.base(m, 2).with_profile(damp)
            assert kms_functional(m, mul(v, u), leb) == kms_functional(
                m, mul(u, v), leb)

    def test_constant_trivial(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        rep = kms_check(cfg, m.constant(Fraction(2, 7)), rand.base(m, 2),
                        om, star=mstar(m))
        assert rep["holds"]


class TestDensityRatio:
    def test_constants(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        mul = mstar(m)
        assert (density_ratio_hat(cfg, om, m.one(), cap=2, star=mul)
                - m.one()).is_zero()
        assert (density_ratio_hat(cfg, om, m.one() * 2, cap=2, star=mul)
                - m.one() * 2).is_zero()

    def test_polynomial_ratio(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        mul = mstar(m)
        rho = m.one() + m.var("q") * m.var("q")
        rh = density_ratio_hat(cfg, om, rho, cap=4, star=mul)
        assert Func(LambdaSeries.of(rh.series.coeffs[0], m.order)) == rho
        # the defining identity on monomials beyond the solve basis
        for mono in (m.var("q") * m.var("p") * m.var("p"),
                     m.var("p") * m.var("p") * m.var("p")):
            lhs = kms_functional(m, mono * rho, om)
            rhs = kms_functional(m, mul(rh, mono), om)
            assert lhs == rhs

    def test_needs_gaussian_weight(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        with pytest.raises(ValueError):
            density_ratio_hat(cfg, lebesgue_weight(m), m.one(), cap=2,
                              star=mstar(m))


class TestInvolutionComparison:
    def test_trivial_and_constant(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        us = [m.var("q"), m.var("p"), rand.base(m, 2)]
        assert involution_comparison(cfg, om, m.one(), us, star=mstar(m),
                                     cap=3)["holds"]
        assert involution_comparison(cfg, om, m.one() * 2, us, star=mstar(m),
                                     cap=3)["holds"]

    def test_lam_corrected_weight(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        rho = m.one() + Func((m.var("q") * m.var("q")).series.shift(1))
        us = [m.var("q"), m.var("p"), m.var("q") * m.var("p")]
        assert involution_comparison(cfg, om, rho, us, star=mstar(m),
                                     cap=4)["holds"]


class TestModularClass:
    def test_first_order_and_display(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        mc = modular_class(cfg, om, cap=2)
        assert mc["first_order_is_minus_i_delta"]
        d1q = mc["D"].image((1, 0)).series.coeffs[1]
        assert d1q == (m.var("p").series.coeffs[0] * (I * (-2)))
        # the correction of u* itself carries +i times the modular field
        us = reduced_involution(m, m.var("q"), om)
        assert us.series.coeffs[1] == (m.var("p").series.coeffs[0] * (I * 2))

    def test_lebesgue_derivation_vanishes(self, model_r):
        from redstar.involution import _base_monomials

        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        mc = modular_class(cfg, lebesgue_weight(m), cap=2)
        for e in _base_monomials(m, 2):
            assert mc["D"].image(e).is_zero()

    def test_automorphism(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        mul = mstar(m)
        imap = modular_class(cfg, om, cap=2)["I"]
        for _ in range(4):
            u, v = rand.base(m, 1, 2), rand.base(m, 1, 2)
            assert (imap.apply(mul(u, v)) - mul(imap.apply(u), imap.apply(v))
                    ).is_zero()

    def test_inner_difference(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        om = gaussian_base_weight(m, 1)
        rho = m.one() + Func((m.var("q") * m.var("q")).series.shift(1))
        rep = modular_inner_difference(cfg, om, om.scaled(rho), cap=1,
                                       star=mstar(m))
        assert rep["inner"]


@pytest.mark.parametrize("lie", [abelian_lie(1), aff1()])
def test_involution_suite(lie):
    m = ModelSpace(lie, base_dim=2, order=3)
    ctx = SuiteContext(m, seed=37, trials=4, degree_cap=2)
    recs = suite_involution(ctx)
    bad = [r for r in recs if r["status"] == "fail"]
    assert not bad, bad


@pytest.mark.parametrize("lie", [abelian_lie(1), heisenberg3()])
def test_gns_suite(lie):
    m = ModelSpace(lie, base_dim=2, order=3)
    ctx = SuiteContext(m, seed=41, trials=4, degree_cap=2)
    recs = suite_gns(ctx)
    bad = [r for r in recs if r["status"] == "fail"]
    assert not bad, bad


def test_gns_suite_skips_without_fibers(model_aff):
    ctx = SuiteContext(model_aff, seed=41, trials=4, degree_cap=2)
    recs = suite_gns(ctx)
    assert all(r["status"] == "skip" for r in recs)


def test_positivity_needs_modular_equivariance(model_aff):
    # without group coordinates the modular weight cannot transform, and a
    # naive weight indeed fails positivity on the constraint ideal directions
    m = model_aff
    cfg = ReductionConfig(m, Fraction(1, 2))
    posf = PositiveFunctional(cfg, gaussian_base_weight(m, 1))
    val = posf(cfg.star(m.momentum(0).conj(), m.momentum(0)))
    r, c = val.lowest_order()
    assert r == 2 and not c.is_positive()


def test_kms_suite(model_r):
    ctx = SuiteContext(model_r, seed=43, trials=4, degree_cap=3)
    recs = suite_kms(ctx)
    bad = [r for r in recs if r["status"] == "fail"]
    assert not bad, bad

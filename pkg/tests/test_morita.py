"""Module inner products, rank-one operators, vertical calculus, kernels,
and induction of representations."""

from fractions import Fraction

import pytest

from redstar.funcs import Func
from redstar.geometry import ModelSpace, abelian_lie, aff1, heisenberg3, fiber_integral
from redstar.koszul import ReductionConfig, left_module, right_module
from redstar.morita import (
    InducedVector,
    InnerProductModule,
    KernelSpace,
    RankOneOperator,
    VerticalOperator,
    canonical_inner_product,
    classical_inner_product,
    complete_positivity_sample,
    crossed_act,
    crossed_conv,
    crossed_star,
    deformation_comparison_H,
    external_inner_product,
    fullness_element,
    fullness_element_sqrt_path,
    inner_product_red,
    inner_product_red_closed_form,
    rieffel_induce,
    schroedinger_class,
    vertical_sqrt,
)
from redstar.scalars import GaussRational, I
from redstar.starprod import moyal, neumaier_N, star_G
from redstar.suites import SuiteContext, suite_crossed, suite_morita, suite_rieffel


class TestInnerProduct:
    def test_fullness(self, model_r, model_heis):
        for m in (model_r, model_heis):
            cfg = ReductionConfig(m, Fraction(1, 2))
            ehat = fullness_element(m)
            assert (inner_product_red(cfg, ehat, ehat) - m.one()).is_zero()
            e2 = fullness_element_sqrt_path(cfg)
            assert (inner_product_red(cfg, e2, e2) - m.one()).is_zero()

    def test_closed_form(self, model_heis, rand):
        m = model_heis
        cfg = ReductionConfig(m, Fraction(1, 2))
        phi, psi = rand.state(m, 2), rand.state(m, 2)
        assert (inner_product_red(cfg, phi, psi)
                - inner_product_red_closed_form(cfg, phi, psi)).is_zero()

    def test_right_linearity_symmetry_adjointness(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        ip = lambda a, b: inner_product_red(cfg, a, b)
        for _ in range(6):
            phi, psi = rand.state(m, 2), rand.state(m, 2)
            u = rand.base(m, 2)
            base = ip(phi, psi)
            lhs = ip(phi, right_module(cfg, psi, u))
            rhs = Func(moyal(m, Func(base.series, base.profile, 0), u).series,
                       {}, base.pi4)
            assert (lhs - rhs).is_zero()
            assert (ip(phi, psi).conj() - ip(psi, phi)).is_zero()
            f = rand.poly(m, 2)
            assert (ip(phi, left_module(cfg, f, psi))
                    - ip(left_module(cfg, f.conj(), phi), psi)).is_zero()

    def test_nondegenerate_lowest_order(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        for _ in range(6):
            phi = rand.state(m, 2)
            n = inner_product_red(cfg, phi, phi)
            if phi.is_zero():
                assert n.is_zero()
            else:
                assert not n.is_zero()


class TestRankOne:
    def test_dual_basis(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        ehat = fullness_element(m)
        for _ in range(4):
            phi = rand.state(m, 2)
            assert (RankOneOperator(cfg, phi, ehat)(ehat) - phi).is_zero()
        th = RankOneOperator(cfg, ehat, ehat)
        assert (th(ehat) - ehat).is_zero()

    def test_zero_slot(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        t = RankOneOperator(cfg, rand.state(m, 1), m.zero())
        assert t(rand.state(m, 1)).is_zero()

    def test_adjoint_and_composition(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        ip = lambda a, b: inner_product_red(cfg, a, b)
        for _ in range(4):
            a, b, chi, xi = (rand.state(m, 1) for _ in range(4))
            t = RankOneOperator(cfg, a, b)
            assert (ip(t(chi), xi) - ip(chi, t.adjoint()(xi))).is_zero()
            t2 = RankOneOperator(cfg, chi, xi)
            probe = rand.state(m, 1)
            assert (t.compose(t2)(probe) - t(t2(probe))).is_zero()


class TestCompletePositivity:
    def test_gram_samples(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        states = [rand.state(m, 1) for _ in range(3)]
        pts = [{"q": Fraction(k, 2), "p": Fraction(1 - k, 3)} for k in range(5)]
        rep = complete_positivity_sample(cfg, states, pts)
        assert rep["all_psd"] and rep["witness"]

    def test_single_state(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        phi = rand.state(m, 1)
        n = inner_product_red(cfg, phi, phi)
        r, c = n.series.lowest_order()
        # classical positivity at sampled points
        for k in range(3):
            v = n.evaluate({"q": Fraction(k, 3), "p": Fraction(k, 2)})
            low = v.series.lowest_order()[1]
            if low is not None:
                cc = low.constant_term()
                assert cc.is_real() and cc.re >= 0


class TestVerticalOperators:
    def test_fundamental_adjoint(self, model_r, model_heis, rand):
        for m in (model_r, model_heis):
            cfg = ReductionConfig(m, Fraction(1, 2))
            can = lambda a, b: canonical_inner_product(cfg, a, b)
            d = VerticalOperator.fundamental(m, 0)
            for _ in range(3):
                phi, psi = rand.state(m, 1), rand.state(m, 1)
                assert (can(phi, d.act(psi)) - can(d.adjoint().act(phi), psi)
                        ).is_zero()
                # for the unimodular model the generator adjoint is the sign flip
                assert (d.adjoint().act(phi) + d.act(phi)).is_zero()

    def test_multiplication_self_adjoint(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        can = lambda a, b: canonical_inner_product(cfg, a, b)
        dq = VerticalOperator.multiplication(m, m.var("q"))
        phi, psi = rand.state(m, 1), rand.state(m, 1)
        assert (can(phi, dq.act(psi)) - can(dq.adjoint().act(phi), psi)).is_zero()

    def test_composition(self, model_heis, rand):
        m = model_heis
        d1 = VerticalOperator.fundamental(m, 0)
        d2 = VerticalOperator.fundamental(m, 1).compose(
            VerticalOperator.multiplication(m, m.var("g2")))
        phi = rand.state(m, 2)
        assert (d1.compose(d2).act(phi) - d1.act(d2.act(phi))).is_zero()

    def test_comparison_roundtrip(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        can = lambda a, b: canonical_inner_product(cfg, a, b)
        h0 = deformation_comparison_H(cfg, can, can, g_cap=1, word_cap=1,
                                      probe_cap=1)
        assert (h0 - VerticalOperator.identity(m)).is_zero()
        l0 = VerticalOperator.fundamental(m, 0)
        pert = VerticalOperator.identity(m) + l0.compose(l0).lam_shift(1)
        ip2 = lambda a, b: can(a, pert.act(b))
        h = deformation_comparison_H(cfg, can, ip2, g_cap=1, word_cap=2,
                                     probe_cap=2)
        assert (h - pert).is_zero()
        assert (h - h.adjoint()).is_zero()
        v = vertical_sqrt(cfg, h)
        assert (v.adjoint().compose(v) - h).is_zero()
        for _ in range(3):
            phi, psi = rand.state(m, 1), rand.state(m, 1)
            assert (ip2(phi, psi) - can(v.act(phi), v.act(psi))).is_zero()

    def test_caps_too_small_raise(self, model_r):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        can = lambda a, b: canonical_inner_product(cfg, a, b)
        l0 = VerticalOperator.fundamental(m, 0)
        pert = VerticalOperator.identity(m) + l0.compose(l0).lam_shift(1)
        ip2 = lambda a, b: can(a, pert.act(b))
        with pytest.raises(ValueError):
            deformation_comparison_H(cfg, can, ip2, g_cap=0, word_cap=1,
                                     probe_cap=1)


class TestCrossedProduct:
    def test_algebra_laws(self, model_r, model_heis, rand):
        for m in (model_r, model_heis):
            ks = KernelSpace(m)

            def rk():
                out = None
                for _ in range(2):
                    t = Func.one(ks.gens, m.order)
                    for _ in range(rand.rng.randint(0, 2)):
                        t = t * Func.var(ks.gens, rand.rng.choice(ks.gens), m.order)
                    t = t * GaussRational(rand.rng.randint(-2, 2))
                    out = t if out is None else out + t
                return ks.kernel(out)

            k1, k2, k3 = rk(), rk(), rk()
            assert (crossed_conv(ks, crossed_conv(ks, k1, k2), k3)
                    - crossed_conv(ks, k1, crossed_conv(ks, k2, k3))).is_zero()
            assert (crossed_star(ks, crossed_conv(ks, k1, k2))
                    - crossed_conv(ks, crossed_star(ks, k2), crossed_star(ks, k1))
                    ).is_zero()
            assert (crossed_star(ks, crossed_star(ks, k1)) - k1).is_zero()
            phi = rand.state(m, 1)
            assert (crossed_act(ks, crossed_conv(ks, k1, k2), phi)
                    - crossed_act(ks, k1, crossed_act(ks, k2, phi))).is_zero()

    def test_rank_one_embedding(self, model_r, rand):
        m = model_r
        ks = KernelSpace(m)
        a, b, chi = rand.state(m, 1), rand.state(m, 1), rand.state(m, 1)
        emb = ks.from_pair(a, b)
        lhs = crossed_act(ks, emb, chi)
        cl = classical_inner_product(m, b, chi)
        rhs = Func((a * Func(cl.series, cl.profile, 0)).series, a.profile,
                   a.pi4 + cl.pi4)
        assert (lhs - rhs).is_zero()
        c, d = rand.state(m, 1), rand.state(m, 1)
        lhs2 = crossed_conv(ks, ks.from_pair(a, b), ks.from_pair(c, d))
        mid = classical_inner_product(m, b, c)
        rhs2 = ks.from_pair(
            Func((a * Func(mid.series, {}, 0)).series, a.profile, a.pi4 + mid.pi4),
            d)
        assert (lhs2 - rhs2).is_zero()


class TestRieffel:
    def test_gelfand_quotient(self, model_r):
        from redstar.koszul import SuperObservable, quantized_koszul

        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        x = SuperObservable(m, {(0,): m.fiber_state(m.var("g"))})
        elt = quantized_koszul(cfg, x).comps.get((), m.zero())
        assert schroedinger_class(m, elt).is_zero()

    def test_induced_momentum_and_unit(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        module = InnerProductModule.canonical(cfg)
        act = rieffel_induce(cfg, module)
        chi = m.fiber_state(rand.poly(m, 2, m.group_names))
        beta = schroedinger_class(m, chi)
        vec = InducedVector([(beta, m.one())])
        out = act(m.momentum(0) * GaussRational(-1), vec)
        total_beta = m.zero()
        for nb, nx in out.terms:
            total_beta = total_beta + nb
            assert (nx - m.one()).is_zero()
        expect = Func(beta.diff("g").series.shift(1) * (-I), beta.profile, beta.pi4)
        assert (total_beta - expect).is_zero()
        unit = act(m.one(), vec)
        assert len(unit.terms) == 1 and (unit.terms[0][0] - beta).is_zero()

    def test_external_display_and_star_rep(self, model_r, rand):
        m = model_r
        cfg = ReductionConfig(m, Fraction(1, 2))
        module = InnerProductModule.canonical(cfg)
        act = rieffel_induce(cfg, module)
        b1 = m.fiber_state(rand.poly(m, 1, m.group_names))
        b2 = m.fiber_state(rand.poly(m, 1, m.group_names))
        u1, u2 = rand.base(m, 2), rand.base(m, 2)
        v1 = InducedVector([(schroedinger_class(m, b1), u1)])
        v2 = InducedVector([(schroedinger_class(m, b2), u2)])
        lhs = external_inner_product(cfg, module, v1, v2)
        om_part = fiber_integral(m, m.restrict(
            neumaier_N(m).apply(star_G(m, b1.conj(), b2))))
        rhs = Func((Func(om_part.series, {}, 0) * moyal(m, u1.conj(), u2)).series,
                   {}, om_part.pi4)
        assert (lhs - rhs).is_zero()
        f = rand.poly(m, 2)
        lhs = external_inner_product(cfg, module, v1, act(f, v2))
        rhs = external_inner_product(cfg, module, act(f.conj(), v1), v2)
        assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("suite", [suite_morita, suite_crossed, suite_rieffel])
def test_group_suites(model_r, suite):
    ctx = SuiteContext(model_r, seed=47, trials=4, degree_cap=2)
    recs = suite(ctx)
    bad = [r for r in recs if r["status"] == "fail"]
    assert not bad, bad


@pytest.mark.parametrize("suite", [suite_morita, suite_crossed, suite_rieffel])
def test_group_suites_skip_on_momentum_level(model_aff, suite):
    ctx = SuiteContext(model_aff, seed=47, trials=2, degree_cap=2)
    recs = suite(ctx)
    assert recs and all(r["status"] == "skip" for r in recs)


def test_external_mixed_coefficients(model_r):
    # <[b] x q, [b] x p> factors as the scalar pairing times q * p
    from redstar.geometry import fiber_integral
    from redstar.starprod import neumaier_N, star_G

    m = model_r
    cfg = ReductionConfig(m, Fraction(1, 2))
    module = InnerProductModule.canonical(cfg)
    b = m.fiber_state(m.var("g"))
    beta = schroedinger_class(m, b)
    v1 = InducedVector([(beta, m.var("q"))])
    v2 = InducedVector([(beta, m.var("p"))])
    got = external_inner_product(cfg, module, v1, v2)
    om_part = fiber_integral(m, m.restrict(
        neumaier_N(m).apply(star_G(m, b.conj(), b))))
    expect = Func((Func(om_part.series, {}, 0)
                   * moyal(m, m.var("q"), m.var("p"))).series, {}, om_part.pi4)
    assert (got - expect).is_zero()


def test_external_tensor_module(model_r, rand):
    from redstar.morita import external_tensor

    m = model_r
    cfg = ReductionConfig(m, Fraction(1, 2))
    base_mod = InnerProductModule.canonical(cfg)
    ext = external_tensor(cfg, base_mod)
    b = m.fiber_state(m.var("g"))
    beta = schroedinger_class(m, b)
    v = InducedVector([(beta, m.var("q"))])
    w = InducedVector([(beta, m.var("p"))])
    # right linearity over the base algebra
    u = rand.base(m, 1)
    lhs = ext.ip(v, ext.right_action(w, u))
    rhs = moyal(m, Func(ext.ip(v, w).series, {}, 0), u)
    rhs = Func(rhs.series, {}, ext.ip(v, w).pi4)
    assert (lhs - rhs).is_zero()
    # adjointable left action of the full algebra
    f = rand.poly(m, 2)
    assert (ext.ip(v, ext.left_action(f, w))
            - ext.ip(ext.left_action(f.conj(), v), w)).is_zero()

"""Conjugation transport, the positive functional, the reduced *-involution,
KMS functionals and the deformed modular class.

The reduced involution is extracted from the weighted transpose of one-sided
multiplication operators evaluated on the constant function: for base
functions u and v the statement "integral of (w * u) against the base weight
equals integral of (v * w)" for all damped test functions w pins down
v = conj(u^*) order by order, because the transpose of left multiplication
by v starts with v itself.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial

from .diffop import DiffOperator
from .funcs import Func
from .geometry import DensityWeight, ModelSpace
from .integrate import gaussian_integrate
from .koszul import (
    ReductionConfig,
    SuperObservable,
    deformed_restriction,
    homotopy_h,
    koszul,
    left_module,
    quantized_koszul,
)
from .linalg import solve_linear
from .poly import Poly
from .scalars import GaussRational, I as IMAG
from .series import LambdaSeries, series_inverse


# ---------------------------------------------------------------------------
# conjugation transport
# ---------------------------------------------------------------------------


def _transport_T(cfg: ReductionConfig, f: Func) -> Func:
    """(k_1 - qk_1) h_0 f: the O(lam) building block of the transport sums."""
    model = cfg.model
    hx = homotopy_h(model, SuperObservable.scalar(model, f), 0)
    diff = koszul(model, hx) - quantized_koszul(cfg, hx)
    return diff.comps.get((), model.zero())


def _geometric_tail(cfg: ReductionConfig, seed: Func, budget: int) -> Func:
    """sum_{j=0..budget} T^j seed."""
    acc = seed
    val = seed
    for _ in range(budget):
        val = _transport_T(cfg, val)
        acc = acc + val
    return acc


def transport_A(cfg: ReductionConfig, a: int, g: Func) -> Func:
    """A^a on the argument g: sum_{m,j} T^j ins(e^a) h_0 conj(T^m conj(g))."""
    model = cfg.model
    order = model.order
    inner = [g.conj()]
    for _ in range(order):
        inner.append(_transport_T(cfg, inner[-1]))
    total = model.zero()
    for m in range(order + 1):
        h0 = homotopy_h(model, SuperObservable.scalar(model, inner[m].conj()), 0)
        seed = h0.insert_basis(a).comps.get((), model.zero())
        if seed.is_zero():
            continue
        total = total + _geometric_tail(cfg, seed, order - m)
    return total


def transport_B(cfg: ReductionConfig, g: Func) -> Func:
    """B on the argument g: the modular-covector contraction of the A sums."""
    model = cfg.model
    order = model.order
    inner = [g.conj()]
    for _ in range(order):
        inner.append(_transport_T(cfg, inner[-1]))
    total = model.zero()
    for m in range(order + 1):
        h0 = homotopy_h(model, SuperObservable.scalar(model, inner[m].conj()), 0)
        seed = h0.insert_covector(model.lie.modular).comps.get((), model.zero())
        if seed.is_zero():
            continue
        total = total + _geometric_tail(cfg, seed, order - m)
    return total


def conj_transport(cfg: ReductionConfig, f: Func) -> dict:
    """The transport decomposition {A^a(f), B(f)} of the conjugated resolvent."""
    model = cfg.model
    return {
        "A": [transport_A(cfg, a, f) for a in range(model.lie.dim)],
        "B": transport_B(cfg, f),
    }


def resolvent(cfg: ReductionConfig, f: Func) -> Func:
    """(id + (qk_1 - k_1) h_0)^{-1} f = sum_k T^k f."""
    return _geometric_tail(cfg, f, cfg.model.order)


def _i_lam(f: Func) -> Func:
    return Func(f.series.shift(1) * IMAG, f.profile, f.pi4)


def conj_transport_check(cfg: ReductionConfig, f: Func) -> dict:
    """Verify both commutation displays and the contraction identity."""
    model = cfg.model
    fc = f.conj()
    lhs = resolvent(cfg, f).conj()
    base = resolvent(cfg, fc)
    kk = cfg.kappa_plus_conj()
    b_fc = transport_B(cfg, fc)

    term_a1 = model.zero()
    for a in range(model.lie.dim):
        term_a1 = term_a1 + model.fundamental_field_M(model.basis_vector(a)).apply(
            transport_A(cfg, a, fc)
        )
    first = base + _i_lam(term_a1) + _i_lam(Func(b_fc.series * kk, b_fc.profile, b_fc.pi4))

    term_a2 = model.zero()
    for a in range(model.lie.dim):
        lie_fc = model.fundamental_field_M(model.basis_vector(a)).apply(fc)
        term_a2 = term_a2 + transport_A(cfg, a, lie_fc)
    second = base + _i_lam(term_a2) + _i_lam(
        Func(b_fc.series * (kk - 1), b_fc.profile, b_fc.pi4)
    )

    ops = conj_transport(cfg, f)
    contraction = model.zero()
    for a in range(model.lie.dim):
        mod = model.lie.modular[a]
        if mod:
            contraction = contraction + ops["A"][a] * GaussRational(Fraction(mod))

    return {
        "display_one": (lhs - first).is_zero(),
        "display_two": (lhs - second).is_zero(),
        "contraction": (contraction - ops["B"]).is_zero(),
    }


# ---------------------------------------------------------------------------
# positive functional and GNS data
# ---------------------------------------------------------------------------


def omega_mu(cfg: ReductionConfig, f: Func, mu: DensityWeight) -> LambdaSeries:
    """omega_mu(f) = integral over the constraint surface of iota*_def(f) mu."""
    model = cfg.model
    rest = deformed_restriction(cfg, f)
    block = list(model.base_names) + list(model.group_names)
    return gaussian_integrate(rest, mu, block).scalar_series()


def inner_product_mu(cfg: ReductionConfig, phi: Func, psi: Func,
                     mu: DensityWeight) -> LambdaSeries:
    """<phi, psi>_mu through the deformed restriction of the starred product."""
    model = cfg.model
    if not mu.is_real():
        raise ValueError("the pre-Hilbert structure needs a real weight")
    integrand = deformed_restriction(
        cfg, cfg.star(model.prolong(phi).conj(), model.prolong(psi))
    )
    block = list(model.base_names) + list(model.group_names)
    return gaussian_integrate(integrand, mu, block).scalar_series()


def inner_product_mu_alt(cfg: ReductionConfig, phi: Func, psi: Func,
                         mu: DensityWeight) -> LambdaSeries:
    """Alternative form: integrate (conj(prol phi) bullet psi) mu."""
    model = cfg.model
    val = left_module(cfg, model.prolong(phi).conj(), psi)
    block = list(model.base_names) + list(model.group_names)
    return gaussian_integrate(val, mu, block).scalar_series()


class PositiveFunctional:
    """The functional f -> integral of iota*_def(f) mu and its Gel'fand data."""

    def __init__(self, cfg: ReductionConfig, mu: DensityWeight):
        if not mu.is_real():
            raise ValueError("positive functionals need real weights")
        self.cfg = cfg
        self.mu = mu

    def __call__(self, f: Func) -> LambdaSeries:
        return omega_mu(self.cfg, f, self.mu)

    def positivity(self, f: Func) -> bool:
        """Lowest nonvanishing coefficient of omega(conj f * f) is positive."""
        val = self(self.cfg.star(f.conj(), f))
        r, c = val.lowest_order()
        if r is None:
            return True
        return c.is_positive()

    def in_gelfand_ideal(self, f: Func) -> bool:
        return deformed_restriction(self.cfg, f).is_zero()


def gns_check(cfg: ReductionConfig, f: Func, g: Func, mu: DensityWeight) -> dict:
    """omega(conj f * g) = <iota* f, iota* g>_mu and the intertwining property."""
    lhs = omega_mu(cfg, cfg.star(f.conj(), g), mu)
    rf = deformed_restriction(cfg, f)
    rg = deformed_restriction(cfg, g)
    rhs = inner_product_mu(cfg, rf, rg, mu)
    inter_lhs = deformed_restriction(cfg, cfg.star(f, g))
    inter_rhs = left_module(cfg, f, rg)
    return {
        "isometry": lhs == rhs,
        "intertwining": (inter_lhs - inter_rhs).is_zero(),
    }


# ---------------------------------------------------------------------------
# one-sided multiplication operators on the base
# ---------------------------------------------------------------------------


def _base_pairs(model: ModelSpace):
    names = model.base_names
    out = []
    for i in range(len(names)):
        for j in range(len(names)):
            lam = model.poisson_matrix[i][j]
            if lam:
                out.append((i, j, GaussRational(lam)))
    return out


def right_mult_operator(model: ModelSpace, u: Func) -> DiffOperator:
    """w -> w *_red u as a differential operator in the base coordinates."""
    if u.profile:
        raise ValueError("multiplication operators need polynomial symbols")
    gens = model.gens
    order = model.order
    pairs = _base_pairs(model)
    tables = [dict() for _ in range(order + 1)]
    half_i = IMAG * GaussRational(Fraction(1, 2))
    for r in range(order + 1):
        scale = half_i ** r * GaussRational(Fraction(1, factorial(r)))
        for seq in product(pairs, repeat=r):
            d = [0] * len(gens)
            du = u
            factor = scale
            for (i, j, lam) in seq:
                d[i] += 1
                du = du.diff(model.base_names[j])
                factor = factor * lam
            if du.is_zero():
                continue
            for s, p in enumerate(du.series.coeffs):
                if r + s > order or p.is_zero():
                    continue
                key = tuple(d)
                tables[r + s][key] = tables[r + s].get(key, Poly.zero(gens)) + p * factor
    return DiffOperator(gens, order, tables)


def left_mult_operator(model: ModelSpace, v: Func) -> DiffOperator:
    """w -> v *_red w as a differential operator in the base coordinates."""
    if v.profile:
        raise ValueError("multiplication operators need polynomial symbols")
    gens = model.gens
    order = model.order
    pairs = _base_pairs(model)
    tables = [dict() for _ in range(order + 1)]
    half_i = IMAG * GaussRational(Fraction(1, 2))
    for r in range(order + 1):
        scale = half_i ** r * GaussRational(Fraction(1, factorial(r)))
        for seq in product(pairs, repeat=r):
            d = [0] * len(gens)
            dv = v
            factor = scale
            for (i, j, lam) in seq:
                d[j] += 1
                dv = dv.diff(model.base_names[i])
                factor = factor * lam
            if dv.is_zero():
                continue
            for s, p in enumerate(dv.series.coeffs):
                if r + s > order or p.is_zero():
                    continue
                key = tuple(d)
                tables[r + s][key] = tables[r + s].get(key, Poly.zero(gens)) + p * factor
    return DiffOperator(gens, order, tables)


def _transpose_at_one(model: ModelSpace, op: DiffOperator, omega: DensityWeight) -> Func:
    """D^T(1) with respect to the bilinear pairing integral(f g omega)."""
    adj = op.formal_adjoint(omega)
    return adj.apply(model.one()).conj()


def reduced_involution(model_or_cfg, u: Func, omega: DensityWeight) -> Func:
    """The unique u* adjoint to right multiplication by u for the weight."""
    model = model_or_cfg.model if isinstance(model_or_cfg, ReductionConfig) else model_or_cfg
    if not omega.has_constant_leading_prefactor():
        raise ValueError("weight is outside the supported class for the involution")
    target = _transpose_at_one(model, right_mult_operator(model, u), omega)
    v = model.zero()
    for r in range(model.order + 1):
        current = _transpose_at_one(model, left_mult_operator(model, v), omega)
        defect = target - current
        slice_r = defect.series.coeffs[r]
        if not slice_r.is_zero():
            v = v + Func(LambdaSeries.lam_power(slice_r, r, model.order))
    return v.conj()


def kms_functional(model: ModelSpace, u: Func, omega: DensityWeight) -> LambdaSeries:
    """tau_Omega(u): integral over the base against the weight."""
    return gaussian_integrate(u, omega, list(model.base_names)).scalar_series()


def kms_check(cfg: ReductionConfig, u: Func, v: Func, omega: DensityWeight,
              ustar: Func | None = None, star=None) -> dict:
    """tau(v * u) = tau(I(u) * v) with I(u) = conj(u*)."""
    model = cfg.model
    mul = star if star is not None else cfg.star
    if ustar is None:
        ustar = reduced_involution(model, u, omega)
    i_u = ustar.conj()
    lhs = kms_functional(model, mul(v, u), omega)
    rhs = kms_functional(model, mul(i_u, v), omega)
    return {"holds": lhs == rhs, "lhs": lhs, "rhs": rhs, "ustar": ustar}


# ---------------------------------------------------------------------------
# density ratios and comparison of involutions
# ---------------------------------------------------------------------------


def _base_monomials(model: ModelSpace, cap: int):
    """Exponent vectors over the base coordinates of total degree <= cap."""
    names = model.base_names
    vecs = set()

    def gen(idx, left, current):
        if idx == len(names):
            vecs.add(tuple(current))
            return
        for k in range(left + 1):
            gen(idx + 1, left - k, current + [k])

    gen(0, cap, [])
    return sorted(vecs, key=lambda e: (sum(e), e))


def _monomial_func(model: ModelSpace, expo) -> Func:
    p = Poly(model.gens, {tuple(
        [expo[model.base_names.index(n)] if n in model.base_names else 0
         for n in model.gens]
    ): GaussRational(1)})
    return Func.from_poly(p, model.order)


def density_ratio_hat(cfg: ReductionConfig, omega: DensityWeight, rho: Func,
                      cap: int = 4, star=None) -> Func:
    """Solve tau_{rho Omega}(u) = tau_Omega(rho_hat * u) on a monomial basis.

    The order-by-order systems are Gram matrices of base monomials against
    the order-zero weight, hence invertible; a cap that is too small to
    carry the corrections raises an error.
    """
    model = cfg.model
    mul = star if star is not None else cfg.star
    if not omega.gauss:
        raise ValueError("the density-ratio solve needs a Gaussian base weight")
    basis = _base_monomials(model, cap)
    monos = [_monomial_func(model, e) for e in basis]

    gram = []
    for eu in basis:
        row = []
        for em in basis:
            val = kms_functional(
                model, _monomial_func(model, eu) * _monomial_func(model, em), omega
            ).coeffs[0]
            row.append(val.value)
        gram.append(row)

    rho_hat = model.zero()
    for r in range(model.order + 1):
        rhs_vec = []
        for k, eu in enumerate(basis):
            u = monos[k]
            lhs = kms_functional(model, (u * rho), omega)
            cur = kms_functional(model, mul(rho_hat, u), omega)
            d = lhs - cur
            rhs_vec.append(d.coeffs[r].value)
        sol = solve_linear(gram, rhs_vec)
        if sol is None:
            raise ValueError("degree cap too small for the density-ratio solve")
        poly = Poly.zero(model.gens)
        for val, em in zip(sol, basis):
            if not val.is_zero():
                poly = poly + _monomial_func(model, em).series.coeffs[0] * val
        if not poly.is_zero():
            rho_hat = rho_hat + Func(LambdaSeries.lam_power(poly, r, model.order))
    return rho_hat


def involution_comparison(cfg: ReductionConfig, omega: DensityWeight, rho: Func,
                          us: list, star=None, cap: int = 4) -> dict:
    """u^{*'} = conj(rho_hat) * u^* * conj(rho_hat)^{-1} for the scaled weight."""
    model = cfg.model
    mul = star if star is not None else cfg.star
    omega_p = omega.scaled(rho)
    rho_hat = density_ratio_hat(cfg, omega, rho, cap=cap, star=mul)
    crh = rho_hat.conj()

    def series_mul(a, b):
        return mul(Func(a), Func(b)).series

    crh_inv = Func(series_inverse(crh.series, series_mul))
    failures = []
    for k, u in enumerate(us):
        lhs = reduced_involution(model, u, omega_p)
        rhs = mul(mul(crh, reduced_involution(model, u, omega)), crh_inv)
        if not (lhs - rhs).is_zero():
            failures.append(k)
    return {"holds": not failures, "failures": failures, "rho_hat": rho_hat}


# ---------------------------------------------------------------------------
# the modular automorphism and its logarithm
# ---------------------------------------------------------------------------


class AutomorphismSeries:
    """A linear map on base polynomials, realized monomial by monomial.

    Images are produced on demand from a defining rule and cached, so maps
    whose images leave any fixed degree window (such as logarithms for
    lam-corrected weights) still evaluate exactly; finite degree caps only
    enter reports and linear solves.
    """

    def __init__(self, model: ModelSpace, fn):
        self.model = model
        self._fn = fn
        self._cache: dict = {}

    def image(self, expo) -> Func:
        expo = tuple(expo)
        if expo not in self._cache:
            self._cache[expo] = self._fn(_monomial_func(self.model, expo))
        return self._cache[expo]

    def _decompose(self, f: Func):
        if f.profile or f.pi4:
            raise ValueError("the map acts on plain base polynomials")
        base_idx = [f.gens.index(n) for n in self.model.base_names]
        other_idx = [i for i in range(len(f.gens)) if i not in base_idx]
        out = []
        for r, p in enumerate(f.series.coeffs):
            for expo, c in p.terms.items():
                if any(expo[i] for i in other_idx):
                    raise ValueError("not a base polynomial")
                out.append((r, tuple(expo[i] for i in base_idx), c))
        return out

    def apply(self, f: Func) -> Func:
        total = self.model.zero()
        for r, key, c in self._decompose(f):
            img = self.image(key)
            total = total + Func((img.series * c).shift(r), img.profile, img.pi4)
        return total

    def minus_identity(self) -> "AutomorphismSeries":
        return AutomorphismSeries(
            self.model, lambda m: self.apply(m) - m
        )

    def log(self) -> "AutomorphismSeries":
        """lam-graded logarithm of a map of the form id + O(lam)."""
        n = self.minus_identity()
        order = self.model.order

        def d_of(m: Func) -> Func:
            power = n.apply(m)
            if not power.series.coeffs[0].is_zero():
                raise ValueError("logarithm needs a map starting at the identity")
            total = self.model.zero()
            sign = 1
            for k in range(1, order + 1):
                total = total + power * GaussRational(Fraction(sign, k))
                sign = -sign
                if k < order:
                    power = n.apply(power)
                    if power.is_zero():
                        break
            return total

        return AutomorphismSeries(self.model, d_of)

    def basis_images(self, cap: int) -> dict:
        return {e: self.image(e) for e in _base_monomials(self.model, cap)}


def modular_automorphism(cfg: ReductionConfig, omega: DensityWeight) -> AutomorphismSeries:
    """I_Omega: u -> conj(u*)."""
    model = cfg.model
    return AutomorphismSeries(
        model, lambda m: reduced_involution(model, m, omega).conj()
    )


def modular_class(cfg: ReductionConfig, omega: DensityWeight, cap: int = 4) -> dict:
    """I_Omega, its logarithm, and the first-order comparison.

    Under the pinned conventions X_u = {., u} and Delta(u) = X_u(log w), the
    working identities are D^(1) = -i Delta on the basis and the classical
    infinitesimal KMS display; the conjugate-coefficient derivation carries
    +i Delta and governs the corrections of u* itself.
    """
    from .geometry import modular_vector_field

    model = cfg.model
    i_map = modular_automorphism(cfg, omega)
    d_map = i_map.log()
    delta = modular_vector_field(model, omega)
    first_ok = True
    for e in _base_monomials(model, cap):
        m = _monomial_func(model, e)
        expected = Func(delta.apply(m).series.shift(1) * (-IMAG))
        got = Func(
            LambdaSeries.lam_power(d_map.image(e).series.coeffs[1], 1, model.order)
        )
        if not (expected - got).is_zero():
            first_ok = False
            break
    return {"I": i_map, "D": d_map, "first_order_is_minus_i_delta": first_ok,
            "cap": cap}


def modular_inner_difference(cfg: ReductionConfig, om1: DensityWeight,
                             om2: DensityWeight, cap: int = 2, star=None,
                             unknown_cap: int | None = None,
                             window: int | None = None) -> dict:
    """Solve D_1 - D_2 = ad_star(w) on the monomial basis up to the cap.

    The certificate is finite: w is sought with degree at most unknown_cap
    (default cap + 2K, since the conjugator degree grows with the lam order)
    and both sides are compared as polynomials of degree at most the window
    on basis monomials of degree at most cap.
    """
    model = cfg.model
    mul = star if star is not None else cfg.star
    if unknown_cap is None:
        unknown_cap = cap + 2 * model.order
    if window is None:
        window = cap + unknown_cap
    d1 = modular_class(cfg, om1, cap)["D"]
    d2 = modular_class(cfg, om2, cap)["D"]
    basis = _base_monomials(model, cap)
    unknown_basis = _base_monomials(model, unknown_cap)

    columns = []
    for s in range(model.order):
        for em in unknown_basis:
            w = Func(LambdaSeries.lam_power(
                _monomial_func(model, em).series.coeffs[0], s, model.order))
            col = []
            for eb in basis:
                m = _monomial_func(model, eb)
                ad = mul(w, m) - mul(m, w)
                for r in range(model.order + 1):
                    col.extend(_poly_vector(model, ad.series.coeffs[r], window))
            columns.append(col)

    rhs = []
    for eb in basis:
        diff = d1.image(eb) - d2.image(eb)
        for r in range(model.order + 1):
            rhs.extend(_poly_vector(model, diff.series.coeffs[r], window))

    rows = [[columns[c][r] for c in range(len(columns))] for r in range(len(rhs))]
    sol = solve_linear(rows, rhs)
    return {"inner": sol is not None, "cap": cap, "unknown_cap": unknown_cap,
            "window": window}


def _poly_vector(model: ModelSpace, p: Poly, cap: int):
    """Coefficient vector of a base polynomial over monomials of degree <= cap."""
    basis = _base_monomials(model, cap)
    base_idx = [p.gens.index(n) for n in model.base_names]
    vec = {e: GaussRational(0) for e in basis}
    for expo, c in p.terms.items():
        key = tuple(expo[i] for i in base_idx)
        if key not in vec:
            raise ValueError("polynomial exceeds the comparison cap")
        vec[key] = vec[key] + c
    return [vec[e] for e in basis]

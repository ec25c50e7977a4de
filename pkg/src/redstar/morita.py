"""The algebra-valued inner product on fiber states, rank-one operators,
complete-positivity sampling, deformed vertical operators, the classical
crossed product on kernels, and induction of representations through the
external tensor product with the position-space module.

The group average in the inner product is evaluated as a plain fiber
integral: the structure group is nilpotent, Haar measure is Lebesgue in
exponential coordinates, and the action is by translations, so the average
over translates of an integrable function is the fiber integral itself.
"""

from __future__ import annotations

from fractions import Fraction

from .funcs import Func
from .geometry import FIBER_EXPONENT, ModelSpace, fiber_integral
from .integrate import gaussian_integrate
from .koszul import ReductionConfig, deformed_restriction, right_module
from .linalg import is_psd_hermitian, solve_linear
from .poly import Poly
from .scalars import GaussRational
from .series import LambdaSeries
from .starprod import SymbolOp, moyal, neumaier_N


# ---------------------------------------------------------------------------
# the reduced inner product and fullness
# ---------------------------------------------------------------------------


def inner_product_red(cfg: ReductionConfig, phi: Func, psi: Func) -> Func:
    """<phi, psi>_red: fiber integral of the restricted starred product."""
    model = cfg.model
    if not model.has_group:
        raise ValueError("the algebra-valued inner product needs group coordinates")
    integrand = deformed_restriction(
        cfg, cfg.star(model.prolong(phi).conj(), model.prolong(psi))
    )
    return fiber_integral(model, integrand)


def inner_product_red_closed_form(cfg: ReductionConfig, phi: Func, psi: Func) -> Func:
    """The closed form: fiber integral of conj(phi) *_red psi."""
    model = cfg.model
    return fiber_integral(model, moyal(model, phi.conj(), psi))


def fullness_element(model: ModelSpace) -> Func:
    """A base-independent unit-norm fiber state: the normalized Gaussian."""
    return model.fiber_state(model.one()).with_pi4(-model.lie.dim)


def fullness_element_sqrt_path(cfg: ReductionConfig) -> Func:
    """The generic construction: normalize a state by the star square root
    of its norm; exercises the square root with the reduced product."""
    model = cfg.model
    eps = model.fiber_state(model.one())
    norm2 = inner_product_red(cfg, eps, eps)
    if norm2.pi4 % 2:
        raise ValueError("norm square has an odd pi grade")

    def mul(a: LambdaSeries, b: LambdaSeries) -> LambdaSeries:
        return moyal(model, Func(a), Func(b)).series

    from .series import series_inverse, series_sqrt

    root = series_sqrt(norm2.series, mul)
    inv = series_inverse(root, mul)
    normalizer = Func(inv, {}, -norm2.pi4 // 2)
    return moyal(model, eps, normalizer)


# ---------------------------------------------------------------------------
# rank-one and finite-rank operators
# ---------------------------------------------------------------------------


class RankOneOperator:
    """Theta_{phi,psi}: chi -> phi bullet_red <psi, chi>_red."""

    def __init__(self, cfg: ReductionConfig, phi: Func, psi: Func):
        self.cfg = cfg
        self.phi = phi
        self.psi = psi

    def __call__(self, chi: Func) -> Func:
        val = inner_product_red(self.cfg, self.psi, chi)
        return _graded_right_module(self.cfg, self.phi, val)

    def adjoint(self) -> "RankOneOperator":
        return RankOneOperator(self.cfg, self.psi, self.phi)

    def compose(self, other: "RankOneOperator") -> "RankOneOperator":
        mid = inner_product_red(self.cfg, self.psi, other.phi)
        new_phi = _graded_right_module(self.cfg, self.phi, mid)
        return RankOneOperator(self.cfg, new_phi, other.psi)

    def __repr__(self):
        return f"RankOneOperator({self.phi!r}, {self.psi!r})"


def _strip_grade(f: Func) -> Func:
    return Func(f.series, f.profile, 0)


def _graded_right_module(cfg: ReductionConfig, phi: Func, u: Func) -> Func:
    """phi bullet_red u where u may carry a pi grade from an inner product."""
    out = right_module(cfg, phi, _strip_grade(u))
    return Func(out.series, out.profile, out.pi4 + u.pi4)


def rank_one_apply(cfg: ReductionConfig, phi: Func, psi: Func, chi: Func) -> Func:
    return RankOneOperator(cfg, phi, psi)(chi)


def rank_one_compose(cfg: ReductionConfig, t1: RankOneOperator,
                     t2: RankOneOperator) -> RankOneOperator:
    return t1.compose(t2)


def rank_one_adjoint(t: RankOneOperator) -> RankOneOperator:
    return t.adjoint()


# ---------------------------------------------------------------------------
# complete positivity sampling
# ---------------------------------------------------------------------------


def complete_positivity_sample(cfg: ReductionConfig, states, points) -> dict:
    """Evaluate the Gram matrix of the states at base points and certify
    lowest-order positive semidefiniteness, plus the factorization witness
    through the unit-norm state."""
    model = cfg.model
    n = len(states)
    gram = [[inner_product_red(cfg, states[i], states[j]) for j in range(n)]
            for i in range(n)]
    grades = {gram[i][j].pi4 for i in range(n) for j in range(n)
              if not gram[i][j].is_zero()}
    if len(grades) > 1:
        raise ValueError("states must share a common pi grade for the Gram test")
    psd = []
    for pt in points:
        mat = []
        for i in range(n):
            row = []
            for j in range(n):
                val = gram[i][j].evaluate(pt).series.coeffs[0].constant_term()
                row.append(val)
            mat.append(row)
        psd.append(is_psd_hermitian(mat))

    ehat = fullness_element(model)
    witness_ok = True
    for i in range(n):
        for j in range(n):
            lhs = RankOneOperator(cfg, states[i], states[j])
            rhs = RankOneOperator(cfg, states[i], ehat).compose(
                RankOneOperator(cfg, ehat, states[j])
            )
            probe = ehat
            if not (lhs(probe) - rhs(probe)).is_zero():
                witness_ok = False
    return {"psd_at_points": psd, "all_psd": all(psd), "witness": witness_ok}


# ---------------------------------------------------------------------------
# deformed vertical differential operators
# ---------------------------------------------------------------------------


class VerticalOperator:
    """A vertical operator sum_I D^I e_I in fundamental-field words.

    Internally the words are PBW-ordered left-invariant derivatives; each
    fundamental generator contributes one sign.  The deformed action is
    D bullet' phi = sum_I D^I *_red e_I(phi) and the deformed composition
    star' is operator composition in this calculus.
    """

    def __init__(self, model: ModelSpace, op: SymbolOp | None = None):
        if not model.has_group:
            raise ValueError("vertical operators need group coordinates")
        self.model = model
        self.op = op if op is not None else SymbolOp(model, None, lam_weighted=False)

    @staticmethod
    def identity(model: ModelSpace) -> "VerticalOperator":
        return VerticalOperator.from_fundamental_terms(
            model, {(): Func.one(model.gens, model.order)}
        )

    @staticmethod
    def from_fundamental_terms(model: ModelSpace, terms: dict) -> "VerticalOperator":
        op = SymbolOp(model, None, lam_weighted=False)
        for word, coeff in terms.items():
            word = tuple(word)
            sign = GaussRational(-1 if len(word) % 2 else 1)
            op._add_normal_ordered(word, coeff * sign)
        return VerticalOperator(model, op)

    @staticmethod
    def fundamental(model: ModelSpace, a: int) -> "VerticalOperator":
        """The Lie derivative along the fundamental field of basis vector a."""
        return VerticalOperator.from_fundamental_terms(
            model, {(a,): Func.one(model.gens, model.order)}
        )

    @staticmethod
    def multiplication(model: ModelSpace, c: Func) -> "VerticalOperator":
        return VerticalOperator.from_fundamental_terms(model, {(): c})

    def act(self, phi: Func) -> Func:
        return self.op.apply(phi)

    def compose(self, other: "VerticalOperator") -> "VerticalOperator":
        return VerticalOperator(self.model, self.op.compose(other.op))

    def __add__(self, other: "VerticalOperator") -> "VerticalOperator":
        return VerticalOperator(self.model, self.op + other.op)

    def __sub__(self, other: "VerticalOperator") -> "VerticalOperator":
        return VerticalOperator(self.model, self.op - other.op)

    def scale(self, c) -> "VerticalOperator":
        return VerticalOperator(self.model, self.op.scale(c))

    def lam_shift(self, k: int) -> "VerticalOperator":
        out = SymbolOp(self.model, None, lam_weighted=False)
        for w, c in self.op.terms.items():
            out._add_term(w, Func(c.series.shift(k), c.profile, c.pi4))
        return VerticalOperator(self.model, out)

    def lam_slice(self, r: int) -> "VerticalOperator":
        out = SymbolOp(self.model, None, lam_weighted=False)
        for w, c in self.op.terms.items():
            p = c.series.coeffs[r]
            if not p.is_zero():
                out._add_term(w, Func(
                    LambdaSeries.lam_power(p, r, self.model.order), c.profile, c.pi4
                ))
        return VerticalOperator(self.model, out)

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def adjoint(self) -> "VerticalOperator":
        """The unique adjoint for the canonical inner product.

        Generators: fundamental Lie derivatives pick up -Delta(xi) - L_xi
        (the modular term vanishes for nilpotent groups), coefficient
        multiplications conjugate.
        """
        model = self.model
        total = SymbolOp(model, None, lam_weighted=False)
        for word, c in self.op.terms.items():
            # (M_c o L_{w})^* = L_{w_k}^* o ... o L_{w_1}^* o M_{conj c}
            # with L_{X_a}^* = -L_{X_a} for the unimodular model.
            piece = SymbolOp(
                model, {(): c.conj()}, lam_weighted=False
            )
            for a in word:
                gen = SymbolOp(
                    model,
                    {(a,): Func.one(model.gens, model.order) * GaussRational(-1)},
                    lam_weighted=False,
                )
                piece = gen.compose(piece)
            total = total + piece
        return VerticalOperator(model, total)


def vertical_act(cfg_or_model, d: VerticalOperator, phi: Func) -> Func:
    return d.act(phi)


def vertical_compose(d: VerticalOperator, e: VerticalOperator) -> VerticalOperator:
    return d.compose(e)


def vertical_adjoint(d: VerticalOperator) -> VerticalOperator:
    return d.adjoint()


def canonical_inner_product(cfg: ReductionConfig, phi: Func, psi: Func) -> Func:
    """<phi, psi>_can for the trivialized model: fiber-average the starred
    product of the states (no momentum machinery enters)."""
    return inner_product_red_closed_form(cfg, phi, psi)


def deformation_comparison_H(cfg: ReductionConfig, ip1, ip2, g_cap: int = 2,
                             word_cap: int = 2, probe_cap: int = 2) -> VerticalOperator:
    """Solve ip2(phi, psi) = ip1(phi, H bullet' psi) for a vertical H.

    H is sought order by order with polynomial coefficients in the group
    coordinates up to g_cap and words up to word_cap; probe states are
    Gaussian fiber monomials up to probe_cap.  Raises if the caps are too
    small to carry the solution.
    """
    model = cfg.model
    order = model.order
    gnames = model.group_names

    def g_monomials(cap):
        vecs = set()

        def gen(idx, left, cur):
            if idx == len(gnames):
                vecs.add(tuple(cur))
                return
            for k in range(left + 1):
                gen(idx + 1, left - k, cur + [k])

        gen(0, cap, [])
        return sorted(vecs, key=lambda e: (sum(e), e))

    def mono_func(expo):
        p = Poly(model.gens, {tuple(
            expo[gnames.index(n)] if n in gnames else 0 for n in model.gens
        ): GaussRational(1)})
        return Func.from_poly(p, order)

    def words(cap):
        layer = [()]
        out = [()]
        for _ in range(cap):
            layer = [w + (a,) for w in layer for a in range(model.lie.dim)
                     if not w or a >= w[-1]]
            out.extend(layer)
        return out

    probes = [model.fiber_state(mono_func(e)) for e in g_monomials(probe_cap)]
    unknowns = []
    for w in words(word_cap):
        for e in g_monomials(g_cap):
            unknowns.append((w, e))

    candidate_vals = []
    for (w, e) in unknowns:
        cand = VerticalOperator(
            model, SymbolOp(model, {tuple(w): mono_func(e)}, lam_weighted=False)
        )
        vals = [ip1(phi, cand.act(psi)) for phi in probes for psi in probes]
        candidate_vals.append(vals)

    h = VerticalOperator.identity(model)
    for r in range(1, order + 1):
        defects = [
            ip2(phi, psi) - ip1(phi, h.act(psi)) for phi in probes for psi in probes
        ]
        if all(d.is_zero() for d in defects):
            continue
        window = 0
        for f in defects:
            window = max(window, *(p.total_degree() for p in f.series.coeffs))
        for vals in candidate_vals:
            for f in vals:
                window = max(window, *(p.total_degree() for p in f.series.coeffs))
        columns = [
            [x for f in vals for x in _scalarize(model, f, 0, window)]
            for vals in candidate_vals
        ]
        rhs = [x for d in defects for x in _scalarize(model, d, r, window)]
        rows = [[columns[c][k] for c in range(len(columns))] for k in range(len(rhs))]
        sol = solve_linear(rows, rhs)
        if sol is None:
            raise ValueError("caps too small to determine the comparison operator")
        add = SymbolOp(model, None, lam_weighted=False)
        for coeff, (w, e) in zip(sol, unknowns):
            if not coeff.is_zero():
                add._add_term(tuple(w), Func(
                    LambdaSeries.lam_power(
                        mono_func(e).series.coeffs[0] * coeff, r, order
                    )
                ))
        h = h + VerticalOperator(model, add)
    return h


def _scalarize(model: ModelSpace, f: Func, r: int, cap: int):
    """Flatten the lam-order-r coefficient of a base function into numbers."""
    from .involution import _base_monomials

    basis = _base_monomials(model, cap)
    p = f.series.coeffs[r]
    base_idx = [f.gens.index(n) for n in model.base_names]
    vec = {e: GaussRational(0) for e in basis}
    for expo, c in p.terms.items():
        key = tuple(expo[i] for i in base_idx)
        vec[key] = vec[key] + c
    return [vec[e] for e in sorted(vec)]


def vertical_sqrt(cfg: ReductionConfig, h: VerticalOperator) -> VerticalOperator:
    """Hermitian square root V of H = id + O(lam) with V* star' V = H."""
    model = cfg.model
    v = VerticalOperator.identity(model)
    for r in range(1, model.order + 1):
        defect = h - v.adjoint().compose(v)
        half = defect.lam_slice(r).scale(GaussRational(Fraction(1, 2)))
        v = v + half
    return v


# ---------------------------------------------------------------------------
# the classical crossed product on kernel functions
# ---------------------------------------------------------------------------


class KernelSpace:
    """Functions of (base, g, g') with Gaussian decay in both fiber slots."""

    def __init__(self, model: ModelSpace):
        if not model.has_group:
            raise ValueError("kernels need group coordinates")
        self.model = model
        self.left_names = model.group_names
        self.right_names = tuple(n + "_r" for n in model.group_names)
        self.aux_names = tuple(n + "_s" for n in model.group_names)
        self.gens = model.base_names + self.left_names + self.right_names
        self.big_gens = self.gens + self.aux_names

    def kernel(self, f: Func) -> Func:
        """Attach the fiber profiles to a polynomial on the kernel space."""
        prof = {n: FIBER_EXPONENT for n in self.left_names + self.right_names}
        return f.with_profile(prof)

    def from_pair(self, phi: Func, psi: Func) -> Func:
        """phi (x) conj(psi): the image of a rank-one operator."""
        left = phi.rename({}, self.gens)
        right = psi.conj().rename(dict(zip(self.left_names, self.right_names)), self.gens)
        return left * right

    def conv(self, k1: Func, k2: Func) -> Func:
        """Kernel composition: integrate the middle fiber slot."""
        a = k1.rename(dict(zip(self.right_names, self.aux_names)), self.big_gens)
        b = k2.rename(dict(zip(self.left_names, self.aux_names)), self.big_gens)
        prod = a * b
        out = gaussian_integrate(prod, None, list(self.aux_names))
        return out.rename({}, self.gens)

    def act(self, k: Func, phi: Func) -> Func:
        """Apply a kernel to a fiber state."""
        a = k.rename(dict(zip(self.right_names, self.aux_names)),
                     self.model.base_names + self.left_names + self.aux_names)
        b = phi.rename(dict(zip(self.left_names, self.aux_names)),
                       self.model.base_names + self.left_names + self.aux_names)
        prod = a * b
        out = gaussian_integrate(prod, None, list(self.aux_names))
        return out.rename({}, self.model.gens)

    def star(self, k: Func) -> Func:
        """Kernel involution: swap the slots and conjugate."""
        swap = dict(zip(self.left_names, self.right_names))
        swap.update(dict(zip(self.right_names, self.left_names)))
        return k.conj().rename(swap, self.gens)


def crossed_conv(ks: KernelSpace, k1: Func, k2: Func) -> Func:
    return ks.conv(k1, k2)


def crossed_act(ks: KernelSpace, k: Func, phi: Func) -> Func:
    return ks.act(k, phi)


def crossed_star(ks: KernelSpace, k: Func) -> Func:
    return ks.star(k)


def classical_inner_product(model: ModelSpace, phi: Func, psi: Func) -> Func:
    """The order-zero inner product: fiber integral of conj(phi) psi."""
    return fiber_integral(model, phi.conj() * psi)


# ---------------------------------------------------------------------------
# external tensor products and induction
# ---------------------------------------------------------------------------


class InnerProductModule:
    """A right module with an algebra-valued inner product and a left action
    of the algebra (the canonical module over the base algebra by default)."""

    def __init__(self, name, ip, left_action, right_action):
        self.name = name
        self.ip = ip
        self.left_action = left_action
        self.right_action = right_action

    @staticmethod
    def canonical(cfg: ReductionConfig) -> "InnerProductModule":
        model = cfg.model

        def ip(u, v):
            return moyal(model, u.conj(), v)

        def left(u, h):
            return moyal(model, u, h)

        def right(h, u):
            return moyal(model, h, u)

        return InnerProductModule("base-algebra", ip, left, right)


def schroedinger_class(model: ModelSpace, b: Func) -> Func:
    """The position-space representative of a class: restrict after N."""
    return model.restrict(neumaier_N(model).apply(b))


def schroedinger_pairing(model: ModelSpace, beta1: Func, beta2: Func) -> Func:
    """The scalar inner product on position-space states: plain fiber L^2."""
    return fiber_integral(model, beta1.conj() * beta2)


class InducedVector:
    """A finite sum of simple tensors (position-space state) x (module element)."""

    def __init__(self, terms):
        self.terms = list(terms)

    def __add__(self, other):
        return InducedVector(self.terms + other.terms)


def external_inner_product(cfg: ReductionConfig, module: InnerProductModule,
                           v1: InducedVector, v2: InducedVector) -> Func:
    """<beta (x) x, beta' (x) y> = pairing(beta, beta') * ip(x, y)."""
    model = cfg.model
    total = model.zero()
    for (b1, x1) in v1.terms:
        for (b2, x2) in v2.terms:
            scal = schroedinger_pairing(model, b1, b2)
            val = scal * module.ip(x1, x2)
            total = total + val
    return total


def external_tensor(cfg: ReductionConfig, module: InnerProductModule) -> InnerProductModule:
    """The external tensor of the position-space module with a right module
    over the base algebra: simple tensors, the factorized inner product, the
    induced left action of the full algebra and the slotwise right action.
    Degenerate simple tensors are exactly those with a zero position-space
    class, so no extra quotient is needed on representatives."""
    induce = rieffel_induce(cfg, module)

    def ip(v1: InducedVector, v2: InducedVector) -> Func:
        return external_inner_product(cfg, module, v1, v2)

    def left(f: Func, vec: InducedVector) -> InducedVector:
        return induce(f, vec)

    def right(vec: InducedVector, u: Func) -> InducedVector:
        return InducedVector([(b, module.right_action(x, u)) for b, x in vec.terms])

    return InnerProductModule("external-tensor", ip, left, right)


def rieffel_induce(cfg: ReductionConfig, module: InnerProductModule):
    """The induced action of the full algebra on simple tensors.

    A symbol acts through the position-space representation on the first
    leg after splitting off its base-coordinate monomials, which act on the
    module leg through the left action.
    """
    from .starprod import schroedinger_rep

    model = cfg.model

    def act(f: Func, vec: InducedVector) -> InducedVector:
        out = []
        for (beta, x) in vec.terms:
            for u_part, w_part in _base_split(model, f):
                new_beta = schroedinger_rep(model, w_part, beta)
                out.append((new_beta, module.left_action(u_part, x)))
        return InducedVector(out)

    return act


def _base_split(model: ModelSpace, f: Func):
    """Write f as a finite sum of (base monomial) x (fiber-and-momentum part)."""
    base_idx = [model.gens.index(n) for n in model.base_names]
    buckets: dict = {}
    for r, p in enumerate(f.series.coeffs):
        for expo, c in p.terms.items():
            key = tuple(expo[i] if i in base_idx else 0 for i in range(len(expo)))
            rest = tuple(0 if i in base_idx else expo[i] for i in range(len(expo)))
            buckets.setdefault(key, []).append((r, rest, c))
    out = []
    for key, parts in buckets.items():
        u = Func.from_poly(Poly(model.gens, {key: GaussRational(1)}), model.order)
        coeffs = [Poly.zero(model.gens) for _ in range(model.order + 1)]
        for r, rest, c in parts:
            coeffs[r] = coeffs[r] + Poly(model.gens, {rest: c})
        w = Func(LambdaSeries(coeffs, model.order), dict(f.profile), f.pi4)
        out.append((u, w))
    return out

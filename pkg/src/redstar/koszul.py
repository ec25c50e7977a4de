"""Classical and quantized Koszul complexes over the product model.

The complex lives on antisymmetric-algebra-valued functions; insertion of
the momentum covector is the classical differential, and the quantized
differential adds the right star multiplication, the structure-constant
correction and the modular term weighted by the parameter kappa.  All
geometric-series inverses terminate by lam-grading, so every identity is
exact modulo lam^(K+1).
"""

from __future__ import annotations

from fractions import Fraction

from .funcs import Func
from .geometry import ModelSpace
from .scalars import GaussRational, I as IMAG
from .series import LambdaSeries
from .starprod import star_total


def kappa_series(model: ModelSpace, value) -> LambdaSeries:
    """A scalar kappa as a lam-series; accepts rationals or coefficient lists."""
    if isinstance(value, LambdaSeries):
        return value.extend(model.order)
    if isinstance(value, (list, tuple)):
        coeffs = [GaussRational.coerce(v) for v in value]
        return LambdaSeries(coeffs, model.order)
    return LambdaSeries.of(GaussRational.coerce(value), model.order)


class ReductionConfig:
    """kappa, the ambient product, and the truncation order."""

    def __init__(self, model: ModelSpace, kappa=Fraction(1, 2), star=None):
        self.model = model
        self.kappa = kappa_series(model, kappa)
        self.star = star if star is not None else (lambda f, g: star_total(model, f, g))

    def kappa_plus_conj(self) -> LambdaSeries:
        return self.kappa + self.kappa.conj()


class SuperObservable:
    """Map from strictly increasing index tuples to coefficient functions."""

    def __init__(self, model: ModelSpace, comps=None):
        self.model = model
        self.comps: dict = {}
        if comps:
            for idx, f in comps.items():
                idx = tuple(idx)
                if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
                    raise ValueError(f"indices must be strictly increasing: {idx}")
                if not f.is_zero():
                    self._add(idx, f)

    def _add(self, idx, f):
        cur = self.comps.get(idx)
        s = f if cur is None else cur + f
        if s.is_zero():
            self.comps.pop(idx, None)
        else:
            self.comps[idx] = s

    @staticmethod
    def scalar(model: ModelSpace, f: Func) -> "SuperObservable":
        return SuperObservable(model, {(): f})

    def is_zero(self) -> bool:
        return not self.comps

    def degree_part(self, k: int) -> "SuperObservable":
        return SuperObservable(
            self.model, {i: f for i, f in self.comps.items() if len(i) == k}
        )

    def degrees(self):
        return sorted({len(i) for i in self.comps})

    def __add__(self, other: "SuperObservable") -> "SuperObservable":
        out = SuperObservable(self.model, dict(self.comps))
        for idx, f in other.comps.items():
            out._add(idx, f)
        return out

    def __sub__(self, other: "SuperObservable") -> "SuperObservable":
        return self + other.scale(GaussRational(-1))

    def scale(self, c) -> "SuperObservable":
        return SuperObservable(
            self.model, {i: f * c for i, f in self.comps.items()}
        )

    def scale_series(self, s: LambdaSeries) -> "SuperObservable":
        return SuperObservable(
            self.model, {i: Func(f.series * s, f.profile, f.pi4) for i, f in self.comps.items()}
        )

    def map(self, fn) -> "SuperObservable":
        return SuperObservable(self.model, {i: fn(f) for i, f in self.comps.items()})

    def conj(self) -> "SuperObservable":
        """Complex conjugation; the basis vectors of the exterior factor are real."""
        return self.map(lambda f: f.conj())

    def wedge_basis(self, c: int) -> "SuperObservable":
        """e_c wedge x."""
        out = SuperObservable(self.model)
        for idx, f in self.comps.items():
            if c in idx:
                continue
            pos = sum(1 for i in idx if i < c)
            new = tuple(sorted(idx + (c,)))
            sign = GaussRational(-1 if pos % 2 else 1)
            out._add(new, f * sign)
        return out

    def insert_basis(self, a: int) -> "SuperObservable":
        """ins(e^a): graded derivation of degree -1, insertion at the front."""
        out = SuperObservable(self.model)
        for idx, f in self.comps.items():
            if a not in idx:
                continue
            m = idx.index(a)
            sign = GaussRational(-1 if m % 2 else 1)
            out._add(idx[:m] + idx[m + 1:], f * sign)
        return out

    def insert_covector(self, alpha) -> "SuperObservable":
        out = SuperObservable(self.model)
        for a, v in enumerate(alpha):
            if v:
                out = out + self.insert_basis(a).scale(GaussRational.coerce(Fraction(v)))
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperObservable):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps, key=lambda i: (len(i), i)):
            tag = "^".join(f"e{i+1}" for i in idx) if idx else "1"
            parts.append(f"({self.comps[idx]!r})*{tag}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# classical complex
# ---------------------------------------------------------------------------


def koszul(model: ModelSpace, x: SuperObservable) -> SuperObservable:
    """Classical differential: multiply each insertion by the momentum."""
    out = SuperObservable(model)
    for a in range(model.lie.dim):
        ja = model.momentum(a)
        out = out + x.insert_basis(a).map(lambda f, ja=ja: f * ja)
    return out


def homotopy_h(model: ModelSpace, x: SuperObservable, k: int | None = None) -> SuperObservable:
    """h_k: wedge with e_a, differentiate by J_a and average the momentum ray.

    On a momentum monomial of degree d in antisymmetric degree k the ray
    integral contributes the exact rational 1/(k + d).
    """
    out = SuperObservable(model)
    for idx, f in x.comps.items():
        deg = len(idx) if k is None else k
        for a in range(model.lie.dim):
            df = f.diff(model.momentum_names[a])
            if df.is_zero():
                continue
            weighted = df.weight_by_degree(
                model.momentum_names, lambda d, deg=deg: Fraction(1, deg + d + 1)
            )
            out = out + SuperObservable(model, {idx: weighted}).wedge_basis(a)
    return out


def prolong(model: ModelSpace, phi: Func) -> Func:
    return model.prolong(phi)


def restriction(model: ModelSpace, f: Func) -> Func:
    return model.restrict(f)


# ---------------------------------------------------------------------------
# quantized complex
# ---------------------------------------------------------------------------


def quantized_koszul(cfg: ReductionConfig, x: SuperObservable) -> SuperObservable:
    """ins(e^a)x * J_a + (i lam/2) C_ab^c e_c ins(e^a) ins(e^b) x
    + i lam kappa ins(Delta) x."""
    model = cfg.model
    out = SuperObservable(model)
    for a in range(model.lie.dim):
        ja = model.momentum(a)
        ins = x.insert_basis(a)
        out = out + ins.map(lambda f, ja=ja: cfg.star(f, ja))
    half_i = IMAG * GaussRational(Fraction(1, 2))
    for a in range(model.lie.dim):
        for b in range(model.lie.dim):
            double = x.insert_basis(b).insert_basis(a)
            if double.is_zero():
                continue
            for c in range(model.lie.dim):
                v = model.lie.c(a, b, c)
                if v:
                    term = double.wedge_basis(c).map(
                        lambda f, v=v: Func(
                            (f.series * (half_i * GaussRational(v))).shift(1),
                            f.profile,
                            f.pi4,
                        )
                    )
                    out = out + term
    mod_term = x.insert_covector(model.lie.modular)
    if not mod_term.is_zero():
        ilk = (cfg.kappa * IMAG).shift(1)
        out = out + mod_term.scale_series(ilk)
    return out


def _perturbation(cfg: ReductionConfig, f: Func) -> Func:
    """(qk_1 - k_1) h_0 applied to a degree-zero function; O(lam)."""
    model = cfg.model
    hx = homotopy_h(model, SuperObservable.scalar(model, f), 0)
    q = quantized_koszul(cfg, hx)
    c = koszul(model, hx)
    diff = q - c
    return diff.comps.get((), model.zero())


def _neumann_resolve(cfg: ReductionConfig, f: Func) -> Func:
    """(id + (qk_1 - k_1) h_0)^{-1} f by the terminating geometric series."""
    y = f
    for _ in range(cfg.model.order):
        y = f - _perturbation(cfg, y)
    return y


def deformed_restriction(cfg: ReductionConfig, f: Func) -> Func:
    """iota*_kappa: restriction after the geometric-series correction."""
    return cfg.model.restrict(_neumann_resolve(cfg, f))


def deformed_h0(cfg: ReductionConfig, f: Func) -> SuperObservable:
    return homotopy_h(
        cfg.model, SuperObservable.scalar(cfg.model, _neumann_resolve(cfg, f)), 0
    )


def deformed_homotopy(cfg: ReductionConfig, x: SuperObservable, k: int) -> SuperObservable:
    """h^kappa_k = h_k (h_{k-1} qk_k + qk_{k+1} h_k)^{-1} in degree k >= 0."""
    model = cfg.model
    if k == 0:
        out = SuperObservable(model)
        for idx, f in x.comps.items():
            if idx != ():
                raise ValueError("degree-0 homotopy expects a scalar input")
            out = out + deformed_h0(cfg, f)
        return out

    def op(y: SuperObservable) -> SuperObservable:
        return homotopy_h(model, quantized_koszul(cfg, y), k - 1) + quantized_koszul(
            cfg, homotopy_h(model, y, k)
        )

    y = x
    for _ in range(model.order):
        y = x - (op(y) - y)
    return homotopy_h(model, y, k)


# ---------------------------------------------------------------------------
# bimodule structure and the reduced product
# ---------------------------------------------------------------------------


def left_module(cfg: ReductionConfig, f: Func, phi: Func) -> Func:
    """f bullet phi = iota*_kappa(f * prol phi)."""
    model = cfg.model
    return deformed_restriction(cfg, cfg.star(f, model.prolong(phi)))


def reduced_star(cfg: ReductionConfig, u: Func, v: Func) -> Func:
    """The induced product on the base through the quantized restriction."""
    model = cfg.model
    if not (model.is_base_only(u) and model.is_base_only(v)):
        raise ValueError("the reduced product takes base-only functions")
    return deformed_restriction(cfg, cfg.star(model.prolong(u), model.prolong(v)))


def right_module(cfg: ReductionConfig, phi: Func, u: Func) -> Func:
    """phi bullet_red u = iota*_kappa(prol phi * prol u)."""
    model = cfg.model
    if not model.is_base_only(u):
        raise ValueError("the right action is by base functions")
    return deformed_restriction(cfg, cfg.star(model.prolong(phi), model.prolong(u)))


def quantized_BC_member(cfg: ReductionConfig, f: Func) -> bool:
    """Normalizer membership: the deformed restriction must be invariant."""
    model = cfg.model
    rest = deformed_restriction(cfg, f)
    if not model.has_group:
        return all(
            not rest.depends_on(n) for n in model.group_names
        )  # trivially true without group coordinates
    for a in range(model.lie.dim):
        if not model.lie_derivative_C(a, rest).is_zero():
            return False
    return True

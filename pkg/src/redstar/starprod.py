"""Star products on the product model.

The base carries the constant-coefficient exponential bidifferential product
(the Weyl-Moyal product for the matrix Lam).  The cotangent factor carries
two products: a standard-ordered one defined through a symbol calculus on
left-invariant derivatives, and its Hermitian normalization obtained by
conjugating with the exponential N of the momentum Laplacian minus the
vertical modular field.  The total product acts blockwise.

Operators coming from the symbol calculus are held in a "stripped" normal
form sum_w c_w (i lam)^{|w|} L_{w_1} ... L_{w_k}: every stored word is
non-decreasing, and the per-generator factor (i lam) is implicit, so all
explicit factors generated by reordering and Leibniz pushes are nonnegative
powers of lam.  Identities then hold exactly modulo lam^(K+1) at every
momentum degree simultaneously.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

from .diffop import DiffOperator
from .funcs import Func
from .geometry import ModelSpace
from .scalars import GaussRational, I as IMAG
from .series import LambdaSeries


# ---------------------------------------------------------------------------
# base product
# ---------------------------------------------------------------------------


def moyal(model: ModelSpace, f: Func, g: Func) -> Func:
    """Exponential bidifferential product in the base coordinates only.

    Functions of the fiber variables are multiplied pointwise, so this also
    serves as the coefficient product of the symbol calculus.
    """
    names = model.base_names
    lam = model.poisson_matrix
    n = len(names)
    out = f * g
    level = [(f, g, GaussRational(1))]
    for r in range(1, f.order + 1):
        nxt = []
        for fd, gd, s in level:
            for i in range(n):
                for j in range(n):
                    if lam[i][j] == 0:
                        continue
                    nxt.append((fd.diff(names[i]), gd.diff(names[j]),
                                s * GaussRational(lam[i][j])))
        level = [(a, b, s) for a, b, s in nxt if not (a.is_zero() or b.is_zero())]
        if not level:
            break
        scale = (IMAG * GaussRational(Fraction(1, 2))) ** r * GaussRational(
            Fraction(1, factorial(r))
        )
        term = None
        for fd, gd, s in level:
            piece = fd * gd * (s * scale)
            term = piece if term is None else term + piece
        if term is not None and not term.is_zero():
            out = out + Func(term.series.shift(r), term.profile, term.pi4)
    return out


# ---------------------------------------------------------------------------
# word calculus
# ---------------------------------------------------------------------------


def _mul_ilam(f: Func, times: int = 1) -> Func:
    """Multiply by (i lam)^times."""
    if times == 0:
        return f
    s = f.series.shift(times) * (IMAG ** times)
    return Func(s, f.profile, f.pi4)


class SymbolOp:
    """Operator sum_w c_w F^{|w|} L_{w_1}...L_{w_k} on fiber functions.

    Words are kept PBW-sorted (non-decreasing generator indices).  The
    coefficients c_w are momentum-free Funcs that multiply through the base
    product and pointwise in the group coordinates.  The per-generator
    factor F is (i lam) for the symbol calculus and 1 for plain vertical
    differential operators.
    """

    def __init__(self, model: ModelSpace, terms=None, lam_weighted: bool = True):
        self.model = model
        self.lam_weighted = bool(lam_weighted)
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self._add_term(tuple(w), c)

    def _factor(self, f: Func, times: int = 1) -> Func:
        return _mul_ilam(f, times) if self.lam_weighted else f

    def _add_term(self, word, coeff):
        if word in self.terms:
            s = self.terms[word] + coeff
            if s.is_zero():
                del self.terms[word]
            else:
                self.terms[word] = s
        elif not coeff.is_zero():
            self.terms[word] = coeff

    def _add_normal_ordered(self, word, coeff):
        """Insert c * F^{|w|} L_w, reordering out-of-order words."""
        if coeff.is_zero():
            return
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a > b:
                swapped = word[:k] + (b, a) + word[k + 2:]
                self._add_normal_ordered(swapped, coeff)
                for c in range(self.model.lie.dim):
                    v = self.model.lie.c(a, b, c)
                    if v:
                        shorter = word[:k] + (c,) + word[k + 2:]
                        self._add_normal_ordered(
                            shorter, self._factor(coeff) * GaussRational(v)
                        )
                return
        self._add_term(word, coeff)

    def _new(self, terms=None) -> "SymbolOp":
        return SymbolOp(self.model, terms, self.lam_weighted)

    def __add__(self, other: "SymbolOp") -> "SymbolOp":
        out = self._new(dict(self.terms))
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __sub__(self, other: "SymbolOp") -> "SymbolOp":
        neg = self._new({w: -c for w, c in other.terms.items()})
        return self + neg

    def scale(self, c) -> "SymbolOp":
        return self._new({w: f * c for w, f in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, phi: Func) -> Func:
        """Apply to a fiber function (no momentum dependence)."""
        if not self.model.is_momentum_free(phi):
            raise ValueError("symbol operators act on momentum-free functions")
        fields = [self.model.left_invariant_field(a) for a in range(self.model.lie.dim)]
        out = phi.zero_like()
        for word, c in self.terms.items():
            val = phi
            for a in reversed(word):
                val = fields[a].apply(val)
            val = self._factor(val, len(word))
            out = out + moyal(self.model, c, val)
        return out

    def compose(self, other: "SymbolOp") -> "SymbolOp":
        """self after other."""
        if self.lam_weighted != other.lam_weighted:
            raise ValueError("cannot mix calculi with different generator factors")
        model = self.model
        fields = [model.left_invariant_field(a) for a in range(model.lie.dim)]
        out = self._new()

        def push(word, coeff):
            # F^{|word|} L_word o M_coeff = sum_v M_{c_v} F^{|v|} L_v
            if not word:
                return {(): coeff}
            head = word[:-1]
            a = word[-1]
            branches = {}
            hit = self._factor(fields[a].apply(coeff))
            if not hit.is_zero():
                for v, cv in push(head, hit).items():
                    branches[v] = branches.get(v, coeff.zero_like()) + cv
            for v, cv in push(head, coeff).items():
                key = v + (a,)
                branches[key] = branches.get(key, coeff.zero_like()) + cv
            return branches

        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for v, cv in push(w1, c2).items():
                    coeff = moyal(model, c1, cv)
                    out._add_normal_ordered(v + w2, coeff)
        return out


def stdrep(model: ModelSpace, f: Func) -> SymbolOp:
    """Standard-ordered quantization of a momentum-polynomial symbol.

    The symmetrized derivative expansion lands every momentum monomial on a
    sum over its distinct arrangements, which the normal ordering folds back
    into the PBW basis.
    """
    if not model.has_group:
        raise ValueError("the symbol calculus needs group coordinates")
    op = SymbolOp(model)
    jnames = model.momentum_names
    degree = max(p.degree_in(jnames) for p in f.series.coeffs) if not f.is_zero() else 0
    layer = [()]
    multis = [()]
    for _ in range(degree):
        layer = [m + (a,) for m in layer for a in range(model.lie.dim) if not m or a >= m[-1]]
        multis.extend(layer)
    for multi in multis:
        g = f
        for a in multi:
            g = g.diff(jnames[a])
        g = g.set_zero(jnames)
        if g.is_zero():
            continue
        r = len(multi)
        seen = set()
        for arrangement in permutations(multi):
            if arrangement in seen:
                continue
            seen.add(arrangement)
            op._add_normal_ordered(
                arrangement, g * GaussRational(Fraction(1, factorial(r)))
            )
    return op


def _dequantize(model: ModelSpace, op: SymbolOp) -> Func:
    """Invert stdrep on a PBW-sorted operator."""
    jnames = model.momentum_names
    residue = SymbolOp(model, dict(op.terms))
    total = None
    while residue.terms:
        length = max(len(w) for w in residue.terms)
        layer = {w: c for w, c in residue.terms.items() if len(w) == length}
        if length == 0:
            piece = layer[()]
            total = piece if total is None else total + piece
            break
        piece = None
        for w, c in layer.items():
            mono = Func.one(model.gens, model.order)
            for a in w:
                mono = mono * Func.var(model.gens, jnames[a], model.order)
            contrib = c * mono
            piece = contrib if piece is None else piece + contrib
        total = piece if total is None else total + piece
        residue = residue - stdrep(model, piece)
    if total is None:
        total = Func.zero(model.gens, model.order)
    return total


# ---------------------------------------------------------------------------
# products on the cotangent factor
# ---------------------------------------------------------------------------


def star_std(model: ModelSpace, f: Func, g: Func) -> Func:
    """Standard-ordered product: the unique symbol with
    stdrep(f star_std g) = stdrep(f) stdrep(g); blockwise over the base."""
    return _dequantize(model, stdrep(model, f).compose(stdrep(model, g)))


def _normalization_argument(model: ModelSpace) -> DiffOperator:
    gens = model.gens
    order = model.order
    delta = DiffOperator.zero(gens, order)
    for a in range(model.lie.dim):
        dj = DiffOperator.partial(gens, model.momentum_names[a], order)
        delta = delta + model.fundamental_field_M(model.basis_vector(a)).compose(dj)
        mod = model.lie.modular[a]
        if mod:
            delta = delta + dj * GaussRational(mod)
    return delta


def neumaier_N(model: ModelSpace) -> DiffOperator:
    """exp((lam/2i)(Delta_0 - Delta_ver)) on momentum-polynomial symbols."""
    if not model.has_group:
        raise ValueError("the normalization operator needs group coordinates")
    key = ("norm_op", 1)
    if key not in model._field_cache:
        arg = _normalization_argument(model).lam_shift(1) * (
            IMAG * GaussRational(Fraction(-1, 2))
        )
        model._field_cache[key] = arg.exp()
    return model._field_cache[key]


def neumaier_N_inverse(model: ModelSpace) -> DiffOperator:
    if not model.has_group:
        raise ValueError("the normalization operator needs group coordinates")
    key = ("norm_op", -1)
    if key not in model._field_cache:
        arg = _normalization_argument(model).lam_shift(1) * (
            IMAG * GaussRational(Fraction(1, 2))
        )
        model._field_cache[key] = arg.exp()
    return model._field_cache[key]


# ---------------------------------------------------------------------------
# enveloping-algebra product for momentum polynomials without group data
# ---------------------------------------------------------------------------


class _UElement:
    """sum_w c_w J_{w_1}...J_{w_k} with [J_a, J_b] = i lam C_ab^c J_c."""

    def __init__(self, model: ModelSpace, terms=None):
        self.model = model
        self.terms: dict = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self._add(tuple(w), c)

    def _add(self, word, coeff):
        if coeff.is_zero():
            return
        cur = self.terms.get(word)
        s = coeff if cur is None else cur + coeff
        if s.is_zero():
            self.terms.pop(word, None)
        else:
            self.terms[word] = s

    def _add_normal_ordered(self, word, coeff):
        if coeff.is_zero():
            return
        for k in range(len(word) - 1):
            a, b = word[k], word[k + 1]
            if a > b:
                swapped = word[:k] + (b, a) + word[k + 2:]
                self._add_normal_ordered(swapped, coeff)
                for c in range(self.model.lie.dim):
                    v = self.model.lie.c(a, b, c)
                    if v:
                        shorter = word[:k] + (c,) + word[k + 2:]
                        self._add_normal_ordered(
                            shorter, _mul_ilam(coeff) * GaussRational(v)
                        )
                return
        self._add(word, coeff)

    def multiply(self, other: "_UElement") -> "_UElement":
        out = _UElement(self.model)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._add_normal_ordered(w1 + w2, moyal(self.model, c1, c2))
        return out

    def subtract(self, other: "_UElement") -> "_UElement":
        out = _UElement(self.model, dict(self.terms))
        for w, c in other.terms.items():
            out._add(w, -c)
        return out


def _symmetrize(model: ModelSpace, f: Func) -> _UElement:
    jnames = model.momentum_names
    out = _UElement(model)
    degree = max(p.degree_in(jnames) for p in f.series.coeffs) if not f.is_zero() else 0
    multis = [()]
    all_multis = [()]
    for _ in range(degree):
        multis = [m + (a,) for m in multis for a in range(model.lie.dim) if not m or a >= m[-1]]
        all_multis.extend(multis)
    for multi in all_multis:
        g = f
        for a in multi:
            g = g.diff(jnames[a])
        g = g.set_zero(jnames)
        if g.is_zero():
            continue
        r = len(multi)
        seen = set()
        for arrangement in permutations(multi):
            if arrangement in seen:
                continue
            seen.add(arrangement)
            out._add_normal_ordered(
                arrangement, g * GaussRational(Fraction(1, factorial(r)))
            )
    return out


def _unsymmetrize(model: ModelSpace, u: _UElement) -> Func:
    jnames = model.momentum_names
    residue = _UElement(model, dict(u.terms))
    total = Func.zero(model.gens, model.order)
    while residue.terms:
        length = max(len(w) for w in residue.terms)
        if length == 0:
            total = total + residue.terms[()]
            break
        piece = None
        for w, c in residue.terms.items():
            if len(w) != length:
                continue
            mono = Func.one(model.gens, model.order)
            for a in w:
                mono = mono * Func.var(model.gens, jnames[a], model.order)
            contrib = c * mono
            piece = contrib if piece is None else piece + contrib
        total = total + piece
        residue = residue.subtract(_symmetrize(model, piece))
    return total


def _gutt_total(model: ModelSpace, f: Func, g: Func) -> Func:
    """Base product tensor the symmetrization product on the momenta."""
    return _unsymmetrize(model, _symmetrize(model, f).multiply(_symmetrize(model, g)))


# ---------------------------------------------------------------------------
# public products
# ---------------------------------------------------------------------------


def star_G(model: ModelSpace, f: Func, g: Func) -> Func:
    """Hermitian product on the cotangent factor: N^{-1}(Nf star_std Ng);
    for momentum-level models the symmetrization product directly."""
    if not model.has_group:
        return _gutt_total(model, f, g)
    n = neumaier_N(model)
    ninv = neumaier_N_inverse(model)
    return ninv.apply(star_std(model, n.apply(f), n.apply(g)))


def star_total(model: ModelSpace, f: Func, g: Func) -> Func:
    """The product of the full model: base product tensor the Hermitian
    fiber product, acting blockwise."""
    return star_G(model, f, g)


def schroedinger_rep(model: ModelSpace, f: Func, psi: Func) -> Func:
    """rho(f) psi = stdrep(Nf) psi."""
    if not model.has_group:
        raise ValueError("the position-space representation needs group coordinates")
    return stdrep(model, neumaier_N(model).apply(f)).apply(psi)


class StarProduct:
    """A named multiplication rule on a model, selectable in scene files."""

    def __init__(self, model: ModelSpace, kind: str):
        kinds = {"moyal", "std", "weyl_g", "total"}
        if kind not in kinds:
            raise ValueError(f"unknown star product {kind!r}; choose from {sorted(kinds)}")
        if kind in ("std", "weyl_g") and not model.has_group:
            raise ValueError(f"product {kind!r} needs group coordinates")
        self.model = model
        self.kind = kind

    def __call__(self, f: Func, g: Func) -> Func:
        if self.kind == "moyal":
            return moyal(self.model, f, g)
        if self.kind == "std":
            return star_std(self.model, f, g)
        if self.kind == "weyl_g":
            return star_G(self.model, f, g)
        return star_total(self.model, f, g)

    def series_mul(self, a: LambdaSeries, b: LambdaSeries) -> LambdaSeries:
        """Adapter so series utilities can use this product as multiplication."""
        fa = Func(a)
        fb = Func(b)
        return self(fa, fb).series

    def __repr__(self):
        return f"StarProduct({self.kind!r} on {self.model.lie.label})"


def check_strong_invariance(model: ModelSpace, star, funcs, kappa_delta=None) -> list:
    """Verify J_xi * f - f * J_xi = -i lam L_{xi_M} f on all basis vectors.

    Returns a list of failure records (basis index, function index, first
    failing lam order); empty when the product is strongly invariant on the
    battery.
    """
    failures = []
    for a in range(model.lie.dim):
        ja = model.momentum(a)
        lie = model.fundamental_field_M(model.basis_vector(a))
        for k, f in enumerate(funcs):
            lhs = star(ja, f) - star(f, ja)
            rhs = _mul_ilam(lie.apply(f)) * GaussRational(-1)
            diff = lhs - rhs
            if not diff.is_zero():
                low, _ = diff.series.lowest_order()
                failures.append({"basis": a, "input": k, "first_bad_order": low})
    return failures

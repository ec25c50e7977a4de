"""The product model: base coordinates with a constant Poisson matrix,
momentum coordinates dual to a Lie algebra, and (for nilpotent algebras of
class at most two) exponential group coordinates.

Conventions, pinned once and used by every sign-sensitive identity:

* bracket on the base  {f, g} = Lam^(ij) d_i f d_j g with constant
  antisymmetric Lam; Hamiltonian fields act by X_u = {., u};
* momenta J_a satisfy {J_a, J_b} = C_ab^c J_c and {phi, J_a} = -X_a phi
  for functions of the group coordinates, where X_a is the left-invariant
  field X_a = d/dg_a + (1/2) C_ba^c g_b d/dg_c;
* fundamental fields are (e_a)_C = -X_a on the constraint surface and
  (e_a)_M = -X_a + C_ab^d J_d d/dJ_a-type coadjoint part upstairs, so that
  [xi_M, eta_M] = -([xi, eta])_M.
"""

from __future__ import annotations

from fractions import Fraction

from .diffop import DiffOperator
from .funcs import Func
from .integrate import gaussian_integrate
from .poly import Poly
from .scalars import GaussRational
from .series import LambdaSeries

FIBER_EXPONENT = Fraction(1, 2)


class LieAlgebraData:
    """Structure constants C[a][b][c] = e^c([e_a, e_b]) with exact checks."""

    def __init__(self, dim: int, structure: dict, label: str = ""):
        self.dim = int(dim)
        self.label = label or f"lie{dim}"
        c = {}
        for (a, b, k), v in structure.items():
            v = Fraction(v)
            if v == 0:
                continue
            for idx in (a, b, k):
                if not 0 <= idx < self.dim:
                    raise ValueError(f"structure index {idx} out of range")
            c[(a, b, k)] = v
        self.structure = c
        self._check_antisymmetry()
        self._check_jacobi()
        self.modular = tuple(
            sum((self.c(a, b, b) for b in range(self.dim)), Fraction(0))
            for a in range(self.dim)
        )
        self.nilpotency_class = self._nilpotency_class()

    def c(self, a, b, k) -> Fraction:
        return self.structure.get((a, b, k), Fraction(0))

    def _check_antisymmetry(self):
        for a in range(self.dim):
            for b in range(self.dim):
                for k in range(self.dim):
                    if self.c(a, b, k) != -self.c(b, a, k):
                        raise ValueError(
                            f"antisymmetry violated at C[{a+1}][{b+1}]^{k+1}"
                        )

    def _check_jacobi(self):
        n = self.dim
        for a in range(n):
            for b in range(a + 1, n):
                for k in range(b + 1, n):
                    for e in range(n):
                        s = Fraction(0)
                        for d in range(n):
                            s += self.c(b, k, d) * self.c(a, d, e)
                            s += self.c(k, a, d) * self.c(b, d, e)
                            s += self.c(a, b, d) * self.c(k, d, e)
                        if s != 0:
                            raise ValueError(
                                f"Jacobi identity violated on basis triple "
                                f"({a+1},{b+1},{k+1}) component {e+1}"
                            )

    def bracket_vec(self, x, y):
        """Bracket of coefficient vectors over the basis."""
        n = self.dim
        out = [Fraction(0)] * n
        for a in range(n):
            if x[a] == 0:
                continue
            for b in range(n):
                if y[b] == 0:
                    continue
                for k in range(n):
                    v = self.c(a, b, k)
                    if v:
                        out[k] += x[a] * y[b] * v
        return tuple(out)

    def _nilpotency_class(self):
        from .linalg import rank

        n = self.dim
        basis = [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]
        layer = basis
        for k in range(1, n + 2):
            nxt = []
            for x in basis:
                for y in layer:
                    v = self.bracket_vec(x, y)
                    if any(v):
                        nxt.append(v)
            if not nxt:
                return k
            if rank([[GaussRational(c) for c in v] for v in nxt]) == rank(
                [[GaussRational(c) for c in v] for v in layer]
            ) and k > 1:
                return None  # series stabilized without dying: not nilpotent
            layer = nxt
        return None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_class is not None

    @property
    def is_unimodular(self) -> bool:
        return all(v == 0 for v in self.modular)

    def __repr__(self):
        return f"LieAlgebraData({self.label!r}, dim={self.dim})"


def abelian_lie(dim: int) -> LieAlgebraData:
    return LieAlgebraData(dim, {}, label=f"abelian{dim}")


def heisenberg3() -> LieAlgebraData:
    return LieAlgebraData(3, {(0, 1, 2): 1, (1, 0, 2): -1}, label="heis3")


def aff1() -> LieAlgebraData:
    return LieAlgebraData(2, {(0, 1, 1): 1, (1, 0, 1): -1}, label="aff1")


def _standard_symplectic(dim: int):
    if dim % 2:
        raise ValueError("base dimension must be even for the default matrix")
    m = dim // 2
    lam = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(m):
        lam[2 * i][2 * i + 1] = Fraction(1)
        lam[2 * i + 1][2 * i] = Fraction(-1)
    return lam


class ModelSpace:
    """Coordinates, truncation order and operator factory for one model."""

    def __init__(self, lie: LieAlgebraData, base_dim: int = 2, order: int = 4,
                 poisson_matrix=None, group_level=None):
        self.lie = lie
        self.order = int(order)
        if base_dim == 2:
            self.base_names = ("q", "p")
        else:
            self.base_names = tuple(
                n for i in range(base_dim // 2) for n in (f"q{i+1}", f"p{i+1}")
            ) if base_dim % 2 == 0 else tuple(f"x{i+1}" for i in range(base_dim))
        n = lie.dim
        if group_level is None:
            group_level = lie.is_nilpotent and (lie.nilpotency_class or 99) <= 2
        if group_level and not (lie.is_nilpotent and lie.nilpotency_class <= 2):
            raise ValueError(
                "group coordinates require a nilpotent Lie algebra of class <= 2"
            )
        self.has_group = bool(group_level)
        self.group_names = (
            (("g",) if n == 1 else tuple(f"g{i+1}" for i in range(n)))
            if self.has_group
            else ()
        )
        self.momentum_names = ("J",) if n == 1 else tuple(f"J{i+1}" for i in range(n))
        self.gens = self.base_names + self.group_names + self.momentum_names
        lam = poisson_matrix if poisson_matrix is not None else _standard_symplectic(base_dim)
        self.poisson_matrix = [[Fraction(v) for v in row] for row in lam]
        for i in range(base_dim):
            for j in range(base_dim):
                if self.poisson_matrix[i][j] != -self.poisson_matrix[j][i]:
                    raise ValueError(f"Poisson matrix not antisymmetric at ({i},{j})")
        self._field_cache: dict = {}

    # -- function constructors --------------------------------------------

    def zero(self) -> Func:
        return Func.zero(self.gens, self.order)

    def one(self) -> Func:
        return Func.one(self.gens, self.order)

    def constant(self, c) -> Func:
        return Func.constant(self.gens, c, self.order)

    def var(self, name: str) -> Func:
        return Func.var(self.gens, name, self.order)

    def momentum(self, a: int) -> Func:
        """J_a as a function (zero-indexed basis label)."""
        return self.var(self.momentum_names[a])

    def momentum_of(self, xi) -> Func:
        out = self.zero()
        for a, c in enumerate(xi):
            if c:
                out = out + self.momentum(a) * GaussRational.coerce(c)
        return out

    def fiber_state(self, f: Func | Poly | int) -> Func:
        """Attach the fixed Gaussian fiber profile exp(-g^2/2) per group coordinate."""
        if not self.has_group:
            raise ValueError("fiber states need group coordinates")
        if isinstance(f, (int, Fraction, GaussRational)):
            f = self.constant(f)
        elif isinstance(f, Poly):
            f = Func.from_poly(f, self.order)
        return f.with_profile({g: FIBER_EXPONENT for g in self.group_names})

    def is_momentum_free(self, f: Func) -> bool:
        return not any(f.depends_on(n) for n in self.momentum_names)

    def is_base_only(self, f: Func) -> bool:
        other = self.group_names + self.momentum_names
        return not any(f.depends_on(n) for n in other)

    # -- vector fields -------------------------------------------------------

    def left_invariant_field(self, a: int) -> DiffOperator:
        """X_a = d/dg_a + (1/2) C_ba^c g_b d/dg_c (exponential coordinates)."""
        key = ("liv", a)
        if key in self._field_cache:
            return self._field_cache[key]
        if not self.has_group:
            raise ValueError("no group coordinates in this model")
        coeffs = {self.group_names[a]: Poly.one(self.gens)}
        for b in range(self.lie.dim):
            for c in range(self.lie.dim):
                v = self.lie.c(b, a, c)
                if v:
                    name = self.group_names[c]
                    add = Poly.var(self.gens, self.group_names[b]) * GaussRational(
                        Fraction(v, 2)
                    )
                    coeffs[name] = coeffs.get(name, Poly.zero(self.gens)) + add
        op = DiffOperator.first_order(self.gens, self.order, coeffs)
        self._field_cache[key] = op
        return op

    def fundamental_field_C(self, xi) -> DiffOperator:
        """(xi)_C = -X_xi acting on functions of the constraint surface."""
        out = DiffOperator.zero(self.gens, self.order)
        for a, c in enumerate(xi):
            if c:
                out = out + self.left_invariant_field(a) * GaussRational.coerce(-Fraction(c))
        return out

    def fundamental_field_M(self, xi) -> DiffOperator:
        """(xi)_M: group part -X_xi plus the coadjoint part on the momenta."""
        key = ("ffm", tuple(xi))
        if key in self._field_cache:
            return self._field_cache[key]
        out = DiffOperator.zero(self.gens, self.order)
        if self.has_group:
            out = out + self.fundamental_field_C(xi)
        coeffs = {}
        for b, cb in enumerate(xi):
            if not cb:
                continue
            for a in range(self.lie.dim):
                for d in range(self.lie.dim):
                    v = self.lie.c(a, b, d)
                    if v:
                        name = self.momentum_names[a]
                        add = Poly.var(self.gens, self.momentum_names[d]) * GaussRational(
                            Fraction(v) * Fraction(cb)
                        )
                        coeffs[name] = coeffs.get(name, Poly.zero(self.gens)) + add
        if coeffs:
            out = out + DiffOperator.first_order(self.gens, self.order, coeffs)
        self._field_cache[key] = out
        return out

    def basis_vector(self, a: int):
        return tuple(Fraction(1 if i == a else 0) for i in range(self.lie.dim))

    def lie_derivative_C(self, a: int, f: Func) -> Func:
        return self.fundamental_field_C(self.basis_vector(a)).apply(f)

    def lie_derivative_M(self, a: int, f: Func) -> Func:
        return self.fundamental_field_M(self.basis_vector(a)).apply(f)

    # -- restriction / prolongation -------------------------------------------

    def restrict(self, f: Func) -> Func:
        """iota^*: put all momenta to zero."""
        return f.set_zero(self.momentum_names)

    def prolong(self, phi: Func) -> Func:
        """prol: include a momentum-free function into the full model."""
        if not self.is_momentum_free(phi):
            raise ValueError("prolongation input must not depend on the momenta")
        return phi

    def __repr__(self):
        return (
            f"ModelSpace(base={self.base_names}, group={self.group_names}, "
            f"momenta={self.momentum_names}, lie={self.lie.label}, K={self.order})"
        )


def fundamental_vector_field(model: ModelSpace, xi, on: str = "M") -> DiffOperator:
    if on == "C":
        return model.fundamental_field_C(xi)
    if on == "M":
        return model.fundamental_field_M(xi)
    raise ValueError("on must be 'M' or 'C'")


def poisson_bracket(model: ModelSpace, f: Func, g: Func) -> Func:
    """{f, g} on the full model: base part plus the canonical momentum part."""
    out = model.zero()
    names = model.base_names
    for i, ni in enumerate(names):
        dfi = f.diff(ni)
        if dfi.is_zero():
            continue
        for j, nj in enumerate(names):
            lam = model.poisson_matrix[i][j]
            if lam:
                out = out + dfi * g.diff(nj) * GaussRational(lam)
    for a in range(model.lie.dim):
        ja = model.momentum_names[a]
        dfa = f.diff(ja)
        dga = g.diff(ja)
        if model.has_group:
            xa = model.left_invariant_field(a)
            if not dfa.is_zero():
                out = out + dfa * xa.apply(g)
            if not dga.is_zero():
                out = out - xa.apply(f) * dga
        for b in range(model.lie.dim):
            dgb = g.diff(model.momentum_names[b])
            if dfa.is_zero() or dgb.is_zero():
                continue
            for c in range(model.lie.dim):
                v = model.lie.c(a, b, c)
                if v:
                    out = out + dfa * dgb * model.momentum(c) * GaussRational(v)
    return out


def classical_BC_member(model: ModelSpace, f: Func) -> bool:
    """Whether {f, J_a} lies in the ideal generated by the momenta for all a."""
    for a in range(model.lie.dim):
        br = poisson_bracket(model, f, model.momentum(a))
        if not model.restrict(br).is_zero():
            return False
    return True


def classical_reduced_bracket(model: ModelSpace, u: Func, v: Func) -> Func:
    """{u, v}_red on the base through restriction of prolonged brackets."""
    if not (model.is_base_only(u) and model.is_base_only(v)):
        raise ValueError("reduced bracket takes base-only functions")
    return model.restrict(poisson_bracket(model, model.prolong(u), model.prolong(v)))


class DensityWeight:
    """Gaussian-times-polynomial-series weight on a coordinate block."""

    def __init__(self, gens, order: int, gauss=None, prefactor=None, name: str = ""):
        self.gens = tuple(gens)
        self.order = int(order)
        self.gauss = {}
        for k, v in (gauss or {}).items():
            v = Fraction(v)
            if k not in self.gens:
                raise ValueError(f"unknown coordinate {k!r} in weight")
            if v != 0:
                self.gauss[k] = v
        if prefactor is None:
            prefactor = LambdaSeries.of(Poly.one(self.gens), self.order)
        elif isinstance(prefactor, Poly):
            prefactor = LambdaSeries.of(prefactor, self.order)
        elif isinstance(prefactor, (int, Fraction, GaussRational)):
            prefactor = LambdaSeries.of(Poly.constant(self.gens, prefactor), self.order)
        self.prefactor = prefactor
        self.name = name
        lead = self.prefactor.coeffs[0]
        c0 = lead.constant_term()
        if not (c0.is_real() and c0.re > 0):
            raise ValueError("weight must have a positive leading prefactor")

    def prefactor_series(self, order: int) -> LambdaSeries:
        return self.prefactor.extend(order) if order != self.order else self.prefactor

    def is_real(self) -> bool:
        return all(p == p.conj() for p in self.prefactor.coeffs)

    def leading_constant(self):
        return self.prefactor.coeffs[0].constant_term()

    def has_constant_leading_prefactor(self) -> bool:
        return self.prefactor.coeffs[0].is_constant()

    def as_func(self, gens, order: int) -> Func:
        series = self.prefactor.extend(order).map(lambda p: p.embed(gens))
        return Func(series, dict(self.gauss), 0)

    def scaled(self, factor) -> "DensityWeight":
        if isinstance(factor, (int, Fraction, GaussRational)):
            factor = LambdaSeries.of(
                Poly.constant(self.gens, factor), self.order
            )
        elif isinstance(factor, Poly):
            factor = LambdaSeries.of(factor, self.order)
        elif isinstance(factor, Func):
            if factor.profile or factor.pi4:
                raise ValueError("weight prefactors are plain polynomial series")
            factor = factor.series
        return DensityWeight(
            self.gens, self.order, self.gauss, self.prefactor * factor, self.name
        )

    def __repr__(self):
        env = "*".join(f"exp(-{a}*{c}^2)" for c, a in sorted(self.gauss.items()))
        return f"DensityWeight({self.prefactor!r}{' * ' + env if env else ''})"


def lebesgue_weight(model: ModelSpace) -> DensityWeight:
    return DensityWeight(model.gens, model.order, {}, None, name="lebesgue")


def gaussian_base_weight(model: ModelSpace, exponent=1, prefactor=None) -> DensityWeight:
    gauss = {n: Fraction(exponent) for n in model.base_names}
    return DensityWeight(model.gens, model.order, gauss, prefactor, name="gaussian")


def lift_density(model: ModelSpace, omega: DensityWeight) -> DensityWeight:
    """Lift a base density to the constraint surface: Haar is Lebesgue in
    exponential coordinates, so the lift just reuses the base data."""
    if not model.lie.is_nilpotent:
        raise ValueError("the density lift needs a nilpotent structure group")
    for k in omega.gauss:
        if k not in model.base_names:
            raise ValueError("base density may only involve base coordinates")
    for p in omega.prefactor.coeffs:
        for n in model.group_names + model.momentum_names:
            if p.depends_on(n):
                raise ValueError("base density may only involve base coordinates")
    return DensityWeight(model.gens, model.order, omega.gauss, omega.prefactor,
                         name=omega.name or "lifted")


def fiber_integral(model: ModelSpace, phi: Func) -> Func:
    """Integrate a fiber state over the group block; Haar = Lebesgue."""
    if not model.has_group:
        raise ValueError("fiber integration needs group coordinates")
    return gaussian_integrate(phi, None, list(model.group_names))


def modular_vector_field(model: ModelSpace, omega: DensityWeight) -> DiffOperator:
    """u -> X_u(log w) for the Gaussian weight function w of omega's order-0 part."""
    if not omega.has_constant_leading_prefactor():
        raise ValueError("modular vector field needs a Gaussian times constant weight")
    n = len(model.base_names)
    coeffs = {}
    for j in range(n):
        cj = Poly.zero(model.gens)
        for i in range(n):
            lam = model.poisson_matrix[i][j]
            a = omega.gauss.get(model.base_names[i], Fraction(0))
            if lam and a:
                cj = cj + Poly.var(model.gens, model.base_names[i]) * GaussRational(
                    -2 * a * lam
                )
        if not cj.is_zero():
            coeffs[model.base_names[j]] = cj
    return DiffOperator.first_order(model.gens, model.order, coeffs)

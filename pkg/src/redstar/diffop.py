"""Polynomial-coefficient differential operators as truncated lam-series.

An operator is stored in normal form sum_r lam^r sum_d c_{r,d} * partial^d
with Poly coefficients c_{r,d} and derivative multi-indices d over the named
generators.  Composition, application and formal adjoints are exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .funcs import Func
from .poly import Poly
from .scalars import GaussRational
from .series import LambdaSeries, series_inverse


def _zero_d(gens):
    return (0,) * len(gens)


class DiffOperator:
    __slots__ = ("gens", "order", "tables")

    def __init__(self, gens, order: int, tables=None):
        object.__setattr__(self, "gens", tuple(gens))
        object.__setattr__(self, "order", int(order))
        tabs = []
        for r in range(order + 1):
            src = tables[r] if tables and r < len(tables) else {}
            clean = {}
            for d, c in src.items():
                if not isinstance(c, Poly):
                    c = Poly.constant(self.gens, c)
                if not c.is_zero():
                    clean[tuple(d)] = c
            tabs.append(clean)
        object.__setattr__(self, "tables", tuple(tabs))

    def __setattr__(self, name, value):
        raise AttributeError("DiffOperator is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(gens, order: int) -> "DiffOperator":
        return DiffOperator(gens, order)

    @staticmethod
    def identity(gens, order: int) -> "DiffOperator":
        gens = tuple(gens)
        return DiffOperator(gens, order, [{_zero_d(gens): Poly.one(gens)}])

    @staticmethod
    def multiplication(p: Poly, order: int) -> "DiffOperator":
        return DiffOperator(p.gens, order, [{_zero_d(p.gens): p}])

    @staticmethod
    def first_order(gens, order: int, coeffs: dict) -> "DiffOperator":
        """Vector field sum coeffs[name] * d/d name."""
        gens = tuple(gens)
        table = {}
        for name, c in coeffs.items():
            d = [0] * len(gens)
            d[gens.index(name)] = 1
            if not isinstance(c, Poly):
                c = Poly.constant(gens, c)
            if not c.is_zero():
                table[tuple(d)] = table.get(tuple(d), Poly.zero(gens)) + c
        return DiffOperator(gens, order, [table])

    @staticmethod
    def partial(gens, name, order: int) -> "DiffOperator":
        return DiffOperator.first_order(gens, order, {name: 1})

    def is_zero(self) -> bool:
        return all(not t for t in self.tables)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        if self.gens != other.gens or self.order != other.order:
            raise ValueError("operator mismatch")
        tabs = []
        for t1, t2 in zip(self.tables, other.tables):
            t = dict(t1)
            for d, c in t2.items():
                t[d] = t.get(d, Poly.zero(self.gens)) + c
            tabs.append(t)
        return DiffOperator(self.gens, self.order, tabs)

    def __neg__(self) -> "DiffOperator":
        return self * GaussRational(-1)

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def __mul__(self, scalar) -> "DiffOperator":
        scalar = GaussRational.coerce(scalar)
        tabs = [{d: c * scalar for d, c in t.items()} for t in self.tables]
        return DiffOperator(self.gens, self.order, tabs)

    __rmul__ = __mul__

    def lam_shift(self, k: int) -> "DiffOperator":
        tabs = [{} for _ in range(k)] + [dict(t) for t in self.tables]
        return DiffOperator(self.gens, self.order, tabs[: self.order + 1])

    def series_multiply(self, s: LambdaSeries) -> "DiffOperator":
        """Left-multiply by a pointwise lam-series of polynomials."""
        tabs = [{} for _ in range(self.order + 1)]
        for r1, p in enumerate(s.coeffs):
            if p.is_zero():
                continue
            for r2, t in enumerate(self.tables):
                if r1 + r2 > self.order:
                    break
                for d, c in t.items():
                    tgt = tabs[r1 + r2]
                    tgt[d] = tgt.get(d, Poly.zero(self.gens)) + p * c
        return DiffOperator(self.gens, self.order, tabs)

    # -- application and composition -----------------------------------------

    def apply(self, f: Func) -> Func:
        """Exact application; linear in f and Leibniz for first-order parts."""
        if f.gens != self.gens:
            raise ValueError("operator and function live on different generators")
        diff_cache: dict = {_zero_d(self.gens): f}

        def deriv(d):
            if d in diff_cache:
                return diff_cache[d]
            for i, k in enumerate(d):
                if k:
                    lower = list(d)
                    lower[i] = k - 1
                    base = deriv(tuple(lower))
                    out = base.diff(self.gens[i])
                    diff_cache[d] = out
                    return out
            raise AssertionError

        total = f.zero_like()
        for r, table in enumerate(self.tables):
            for d, c in table.items():
                g = deriv(d)
                term = g * Func.from_poly(c, f.order)
                total = total + Func(term.series.shift(r), term.profile, term.pi4)
        return total

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self after other, in normal form via the multi-index Leibniz rule."""
        if self.gens != other.gens or self.order != other.order:
            raise ValueError("operator mismatch")
        n = len(self.gens)
        tabs = [{} for _ in range(self.order + 1)]
        for r1, t1 in enumerate(self.tables):
            for r2, t2 in enumerate(other.tables):
                r = r1 + r2
                if r > self.order:
                    continue
                for d1, c1 in t1.items():
                    for d2, c2 in t2.items():
                        for split, dcoeff in _leibniz_splits(d1):
                            pc = c2
                            for i in range(n):
                                for _ in range(d1[i] - split[i]):
                                    pc = pc.diff(self.gens[i])
                            if pc.is_zero():
                                continue
                            d = tuple(split[i] + d2[i] for i in range(n))
                            coeff = c1 * pc * dcoeff
                            tgt = tabs[r]
                            tgt[d] = tgt.get(d, Poly.zero(self.gens)) + coeff
        return DiffOperator(self.gens, self.order, tabs)

    def exp(self) -> "DiffOperator":
        """exp of an operator whose lam-expansion starts at order >= 1."""
        if self.tables[0]:
            raise ValueError("exp needs a lam-graded operator with no order-0 part")
        out = DiffOperator.identity(self.gens, self.order)
        power = DiffOperator.identity(self.gens, self.order)
        for k in range(1, self.order + 1):
            power = power.compose(self)
            if power.is_zero():
                break
            out = out + power * GaussRational(Fraction(1, factorial(k)))
        return out

    # -- adjoints -------------------------------------------------------------

    def formal_adjoint(self, weight) -> "DiffOperator":
        """Adjoint with respect to <phi, psi> = integral of conj(phi) psi weight.

        The weight must be real with Gaussian blocks and a prefactor series
        whose leading term is an invertible positive constant, so that the
        adjoint stays inside polynomial-coefficient operators.
        """
        if not weight.is_real():
            raise ValueError("adjoint requires a real weight")
        rho = weight.prefactor_series(self.order)
        rho_inv = series_inverse(rho)
        gauss = weight.gauss
        out = DiffOperator.zero(self.gens, self.order)
        twisted = {}

        def twisted_partial(i):
            if i not in twisted:
                name = self.gens[i]
                op = DiffOperator.partial(self.gens, name, self.order)
                a = gauss.get(name)
                if a:
                    op = op + DiffOperator.multiplication(
                        Poly.var(self.gens, name) * GaussRational(-2 * a), self.order
                    )
                twisted[i] = op
            return twisted[i]

        for r, table in enumerate(self.tables):
            for d, c in table.items():
                sign = GaussRational(-1 if sum(d) % 2 else 1)
                term = DiffOperator.multiplication(c.conj() * sign, self.order)
                term = term.series_multiply(rho)
                for i, k in enumerate(d):
                    for _ in range(k):
                        term = twisted_partial(i).compose(term)
                out = out + term.lam_shift(r)
        return out.series_multiply(rho_inv)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (
            self.gens == other.gens
            and self.order == other.order
            and self.tables == other.tables
        )

    def __repr__(self):
        parts = []
        for r, table in enumerate(self.tables):
            for d, c in sorted(table.items()):
                ds = "".join(
                    f"d/d{g}" + (f"^{k}" if k > 1 else "")
                    for g, k in zip(self.gens, d)
                    if k
                )
                lam = "" if r == 0 else (f"lam^{r}*" if r > 1 else "lam*")
                parts.append(f"{lam}({c!r}){'*' + ds if ds else ''}")
        return " + ".join(parts) if parts else "0"


def _leibniz_splits(d):
    """All ways to split the multi-index d over (operator, coefficient).

    Yields (kept_on_operator, multinomial coefficient).
    """
    n = len(d)

    def rec(i):
        if i == n:
            yield (), 1
            return
        for rest, coeff in rec(i + 1):
            for k in range(d[i] + 1):
                yield (k,) + rest, coeff * comb(d[i], k)

    yield from rec(0)


def diffop_apply(op: DiffOperator, f: Func) -> Func:
    return op.apply(f)


def diffop_formal_adjoint(op: DiffOperator, weight) -> DiffOperator:
    return op.formal_adjoint(weight)

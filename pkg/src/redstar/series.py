"""Truncated formal series in the deformation parameter lam.

A LambdaSeries holds coefficients 0..K of any ring-like value (Poly,
GaussRational, PiScalar) and all operations are exact modulo lam^(K+1).
The classical limit is coefficient 0.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussRational


class LambdaSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient to infer the ring")
        zero = coeffs[0].ring_zero() if hasattr(coeffs[0], "ring_zero") else GaussRational(0)
        while len(coeffs) < order + 1:
            coeffs.append(zero)
        object.__setattr__(self, "coeffs", tuple(coeffs[: order + 1]))
        object.__setattr__(self, "order", int(order))

    def __setattr__(self, name, value):
        raise AttributeError("LambdaSeries is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def of(value, order: int) -> "LambdaSeries":
        return LambdaSeries([value], order)

    @staticmethod
    def lam_power(value, power: int, order: int) -> "LambdaSeries":
        zero = value.ring_zero() if hasattr(value, "ring_zero") else GaussRational(0)
        coeffs = [zero] * (order + 1)
        if power <= order:
            coeffs[power] = value
        return LambdaSeries(coeffs, order)

    def ring_zero(self):
        c = self.coeffs[0]
        return c.ring_zero() if hasattr(c, "ring_zero") else GaussRational(0)

    def zero_like(self) -> "LambdaSeries":
        return LambdaSeries([self.ring_zero()], self.order)

    # -- basic arithmetic -------------------------------------------------

    def _check(self, other: "LambdaSeries"):
        if self.order != other.order:
            raise ValueError(
                f"mismatched truncation orders {self.order} and {other.order}"
            )

    def __add__(self, other):
        if not isinstance(other, LambdaSeries):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] + other
            return LambdaSeries(coeffs, self.order)
        self._check(other)
        return LambdaSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return LambdaSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, LambdaSeries):
            return self + (-other)
        return self + (-(self.zero_like() + other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Cauchy product truncated at the common order."""
        if not isinstance(other, LambdaSeries):
            return LambdaSeries([c * other for c in self.coeffs], self.order)
        self._check(other)
        zero = self.ring_zero()
        out = [zero for _ in range(self.order + 1)]
        for i, a in enumerate(self.coeffs):
            if hasattr(a, "is_zero") and a.is_zero():
                continue
            for j in range(self.order + 1 - i):
                b = other.coeffs[j]
                if hasattr(b, "is_zero") and b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return LambdaSeries(out, self.order)

    __rmul__ = __mul__

    def shift(self, powers: int) -> "LambdaSeries":
        """Multiply by lam^powers, truncating."""
        zero = self.ring_zero()
        return LambdaSeries([zero] * powers + list(self.coeffs), self.order)

    def map(self, fn) -> "LambdaSeries":
        return LambdaSeries([fn(c) for c in self.coeffs], self.order)

    def conj(self) -> "LambdaSeries":
        return self.map(lambda c: c.conj())

    def truncate(self, order: int) -> "LambdaSeries":
        return LambdaSeries(list(self.coeffs[: order + 1]), order)

    def extend(self, order: int) -> "LambdaSeries":
        if order < self.order:
            return self.truncate(order)
        return LambdaSeries(list(self.coeffs), order)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def classical(self):
        return self.coeffs[0]

    def lowest_order(self):
        for r, c in enumerate(self.coeffs):
            if not c.is_zero():
                return r, c
        return None, None

    def __eq__(self, other):
        if not isinstance(other, LambdaSeries):
            try:
                other = self.zero_like() + other
            except Exception:
                return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        parts = []
        for r, c in enumerate(self.coeffs):
            if hasattr(c, "is_zero") and c.is_zero():
                continue
            if r == 0:
                parts.append(f"{c!r}")
            elif r == 1:
                parts.append(f"({c!r})*lam")
            else:
                parts.append(f"({c!r})*lam^{r}")
        return " + ".join(parts) if parts else "0"


def series_mul(a: LambdaSeries, b: LambdaSeries) -> LambdaSeries:
    """Cauchy product truncated at the common order; commutative for Poly."""
    return a * b


def _leading_constant(a: LambdaSeries):
    """The constant value of the order-zero coefficient, or raise."""
    c0 = a.coeffs[0]
    if isinstance(c0, GaussRational):
        return c0
    if hasattr(c0, "is_constant"):
        if not c0.is_constant():
            raise ValueError("leading term is not a constant")
        return c0.constant_term()
    return c0


def series_inverse(a: LambdaSeries, mul=None) -> LambdaSeries:
    """Multiplicative inverse with respect to mul (default: pointwise).

    Requires the order-zero coefficient to be an invertible constant.  The
    result satisfies mul(a, inv) == 1 exactly modulo lam^(K+1).
    """
    if mul is None:
        mul = series_mul
    c0 = _leading_constant(a)
    if c0.is_zero():
        raise ZeroDivisionError("leading term is zero; series is not invertible")
    c0inv = c0.inverse()
    one = a.zero_like() + GaussRational(1)
    v = a.zero_like() + c0inv
    for r in range(1, a.order + 1):
        defect = one - mul(a, v)
        v = v + LambdaSeries.lam_power(defect.coeffs[r] * c0inv, r, a.order)
    return v


def series_sqrt(a: LambdaSeries, mul=None) -> LambdaSeries:
    """Square root with respect to mul (default: pointwise multiplication).

    The order-zero coefficient must be the square of a positive rational;
    the result v satisfies mul(v, v) == a exactly modulo lam^(K+1).
    """
    if mul is None:
        mul = series_mul
    c0 = _leading_constant(a)
    if not c0.is_real() or c0.re <= 0:
        raise ValueError("leading term must be a positive rational constant")
    root = _rational_sqrt(c0.re)
    if root is None:
        raise ValueError(f"leading term {c0.re} is not the square of a rational")
    v = a.zero_like() + GaussRational(root)
    half_inv = GaussRational(Fraction(1, 2) / root)
    for r in range(1, a.order + 1):
        defect = a - mul(v, v)
        v = v + LambdaSeries.lam_power(defect.coeffs[r] * half_inv, r, a.order)
    return v


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    num = _isqrt_exact(q.numerator)
    den = _isqrt_exact(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None

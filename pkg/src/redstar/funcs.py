"""Damped polynomial functions: the common value type of the engine.

A Func is a truncated lam-series of polynomials together with an optional
Gaussian envelope exp(-sum_c a_c c^2) over named coordinates and an integer
pi-grade (quarter powers of pi) for normalization constants.  Plain
observables are Funcs with empty envelope and grade zero; fiber states and
Gaussian-damped test functions carry envelopes.  All differential operators
act through profile-aware differentiation, so the class is closed under
every operation of the engine.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .scalars import GaussRational, PiScalar
from .series import LambdaSeries


class Func:
    __slots__ = ("gens", "series", "profile", "pi4")

    def __init__(self, series: LambdaSeries, profile=None, pi4: int = 0):
        p0 = series.coeffs[0]
        if not isinstance(p0, Poly):
            raise TypeError("Func wraps a LambdaSeries of Poly")
        object.__setattr__(self, "gens", p0.gens)
        object.__setattr__(self, "series", series)
        prof = {}
        for name, a in (profile or {}).items():
            a = Fraction(a)
            if a != 0:
                if name not in p0.gens:
                    raise ValueError(f"unknown coordinate {name!r} in profile")
                prof[name] = a
        object.__setattr__(self, "profile", dict(sorted(prof.items())))
        object.__setattr__(self, "pi4", int(pi4))

    def __setattr__(self, name, value):
        raise AttributeError("Func is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_poly(p: Poly, order: int, profile=None, pi4: int = 0) -> "Func":
        return Func(LambdaSeries.of(p, order), profile, pi4)

    @staticmethod
    def constant(gens, c, order: int) -> "Func":
        return Func.from_poly(Poly.constant(gens, c), order)

    @staticmethod
    def zero(gens, order: int) -> "Func":
        return Func.from_poly(Poly.zero(gens), order)

    @staticmethod
    def one(gens, order: int) -> "Func":
        return Func.from_poly(Poly.one(gens), order)

    @staticmethod
    def var(gens, name, order: int) -> "Func":
        return Func.from_poly(Poly.var(gens, name), order)

    def zero_like(self) -> "Func":
        return Func.zero(self.gens, self.order)

    def one_like(self) -> "Func":
        return Func.one(self.gens, self.order)

    @property
    def order(self) -> int:
        return self.series.order

    def is_zero(self) -> bool:
        return self.series.is_zero()

    # -- arithmetic -------------------------------------------------------

    def _compatible(self, other: "Func"):
        if self.gens != other.gens:
            raise ValueError("generator mismatch")
        if self.is_zero() or other.is_zero():
            return
        if self.profile != other.profile:
            raise ValueError(
                f"cannot add different envelopes {self.profile} and {other.profile}"
            )
        if self.pi4 != other.pi4:
            raise ValueError(f"cannot add pi-grades {self.pi4}/4 and {other.pi4}/4")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Func.constant(self.gens, other, self.order)
        self._compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Func(self.series + other.series, self.profile, self.pi4)

    __radd__ = __add__

    def __neg__(self):
        return Func(-self.series, self.profile, self.pi4)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Func.constant(self.gens, other, self.order)
        return self + (-other)

    def __mul__(self, other):
        """Pointwise product; envelopes and pi-grades add."""
        if isinstance(other, (int, Fraction, GaussRational)):
            return Func(self.series * other, self.profile, self.pi4)
        if isinstance(other, PiScalar):
            return Func(self.series * other.value, self.profile, self.pi4 + other.pi4)
        if isinstance(other, LambdaSeries):
            return Func(self.series * other, self.profile, self.pi4)
        if not isinstance(other, Func):
            return NotImplemented
        if self.gens != other.gens:
            raise ValueError("generator mismatch")
        prof = dict(self.profile)
        for k, v in other.profile.items():
            prof[k] = prof.get(k, Fraction(0)) + v
        return Func(self.series * other.series, prof, self.pi4 + other.pi4)

    __rmul__ = __mul__

    def conj(self) -> "Func":
        return Func(self.series.conj(), self.profile, self.pi4)

    # -- calculus ----------------------------------------------------------

    def diff(self, name: str) -> "Func":
        """Envelope-aware partial derivative."""
        out = self.series.map(lambda p: p.diff(name))
        a = self.profile.get(name)
        if a:
            c = Poly.var(self.gens, name)
            out = out + self.series.map(lambda p: p * c * GaussRational(-2 * a))
        return Func(out, self.profile, self.pi4)

    def diff_multi(self, names) -> "Func":
        out = self
        for n in names:
            out = out.diff(n)
        return out

    def set_zero(self, names) -> "Func":
        """Restrict by putting the listed coordinates to zero (no envelope there)."""
        for n in names:
            if n in self.profile:
                raise ValueError(f"cannot restrict through the envelope in {n}")
        return Func(self.series.map(lambda p: p.set_zero(names)), self.profile, self.pi4)

    def weight_by_degree(self, names, weight) -> "Func":
        for n in names:
            if n in self.profile:
                raise ValueError("degree weighting across an envelope is undefined")
        return Func(
            self.series.map(lambda p: p.weight_by_degree(names, weight)),
            self.profile,
            self.pi4,
        )

    def depends_on(self, name: str) -> bool:
        return name in self.profile or any(p.depends_on(name) for p in self.series.coeffs)

    def rename(self, mapping: dict, new_gens) -> "Func":
        prof = {mapping.get(k, k): v for k, v in self.profile.items()}
        return Func(
            self.series.map(lambda p: p.rename(mapping, new_gens)), prof, self.pi4
        )

    def embed(self, new_gens) -> "Func":
        return self.rename({}, new_gens)

    def with_profile(self, extra: dict) -> "Func":
        prof = dict(self.profile)
        for k, v in extra.items():
            prof[k] = prof.get(k, Fraction(0)) + Fraction(v)
        return Func(self.series, prof, self.pi4)

    def with_pi4(self, delta: int) -> "Func":
        return Func(self.series, self.profile, self.pi4 + delta)

    def scalar_series(self) -> LambdaSeries:
        """For a Func constant in all coordinates: its PiScalar lam-series."""
        if self.profile:
            raise ValueError("not a scalar: envelope present")
        vals = []
        for p in self.series.coeffs:
            if not p.is_constant():
                raise ValueError("not a scalar: coordinate dependence remains")
            vals.append(PiScalar(p.constant_term(), self.pi4))
        return LambdaSeries(vals, self.order)

    def evaluate(self, point: dict) -> "Func":
        for n in point:
            if n in self.profile:
                raise ValueError("cannot evaluate through the envelope exactly")
        return Func(self.series.map(lambda p: p.evaluate(point)), self.profile, self.pi4)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Func.constant(self.gens, other, self.order)
        if not isinstance(other, Func):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (
            self.gens == other.gens
            and self.profile == other.profile
            and self.pi4 == other.pi4
            and self.series == other.series
        )

    def __hash__(self):
        if self.is_zero():
            return hash("Func.zero")
        return hash((self.gens, self.series, tuple(self.profile.items()), self.pi4))

    def __repr__(self):
        body = repr(self.series)
        if self.profile:
            env = "*".join(f"exp(-{a}*{c}^2)" for c, a in self.profile.items())
            body = f"({body})*{env}"
        if self.pi4:
            body = f"({body})*pi^({self.pi4}/4)"
        return body

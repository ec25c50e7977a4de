"""Multivariate polynomials over named generators with GaussRational coefficients.

Terms are stored sparsely as a map from exponent tuples to coefficients; no
zero coefficient is ever kept, so equality is plain coefficient-wise equality.
Canonical term order for printing and iteration is degrevlex over the fixed
generator order.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussRational


def _degrevlex_key(expo):
    # graded reverse lexicographic: higher total degree first; ties broken by
    # the reversed exponent vector, smaller last-entry wins
    return (sum(expo), tuple(-e for e in reversed(expo)))


class Poly:
    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms=None):
        object.__setattr__(self, "gens", tuple(gens))
        clean = {}
        if terms:
            for expo, coeff in terms.items():
                coeff = GaussRational.coerce(coeff)
                if coeff.is_zero():
                    continue
                expo = tuple(int(e) for e in expo)
                if len(expo) != len(self.gens):
                    raise ValueError("exponent length does not match generators")
                clean[expo] = clean.get(expo, GaussRational(0)) + coeff
                if clean[expo].is_zero():
                    del clean[expo]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(gens, c) -> "Poly":
        gens = tuple(gens)
        return Poly(gens, {(0,) * len(gens): GaussRational.coerce(c)})

    @staticmethod
    def zero(gens) -> "Poly":
        return Poly(gens, {})

    @staticmethod
    def one(gens) -> "Poly":
        return Poly.constant(gens, 1)

    @staticmethod
    def var(gens, name, power: int = 1) -> "Poly":
        gens = tuple(gens)
        idx = gens.index(name)
        expo = [0] * len(gens)
        expo[idx] = power
        return Poly(gens, {tuple(expo): GaussRational(1)})

    def ring_zero(self) -> "Poly":
        return Poly.zero(self.gens)

    def ring_one(self) -> "Poly":
        return Poly.one(self.gens)

    # -- ring operations ----------------------------------------------

    def _check(self, other: "Poly"):
        if self.gens != other.gens:
            raise ValueError(f"generator mismatch: {self.gens} vs {other.gens}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Poly.constant(self.gens, other)
        self._check(other)
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            s = terms.get(expo, GaussRational(0)) + c
            if s.is_zero():
                terms.pop(expo, None)
            else:
                terms[expo] = s
        return Poly(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Poly.constant(self.gens, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            c = GaussRational.coerce(other)
            if c.is_zero():
                return Poly.zero(self.gens)
            return Poly(self.gens, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in out:
                    out[e] = out[e] + c
                else:
                    out[e] = c
        return Poly(self.gens, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.one(self.gens)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus and structure ----------------------------------------

    def diff(self, name: str) -> "Poly":
        idx = self.gens.index(name)
        out = {}
        for expo, c in self.terms.items():
            k = expo[idx]
            if k == 0:
                continue
            e = list(expo)
            e[idx] = k - 1
            out[tuple(e)] = c * k
        return Poly(self.gens, out)

    def conj(self) -> "Poly":
        return Poly(self.gens, {e: c.conj() for e, c in self.terms.items()})

    def set_zero(self, names) -> "Poly":
        """Restrict by setting the listed generators to zero."""
        idxs = [self.gens.index(n) for n in names]
        out = {}
        for expo, c in self.terms.items():
            if any(expo[i] for i in idxs):
                continue
            out[expo] = c
        return Poly(self.gens, out)

    def weight_by_degree(self, names, weight) -> "Poly":
        """Scale each term by weight(d) where d is its total degree in names."""
        idxs = [self.gens.index(n) for n in names]
        out = {}
        for expo, c in self.terms.items():
            d = sum(expo[i] for i in idxs)
            out[expo] = c * weight(d)
        return Poly(self.gens, out)

    def degree_in(self, names) -> int:
        idxs = [self.gens.index(n) for n in names]
        return max((sum(e[i] for i in idxs) for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def depends_on(self, name: str) -> bool:
        idx = self.gens.index(name)
        return any(e[idx] for e in self.terms)

    def rename(self, mapping: dict, new_gens) -> "Poly":
        """Transport onto a new generator tuple; mapping is old name -> new name.

        Unmapped generators keep their name; a generator missing from
        new_gens is dropped, which is only legal if it never occurs.
        """
        new_gens = tuple(new_gens)
        pos = {}
        for i, g in enumerate(self.gens):
            tgt = mapping.get(g, g)
            pos[i] = new_gens.index(tgt) if tgt in new_gens else None
        out = {}
        for expo, c in self.terms.items():
            e = [0] * len(new_gens)
            for i, k in enumerate(expo):
                if k:
                    if pos[i] is None:
                        raise ValueError(
                            f"generator {self.gens[i]!r} occurs but has no target"
                        )
                    e[pos[i]] += k
            key = tuple(e)
            out[key] = out.get(key, GaussRational(0)) + c
        return Poly(new_gens, out)

    def embed(self, new_gens) -> "Poly":
        return self.rename({}, new_gens)

    def evaluate(self, point: dict) -> "Poly":
        """Substitute exact rational values for some generators."""
        idxs = {self.gens.index(n): GaussRational.coerce(v) for n, v in point.items()}
        out = {}
        for expo, c in self.terms.items():
            e = list(expo)
            for i, v in idxs.items():
                c = c * v ** e[i]
                e[i] = 0
            key = tuple(e)
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return Poly(self.gens, out)

    def constant_term(self) -> GaussRational:
        return self.terms.get((0,) * len(self.gens), GaussRational(0))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff_of(self, **powers) -> "Poly":
        """Collect the coefficient polynomial of a product of generator powers."""
        idxs = {self.gens.index(n): p for n, p in powers.items()}
        out = {}
        for expo, c in self.terms.items():
            if all(expo[i] == p for i, p in idxs.items()):
                e = list(expo)
                for i in idxs:
                    e[i] = 0
                out[tuple(e)] = c
        return Poly(self.gens, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _degrevlex_key(kv[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = Poly.constant(self.gens, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self.sorted_terms():
            factors = []
            for g, e in zip(self.gens, expo):
                if e == 1:
                    factors.append(g)
                elif e > 1:
                    factors.append(f"{g}^{e}")
            mono = "*".join(factors)
            cs = repr(c)
            if mono:
                parts.append(f"{cs}*{mono}" if cs != "1" else mono)
            else:
                parts.append(cs)
        return " + ".join(parts)

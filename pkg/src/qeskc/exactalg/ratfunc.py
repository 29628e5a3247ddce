"""Rational functions over the rationals, kept in lowest terms."""

from __future__ import annotations

from fractions import Fraction

from .gcd import poly_gcd
from .poly import MultiPoly, _as_coeff


class RatFunc:
    """``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic in lex order.

    The canonical form makes ``==`` a structural comparison.  Zero is
    stored as ``0/1``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, normalized=False):
        num = MultiPoly.coerce(num)
        den = MultiPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        return cls(MultiPoly.var(name), normalized=True)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return cls(x, normalized=True)
        return cls(MultiPoly.const(x), normalized=True)

    # ---- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return Fraction(self.num.const_value()) / self.den.const_value()

    def __bool__(self):
        return not self.num.is_zero()

    # ---- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        if b.is_const() and d.is_const():
            return RatFunc(a + c, normalized=True)
        if b == d:
            return RatFunc(a + c, b)
        if b.is_const():
            # gcd(a*d + c, d) = gcd(c, d) = 1
            return RatFunc(a * d + c, d, normalized=True)
        if d.is_const():
            return RatFunc(c * b + a, b, normalized=True)
        g = poly_gcd(b, d)
        if g.is_const():
            return RatFunc(a * d + c * b, b * d, normalized=True)._monic()
        bg, dg = b.divexact(g), d.divexact(g)
        n = a * dg + c * bg
        den = bg * d
        g2 = poly_gcd(n, g)
        if not g2.is_const():
            n, den = n.divexact(g2), den.divexact(g2)
        return RatFunc(n, den, normalized=True)._monic()

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc()
            return RatFunc(self.num.scale(other), self.den, normalized=True)
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return RatFunc()
        if b.is_const() and d.is_const():
            return RatFunc(a * c, normalized=True)
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_const():
            a, d = a.divexact(g1), d.divexact(g1)
        if not g2.is_const():
            c, b = c.divexact(g2), b.divexact(g2)
        return RatFunc(a * c, b * d, normalized=True)._monic()

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, normalized=True)._monic()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("integer powers only")
        if n < 0:
            return self.inverse() ** (-n)
        # coprimality is preserved by powers
        return RatFunc(self.num**n, self.den**n, normalized=True)

    def _monic(self) -> "RatFunc":
        lc = self.den.leading_coeff()
        if lc != 1:
            inv = Fraction(1) / lc
            self.num = self.num.scale(inv)
            self.den = self.den.scale(inv)
        return self

    # ---- evaluation and substitution ---------------------------------------
    def evaluate(self, values):
        """Numeric value at ``values``; exact when the inputs are rational."""
        den = self.den.evaluate(values)
        num = self.num.evaluate(values)
        if isinstance(num, (int, Fraction)) and isinstance(den, (int, Fraction)):
            return Fraction(num) / den
        return num / den

    def subs(self, mapping: dict) -> "RatFunc":
        """Substitute rational functions for symbols (``{name: RatFunc}``)."""
        return subs_poly(self.num, mapping) / subs_poly(self.den, mapping)

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    # ---- comparison / display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self == RatFunc.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den.is_const():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _normalize(num: MultiPoly, den: MultiPoly):
    if num.is_zero():
        return MultiPoly(), MultiPoly.const(1)
    if not den.is_const():
        g = poly_gcd(num, den)
        if not g.is_const():
            num, den = num.divexact(g), den.divexact(g)
    lc = den.leading_coeff()
    if lc != 1:
        inv = Fraction(1) / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _coerce_or_none(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x, normalized=True)
    if isinstance(x, (int, Fraction)):
        return RatFunc(MultiPoly.const(_as_coeff(x)), normalized=True)
    return None


def rat_sum(items) -> RatFunc:
    """Sum many rational functions, adding numerators over shared denominators first."""
    groups: dict[MultiPoly, MultiPoly] = {}
    for it in items:
        it = RatFunc.coerce(it)
        if it.is_zero():
            continue
        acc = groups.get(it.den)
        groups[it.den] = it.num if acc is None else acc + it.num
    total = RatFunc()
    for den, num in groups.items():
        if num.is_zero():
            continue
        total = total + RatFunc(num, den)
    return total


def subs_poly(p: MultiPoly, mapping: dict) -> RatFunc:
    from .poly import symbol_index, symbol_name

    idx_map = {symbol_index(n): RatFunc.coerce(v) for n, v in mapping.items()}
    cache: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = idx_map[i] ** e
        return cache[key]

    parts = []
    for m, c in p.terms.items():
        kept = []
        term = RatFunc(MultiPoly.const(c), normalized=True)
        for i, e in enumerate(m):
            if not e:
                continue
            if i in idx_map:
                term = term * power(i, e)
            else:
                kept.append((symbol_name(i), e))
        mono = MultiPoly.const(1)
        for name, e in kept:
            mono = mono * MultiPoly.var(name, e)
        parts.append(term * mono)
    return rat_sum(parts)

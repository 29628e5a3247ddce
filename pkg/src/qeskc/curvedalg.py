"""Expressions sum c[p, s] * r**p * f**s with f = sqrt(1 - k r^2).

Coefficients are :class:`RatFunc`.  Every expression is kept reduced to
the admissible basis

    1/r^2,  f/r,  1/r,  f^s (s <= 1),  r f^s (s <= 1)

using f^2 = 1 - k r^2 and the telescoping expansions of 1/(r f^n).
Anything that cannot be brought into that basis is an error rather than
a silent extension of the basis.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import MultiPoly, RatFunc, rat_sum

_KAPPA = RatFunc.var("k")
_INV_KAPPA = RatFunc(1, MultiPoly.var("k"))


class NonReducible(ValueError):
    pass


def is_admissible(p: int, s: int) -> bool:
    if p == -2:
        return s == 0
    if p == -1:
        return s in (0, 1)
    if p in (0, 1):
        return s <= 1
    return False


def _rewrite(p: int, s: int):
    """One rewrite step for an inadmissible monomial: list of ((p, s), factor, kappa_power)."""
    if p <= -3:
        raise NonReducible(f"r^{p} f^{s} lies outside the closure")
    if p == -2:
        if s == 2:
            return [((-2, 0), 1, 0), ((0, 0), -1, 1)]
        raise NonReducible(f"r^{p} f^{s} lies outside the closure")
    if s >= 2 and p <= 1:
        if p >= 0 and p + 2 >= 2:
            # f^2 -> 1 - k r^2 would produce r^(p+2) f^(s-2) with p+2 >= 2
            raise NonReducible(f"r^{p} f^{s} lies outside the closure")
        return [((p, s - 2), 1, 0), ((p + 2, s - 2), -1, 1)]
    if p >= 2:
        if s < 0:
            return [((p - 2, s), 1, -1), ((p - 2, s + 2), -1, -1)]
        raise NonReducible(f"r^{p} f^{s} lies outside the closure")
    if p == -1 and s < 0:
        n = -s
        if n % 2 == 0:
            out = [((-1, 0), 1, 0)]
            out += [((1, -2 * j), 1, 1) for j in range(1, n // 2 + 1)]
        else:
            out = [((-1, 1), 1, 0)]
            out += [((1, -(2 * j + 1)), 1, 1) for j in range(0, (n - 1) // 2 + 1)]
        return out
    raise NonReducible(f"no rewrite for r^{p} f^{s}")


def reduce_canonical(raw) -> "CurvedExpr":
    """Reduce ``{(p, s): coefficient}`` to the admissible basis."""
    pending: dict[tuple[int, int], list] = {}
    for key, c in raw.items():
        c = RatFunc.coerce(c)
        if not c.is_zero():
            pending.setdefault(tuple(key), []).append(c)
    done: dict[tuple[int, int], list] = {}
    # rewrites never raise the total exponent p + |s| budget indefinitely;
    # processing in order of decreasing "distance" keeps each monomial visited once
    while pending:
        key = max(pending, key=_work_order)
        coeffs = pending.pop(key)
        if is_admissible(*key):
            done.setdefault(key, []).extend(coeffs)
            continue
        c = rat_sum(coeffs)
        if c.is_zero():
            continue
        for new_key, factor, kpow in _rewrite(*key):
            cc = c * factor if factor != 1 else c
            if kpow == 1:
                cc = cc * _KAPPA
            elif kpow == -1:
                cc = cc * _INV_KAPPA
            pending.setdefault(new_key, []).append(cc)
    terms = {}
    for key, coeffs in done.items():
        c = rat_sum(coeffs)
        if not c.is_zero():
            terms[key] = c
    return CurvedExpr._raw(terms)


def _work_order(key):
    p, s = key
    # larger |s| and larger p first: their rewrites only feed smaller keys
    return (abs(p) + abs(s), p, -s)


class CurvedExpr:
    """Immutable reduced expression; build with :meth:`from_terms` or arithmetic."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = reduce_canonical(terms or {}).terms

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def from_terms(cls, terms) -> "CurvedExpr":
        return cls(terms)

    @classmethod
    def const(cls, c) -> "CurvedExpr":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, p: int, s: int, c=1) -> "CurvedExpr":
        return cls({(p, s): c})

    def coefficient_of(self, p: int, s: int) -> RatFunc:
        if not is_admissible(p, s):
            raise ValueError(f"({p}, {s}) is not an admissible monomial")
        return self.terms.get((p, s), RatFunc())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, CurvedExpr):
            other = CurvedExpr.const(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out[key] + c if key in out else c
            if v.is_zero():
                out.pop(key, None)
            else:
                out[key] = v
        return CurvedExpr._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return CurvedExpr._raw({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CurvedExpr):
            other = CurvedExpr.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CurvedExpr):
            return multiply(self, other)
        c = RatFunc.coerce(other)
        if c.is_zero():
            return CurvedExpr._raw({})
        return CurvedExpr._raw({key: v * c for key, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / RatFunc.coerce(other))

    def map_coefficients(self, fn) -> "CurvedExpr":
        return CurvedExpr(dict((key, fn(c)) for key, c in self.terms.items()))

    def subs(self, mapping) -> "CurvedExpr":
        return self.map_coefficients(lambda c: c.subs(mapping))

    def evaluate(self, values, r, kappa=None):
        """Numeric value at radius ``r``; ``values`` binds the coefficient symbols.

        ``kappa`` defaults to ``values['k']``.  With rational inputs and a
        rational ``f`` the result is exact.
        """
        if kappa is None:
            kappa = values["k"]
        f2 = 1 - kappa * r * r
        f = _exact_sqrt(f2)
        total = 0
        for (p, s), c in self.terms.items():
            total = total + c.evaluate(values) * r**p * f**s
        return total

    def __eq__(self, other):
        if isinstance(other, CurvedExpr):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{c}]*{_mono_str(p, s)}" for (p, s), c in sorted(self.terms.items()))

    __repr__ = __str__


def _exact_sqrt(x):
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        from math import isqrt

        n, d = x.numerator, x.denominator
        rn, rd = isqrt(n), isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return float(x) ** 0.5
    return x**0.5


def _mono_str(p, s):
    parts = []
    if p:
        parts.append("r" if p == 1 else f"r^{p}")
    if s:
        parts.append("f" if s == 1 else f"f^{s}")
    return "*".join(parts) or "1"


def multiply(a: CurvedExpr, b: CurvedExpr) -> CurvedExpr:
    raw: dict = {}
    for (pa, sa), ca in a.terms.items():
        for (pb, sb), cb in b.terms.items():
            raw.setdefault((pa + pb, sa + sb), []).append(ca * cb)
    return reduce_canonical({key: rat_sum(v) for key, v in raw.items()})


def apply_f_ddr(a: CurvedExpr) -> CurvedExpr:
    """``f * d/dr`` applied termwise: r^p f^s -> p r^(p-1) f^(s+1) - k s r^(p+1) f^(s-1)."""
    raw: dict = {}
    for (p, s), c in a.terms.items():
        if p:
            raw.setdefault((p - 1, s + 1), []).append(c * p)
        if s:
            raw.setdefault((p + 1, s - 1), []).append(c * _KAPPA * (-s))
    return reduce_canonical({key: rat_sum(v) for key, v in raw.items()})


def coefficient_of(a: CurvedExpr, p: int, s: int) -> RatFunc:
    return a.coefficient_of(p, s)


# handy building blocks
ONE = CurvedExpr.const(1)
F_OVER_R = CurvedExpr.monomial(-1, 1)
R_OVER_F = CurvedExpr.monomial(1, -1)
INV_R2 = CurvedExpr.monomial(-2, 0)


def r_over_f_pow(n: int) -> CurvedExpr:
    """r / f^n."""
    return CurvedExpr.monomial(1, -n)


def inv_f_pow(n: int) -> CurvedExpr:
    """1 / f^n."""
    return CurvedExpr.monomial(0, -n)

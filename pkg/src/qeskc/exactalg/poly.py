"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are exponent tuples indexed by a process-wide symbol registry,
with trailing zeros stripped so that plain tuple comparison is the
lexicographic order q > k > L > (later symbols in registration order).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from numbers import Rational as _RationalABC

Rational = Fraction

_SYMBOLS: list[str] = []
_INDEX: dict[str, int] = {}

# Fixed registration order keeps monomial indices stable across processes.
_CORE_SYMBOLS = ("q", "k", "L", "Q", "B1", "B2", "B3", "B4", "s", "w")


class NotDivisible(ArithmeticError):
    pass


def symbol_index(name: str) -> int:
    """Index of ``name`` in the registry, registering it on first use."""
    idx = _INDEX.get(name)
    if idx is None:
        idx = len(_SYMBOLS)
        _SYMBOLS.append(name)
        _INDEX[name] = idx
    return idx


def symbol_name(idx: int) -> str:
    return _SYMBOLS[idx]


for _name in _CORE_SYMBOLS:
    symbol_index(_name)


def _strip(t):
    n = len(t)
    while n and t[n - 1] == 0:
        n -= 1
    return t[:n] if n != len(t) else t


def mono_mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    return tuple([x + y for x, y in zip(a, b)]) + a[len(b):]


def mono_divides(b, a):
    """True if monomial ``b`` divides monomial ``a``."""
    if len(b) > len(a):
        return False
    for x, y in zip(b, a):
        if x > y:
            return False
    return True


def mono_div(a, b):
    out = list(a)
    for i, y in enumerate(b):
        out[i] -= y
    return _strip(tuple(out))


def mono_gcd(a, b):
    return _strip(tuple(min(x, y) for x, y in zip(a, b)))


def _as_coeff(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, _RationalABC):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"non-rational coefficient {c!r}")


def _cdiv(a, b):
    if b == 1:
        return a
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _as_coeff(Fraction(a) / b)


class MultiPoly:
    """Immutable sparse polynomial ``{exponent tuple: rational}``.

    Zero coefficients are never stored, so ``MultiPoly({})`` is the zero
    polynomial and structural dict equality is polynomial equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {_strip(tuple(m)): _as_coeff(c) for m, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = _as_coeff(c)
        return cls._raw({(): c} if c != 0 else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        idx = symbol_index(name)
        mono = (0,) * idx + (power,)
        return cls._raw({_strip(mono): 1})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return cls.const(x)

    # ---- predicates -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def const_value(self):
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def __bool__(self):
        return bool(self.terms)

    # ---- structure ----------------------------------------------------
    def leading_monomial(self):
        return max(self.terms)

    def leading_coeff(self):
        return self.terms[max(self.terms)] if self.terms else 0

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(i)
        return out

    def degree(self, var) -> int:
        i = symbol_index(var) if isinstance(var, str) else var
        if not self.terms:
            return -1
        return max((m[i] if i < len(m) else 0) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coeffs_in(self, var) -> dict[int, "MultiPoly"]:
        """View as a univariate polynomial in ``var``: ``{degree: coefficient}``."""
        i = symbol_index(var) if isinstance(var, str) else var
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = m[i] if i < len(m) else 0
            if e:
                m = list(m)
                m[i] = 0
                m = _strip(tuple(m))
            out.setdefault(e, {})[m] = c
        return {e: MultiPoly._raw(t) for e, t in out.items()}

    @classmethod
    def from_coeffs_in(cls, var, coeffs: dict[int, "MultiPoly"]) -> "MultiPoly":
        i = symbol_index(var) if isinstance(var, str) else var
        out: dict = {}
        for e, p in coeffs.items():
            shift = _strip((0,) * i + (e,))
            for m, c in p.terms.items():
                key = mono_mul(m, shift)
                v = out.get(key, 0) + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return cls._raw(out)

    # ---- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _as_coeff(c)
        if c == 0:
            return MultiPoly._raw({})
        if c == 1:
            return self
        return MultiPoly._raw({m: _as_coeff(v * c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw({})
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                key = mono_mul(ma, mb)
                out[key] = get(key, 0) + ca * cb
        return MultiPoly._raw({m: _as_coeff(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod_mono_order(self, other: "MultiPoly"):
        """Greedy division by leading terms; returns ``(quotient, remainder)``.

        The remainder is zero exactly when ``other`` divides ``self``.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lt_b = max(other.terms)
        lc_b = other.terms[lt_b]
        rest_b = [(m, c) for m, c in other.terms.items() if m != lt_b]
        r = dict(self.terms)
        quo: dict = {}
        rem: dict = {}
        while r:
            lt = max(r)
            c = r.pop(lt)
            if not mono_divides(lt_b, lt):
                rem[lt] = c
                continue
            m = mono_div(lt, lt_b)
            qc = _cdiv(c, lc_b)
            quo[m] = qc
            for mb, cb in rest_b:
                key = mono_mul(m, mb)
                v = r.get(key, 0) - qc * cb
                if v:
                    r[key] = _as_coeff(v)
                else:
                    r.pop(key, None)
        return MultiPoly._raw(quo), MultiPoly._raw(rem)

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises :class:`NotDivisible` if there is a remainder."""
        if other.is_const():
            c = other.const_value()
            if c == 0:
                raise ZeroDivisionError("division by zero polynomial")
            return self.scale(Fraction(1) / c)
        if self.is_zero():
            return self
        lt_b = max(other.terms)
        lc_b = other.terms[lt_b]
        rest_b = [(m, c) for m, c in other.terms.items() if m != lt_b]
        r = dict(self.terms)
        quo: dict = {}
        while r:
            lt = max(r)
            if not mono_divides(lt_b, lt):
                raise NotDivisible("polynomial division leaves a remainder")
            c = r.pop(lt)
            m = mono_div(lt, lt_b)
            qc = _cdiv(c, lc_b)
            quo[m] = qc
            for mb, cb in rest_b:
                key = mono_mul(m, mb)
                v = r.get(key, 0) - qc * cb
                if v:
                    r[key] = _as_coeff(v)
                else:
                    r.pop(key, None)
        return MultiPoly._raw(quo)

    def divides(self, other: "MultiPoly") -> bool:
        """True if ``self`` divides ``other`` exactly."""
        try:
            other.divexact(self)
        except NotDivisible:
            return False
        return True

    # ---- normalization helpers -------------------------------------------
    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        num = 0
        den = 1
        for c in self.terms.values():
            c = Fraction(c)
            num = igcd(num, c.numerator)
            den = den * c.denominator // igcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def primitive(self) -> "MultiPoly":
        """Integer-coefficient associate with coprime coefficients and positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_coeff() < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        return self.scale(Fraction(1) / self.leading_coeff())

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # ---- evaluation ---------------------------------------------------------
    def evaluate(self, values):
        """Evaluate at ``values`` (``{name: number}``); all present symbols must be bound."""
        if not self.terms:
            return 0
        vals = {}
        for i in self.variables():
            name = symbol_name(i)
            if name not in values:
                raise KeyError(f"no value for symbol {name!r}")
            vals[i] = values[name]
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = t * vals[i] ** e
            total = total + t
        return total

    def partial_eval(self, var, value) -> "MultiPoly":
        """Substitute a rational number for one symbol."""
        i = symbol_index(var) if isinstance(var, str) else var
        out: dict = {}
        for e, p in self.coeffs_in(i).items():
            for m, c in p.terms.items():
                v = out.get(m, 0) + c * Fraction(value) ** e
                if v:
                    out[m] = _as_coeff(v)
                else:
                    out.pop(m, None)
        return MultiPoly._raw(out)

    # ---- comparison / display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = monomial_str(m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self})"


def monomial_str(m) -> str:
    out = []
    for i, e in enumerate(m):
        if e == 1:
            out.append(symbol_name(i))
        elif e:
            out.append(f"{symbol_name(i)}^{e}")
    return "*".join(out)


def parse_monomial(text: str):
    """Inverse of :func:`monomial_str` (``"q^2*k"`` -> exponent tuple)."""
    if not text:
        return ()
    exps: dict[int, int] = {}
    for factor in text.split("*"):
        name, _, power = factor.partition("^")
        idx = symbol_index(name)
        exps[idx] = exps.get(idx, 0) + (int(power) if power else 1)
    mono = [0] * (max(exps) + 1)
    for i, e in exps.items():
        mono[i] = e
    return _strip(tuple(mono))

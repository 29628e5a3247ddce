"""Detection of factors ``q^2 + c*k`` (c > 0 rational) by trial division."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .poly import MultiPoly, NotDivisible, symbol_index

_Q = symbol_index("q")
_K = symbol_index("k")


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _even_odd_parts(p: MultiPoly, kval: int):
    """Split ``p(q, kval)`` into ``E(t) + q*O(t)`` with ``t = q^2``; integer coefficient lists."""
    u = p.partial_eval(_K, kval)
    ev: dict[int, Fraction] = {}
    od: dict[int, Fraction] = {}
    for e, c in u.coeffs_in(_Q).items():
        val = Fraction(c.const_value())
        (ev if e % 2 == 0 else od)[e // 2] = val
    return ev, od


def _positive_root_candidates(coeffs: dict[int, Fraction]) -> list[Fraction]:
    """Candidates c > 0 with ``P(-c) = 0`` by the rational root theorem."""
    if not coeffs:
        return []
    lo = min(coeffs)
    den = 1
    for v in coeffs.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {e - lo: int(v * den) for e, v in coeffs.items()}
    lead = ints[max(ints)]
    const = ints.get(0, 0)
    if const == 0 or max(ints) == 0:
        return []
    out = []
    for a in _divisors(const):
        for b in _divisors(lead):
            c = Fraction(a, b)
            t = -c
            if sum(v * t**e for e, v in ints.items()) == 0 and c not in out:
                out.append(c)
    return sorted(out)


def factor_shifted_quadratics(p: MultiPoly):
    """Extract every factor ``q^2 + c*k`` with rational ``c > 0``.

    Returns ``(factors, remainder)`` where ``factors`` is a list of
    ``(c, multiplicity)`` sorted by ``c`` and
    ``prod((q^2 + c*k)^mult) * remainder == p`` exactly.
    """
    if not p.variables() <= {_Q, _K}:
        raise ValueError("factor_shifted_quadratics expects a polynomial in q and k only")
    if p.is_zero():
        return [], p
    q2 = MultiPoly.var("q", 2)
    kk = MultiPoly.var("k")
    candidates: list[Fraction] = []
    for kval in (1, 2, 3):
        ev, od = _even_odd_parts(p, kval)
        if not ev and not od:
            continue
        src = ev if ev else od
        for r in _positive_root_candidates(src):
            c = r / kval
            if c not in candidates:
                candidates.append(c)
        break
    factors = []
    rem = p
    for c in sorted(candidates):
        fac = q2 + kk.scale(c)
        mult = 0
        while True:
            try:
                rem_next = rem.divexact(fac)
            except NotDivisible:
                break
            rem = rem_next
            mult += 1
        if mult:
            factors.append((c, mult))
    return factors, rem

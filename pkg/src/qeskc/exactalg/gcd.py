"""Multivariate polynomial GCD over the rationals.

Two independent exact methods are provided:

* :func:`heu_gcd` -- heuristic GCD (evaluation at a large integer, integer
  GCD, balanced-radix interpolation, trial division), recursive in the
  number of variables.  Fast on the dense low-degree inputs seen here.
* :func:`prs_gcd` -- recursive subresultant polynomial remainder sequence.
  Slower but unconditional; used as fallback and as a test oracle.

Both return the integer-primitive associate with positive leading
coefficient, so results of the two are directly comparable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

from .poly import MultiPoly, NotDivisible, _strip, mono_gcd


class HeuristicGCDFailed(ArithmeticError):
    pass


def _integral(p: MultiPoly) -> MultiPoly:
    """Scale to integer coefficients with unit content (sign kept)."""
    if p.is_zero():
        return p
    c = p.content()
    return MultiPoly._raw({m: int(v / c) for m, v in p.terms.items()})


def _int_content(terms) -> int:
    g = 0
    for c in terms.values():
        g = igcd(g, c)
        if g == 1:
            return 1
    return g


def _normalize(p: MultiPoly) -> MultiPoly:
    return p.primitive()


def _monomial_gcd(mono_poly: MultiPoly, other: MultiPoly) -> MultiPoly:
    (m,) = mono_poly.terms
    for mo in other.terms:
        m = mono_gcd(m, mo)
        if not m:
            break
    return MultiPoly._raw({m: 1})


def _trivial_gcd(a: MultiPoly, b: MultiPoly):
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    if a.is_const() or b.is_const():
        return MultiPoly.const(1)
    if a.is_monomial():
        return _monomial_gcd(a, b)
    if b.is_monomial():
        return _monomial_gcd(b, a)
    if a == b:
        return _normalize(a)
    return None


# ---------------------------------------------------------------------------
# heuristic GCD


def _eval_int(terms, var, xi):
    out: dict = {}
    pw = {}
    for m, c in terms.items():
        e = m[var] if var < len(m) else 0
        if e:
            p = pw.get(e)
            if p is None:
                p = pw[e] = xi**e
            c = c * p
            m = list(m)
            m[var] = 0
            m = _strip(tuple(m))
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _interpolate(terms, var, xi):
    out: dict = {}
    half = xi // 2
    e = 0
    g = dict(terms)
    while g:
        nxt: dict = {}
        for m, c in g.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                key = list(m) + [0] * (var + 1 - len(m))
                key[var] = e
                out[_strip(tuple(key))] = r
            rest = (c - r) // xi
            if rest:
                nxt[m] = rest
        g = nxt
        e += 1
    return out


def _heu(a, b, depth=0):
    """GCD of integer-coefficient term dicts; raises on heuristic failure."""
    if not a:
        return b if (not b or max(b.items())[1] > 0) else {m: -c for m, c in b.items()}
    if not b:
        return a if max(a.items())[1] > 0 else {m: -c for m, c in a.items()}
    ca, cb = _int_content(a), _int_content(b)
    cont = igcd(ca, cb)
    vars_ = set()
    for t in (a, b):
        for m in t:
            for i, e in enumerate(m):
                if e:
                    vars_.add(i)
    if not vars_:
        return {(): cont}
    if ca != 1:
        a = {m: c // ca for m, c in a.items()}
    if cb != 1:
        b = {m: c // cb for m, c in b.items()}
    var = max(vars_)
    na = max(abs(c) for c in a.values())
    nb = max(abs(c) for c in b.values())
    xi = 2 * min(na, nb) + 29
    pa, pb = MultiPoly._raw(a), MultiPoly._raw(b)
    for _ in range(6):
        ea, eb = _eval_int(a, var, xi), _eval_int(b, var, xi)
        if ea and eb:
            g = _heu(ea, eb, depth + 1)
            G = _interpolate(g, var, xi)
            if G:
                gc = _int_content(G)
                if gc != 1:
                    G = {m: c // gc for m, c in G.items()}
                if max(G.items())[1] < 0:
                    G = {m: -c for m, c in G.items()}
                Gp = MultiPoly._raw(G)
                try:
                    pa.divexact(Gp)
                    pb.divexact(Gp)
                except NotDivisible:
                    pass
                else:
                    if cont != 1:
                        G = {m: c * cont for m, c in G.items()}
                    return G
        xi = xi * 73794 // 27011
    raise HeuristicGCDFailed("heuristic gcd did not converge")


def heu_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    t = _trivial_gcd(a, b)
    if t is not None:
        return t
    g = _heu(_integral(a).terms, _integral(b).terms)
    return _normalize(MultiPoly._raw(g))


# ---------------------------------------------------------------------------
# subresultant PRS


def _content_in(p: MultiPoly, var: int) -> MultiPoly:
    g = MultiPoly()
    for c in p.coeffs_in(var).values():
        g = prs_gcd(g, c)
        if g.is_const():
            return MultiPoly.const(1)
    return g


def _prem(a: MultiPoly, b: MultiPoly, var: int) -> MultiPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, in ``var``."""
    bc = b.coeffs_in(var)
    db = max(bc)
    lb = bc[db]
    r = a
    e = a.degree(var) - db + 1
    while not r.is_zero():
        rc = r.coeffs_in(var)
        dr = max(rc)
        if dr < db:
            break
        shift = MultiPoly.from_coeffs_in(var, {dr - db: rc[dr]})
        r = r * lb - shift * b
        e -= 1
    return r * lb**e if e > 0 else r


def _leading_in(p: MultiPoly, var: int) -> MultiPoly:
    c = p.coeffs_in(var)
    return c[max(c)]


def prs_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Recursive gcd via the subresultant remainder sequence in the highest variable."""
    t = _trivial_gcd(a, b)
    if t is not None:
        return t
    var = max(a.variables() | b.variables())
    if var not in a.variables():
        return _normalize(prs_gcd(a, _content_in(b, var)))
    if var not in b.variables():
        return _normalize(prs_gcd(_content_in(a, var), b))
    ca, cb = _content_in(a, var), _content_in(b, var)
    c = prs_gcd(ca, cb)
    A, B = a.divexact(ca), b.divexact(cb)
    if A.degree(var) < B.degree(var):
        A, B = B, A
    g = MultiPoly.const(1)
    h = MultiPoly.const(1)
    while True:
        delta = A.degree(var) - B.degree(var)
        R = _prem(A, B, var)
        if R.is_zero():
            break
        if R.degree(var) == 0:
            B = MultiPoly.const(1)
            break
        A, B = B, R.divexact(g * h**delta)
        g = _leading_in(A, var)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).divexact(h ** (delta - 1))
    G = B if B.is_const() else B.divexact(_content_in(B, var))
    return _normalize(c * G)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor, integer-primitive with positive leading coefficient.

    ``poly_gcd(0, 0)`` is the zero polynomial.
    """
    try:
        return heu_gcd(a, b)
    except HeuristicGCDFailed:
        return prs_gcd(a, b)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qeskc.exactalg import (
    MultiPoly,
    NotDivisible,
    RatFunc,
    SingularSystem,
    factor_shifted_quadratics,
    heu_gcd,
    parse_monomial,
    poly_gcd,
    prs_gcd,
    residual,
    solve_linear_exact,
)

Q = MultiPoly.var("q")
K = MultiPoly.var("k")
LL = MultiPoly.var("L")


def P(text):
    """Tiny parser for test literals like '3*q^2*k - k'."""
    out = MultiPoly()
    for chunk in text.replace("-", "+-").split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = -1 if chunk.startswith("-") else 1
        chunk = chunk.lstrip("-").strip()
        coeff, names = Fraction(1), []
        for f in chunk.split("*"):
            if f.replace("/", "").isdigit():
                coeff *= Fraction(f)
            else:
                names.append(f)
        mono = parse_monomial("*".join(names)) if names else ()
        out = out + MultiPoly({mono: sign * coeff})
    return out


monos = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(monos, st.integers(-5, 5), max_size=5).map(
    lambda d: MultiPoly({m: c for m, c in d.items() if c})
)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


# --- Rational / MultiPoly ---------------------------------------------------


def test_rational_is_reduced():
    x = Fraction(6, -4)
    assert (x.numerator, x.denominator) == (-3, 2)


def test_no_zero_terms_stored():
    p = Q + K - Q
    assert p == K
    assert all(c != 0 for c in p.terms.values())


def test_lex_order_q_then_k_then_L():
    p = K**3 + Q + LL**5
    assert p.leading_monomial() == parse_monomial("q")


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly()


@given(polys, nonzero_polys)
@settings(max_examples=60, deadline=None)
def test_divexact_roundtrip(a, b):
    assert (a * b).divexact(b) == a


def test_divexact_raises():
    with pytest.raises(NotDivisible):
        (Q + 1).divexact(Q + K)


def test_evaluate():
    p = P("q^2*k + 3*L")
    assert p.evaluate({"q": 2, "k": Fraction(1, 2), "L": 1}) == 5


# --- gcd --------------------------------------------------------------------


def test_gcd_common_square_factor():
    d = P("q^2 + 3*k")
    assert poly_gcd(d * d, d * Q) == d


def test_gcd_distinct_shifted_quadratics():
    assert poly_gcd(P("q^2+3*k"), P("q^2+10*k")) == MultiPoly.const(1)


def test_gcd_zero_zero():
    assert poly_gcd(MultiPoly(), MultiPoly()).is_zero()


def test_gcd_m3_pair_over_product_denominator():
    # a2 + a3 for m = 3 formed over the product of the two denominators
    D = P("q^2 + 10*k")
    num = P("6*k*q") * D + P("6*k") * D
    assert poly_gcd(num, D * D) == D


def test_gcd_m3_product_is_coprime():
    # a2 * a3 for m = 3: numerator 36 k^2 q, denominator D^2 share nothing
    D = P("q^2 + 10*k")
    assert poly_gcd(P("36*k^2*q"), D * D) == MultiPoly.const(1)


@given(nonzero_polys, nonzero_polys, nonzero_polys)
@settings(max_examples=40, deadline=None)
def test_gcd_divides_and_methods_agree(a, b, c):
    x, y = a * c, b * c
    g = poly_gcd(x, y)
    assert (x.divexact(g) * g) == x
    assert (y.divexact(g) * g) == y
    g.divexact(c)  # the planted common factor survives
    assert heu_gcd(x, y) == prs_gcd(x, y)


def test_gcd_positive_leading_coefficient():
    g = poly_gcd(-(Q + K) * 2, (Q + K) * LL)
    assert g.leading_coeff() > 0


# --- RatFunc ----------------------------------------------------------------


@given(polys, nonzero_polys)
@settings(max_examples=60, deadline=None)
def test_normalize_times_den(a, b):
    r = RatFunc(a, b)
    assert r * RatFunc(b) - RatFunc(a) == RatFunc()
    assert poly_gcd(r.num, r.den) == MultiPoly.const(1) or r.num.is_zero()
    # sign convention: leading coefficient of the denominator is positive
    assert r.den.leading_coeff() > 0


def test_ratfunc_cancels():
    r = RatFunc(P("q^2 - k^2"), P("q - k"))
    assert r == RatFunc(P("q + k"))


def test_ratfunc_field_ops():
    x = RatFunc(Q + 1, K)
    assert x / x == RatFunc.coerce(1)
    assert (x**-2) * x**2 == RatFunc.coerce(1)


def test_ratfunc_subs():
    x = RatFunc(Q, K)
    y = x.subs({"q": RatFunc(K * K)})
    assert y == RatFunc(K)


# --- linear solver ---------------------------------------------------------


def test_identity_system():
    one, zero = MultiPoly.const(1), MultiPoly()
    x = solve_linear_exact([[one, zero], [zero, one]], [Q, K])
    assert x == [RatFunc(Q), RatFunc(K)]


def test_m1_system():
    x = solve_linear_exact([[2, -1], [Q, -Q]], [1, 0])
    assert x == [RatFunc.coerce(1), RatFunc.coerce(1)]


def test_m4_system_denominator():
    from qeskc.gfm import build_system

    A, rhs = build_system(4)
    x = solve_linear_exact(A, rhs)
    D = P("q^4 + 22*q^2*k + 45*k^2")
    assert all(v.den == D for v in x)


def test_singular_system():
    with pytest.raises(SingularSystem):
        solve_linear_exact([[Q, K], [Q * 2, K * 2]], [1, 0])


def test_row_swap_needed():
    x = solve_linear_exact([[0, 1], [1, 0]], [Q, K])
    assert x == [RatFunc(K), RatFunc(Q)]


@given(st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_random_4x4_zero_residual(entries, b):
    A = [entries[4 * i : 4 * i + 4] for i in range(4)]
    det = _int_det(A)
    if det == 0:
        with pytest.raises(SingularSystem):
            solve_linear_exact(A, b)
        return
    x = solve_linear_exact(A, b)
    assert all(r.is_zero() for r in residual(A, x, b))


def _int_det(A):
    from itertools import permutations

    n = len(A)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= A[i][perm[i]]
        total += sign * prod
    return total


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
@settings(max_examples=30, deadline=None)
def test_random_symbolic_3x3_zero_residual(coeffs):
    # entries mix q, k, L so elimination has real polynomial work to do
    base = [Q, K, LL, Q + K, K - LL, Q * LL, MultiPoly.const(1), Q * Q, K + 2]
    A = [[base[3 * i + j] + coeffs[3 * i + j] for j in range(3)] for i in range(3)]
    rhs = [Q, K, LL]
    try:
        x = solve_linear_exact(A, rhs)
    except SingularSystem:
        return
    assert all(r.is_zero() for r in residual(A, x, rhs))


# --- shifted quadratic factors ---------------------------------------------


def test_factor_built_product():
    p = P("q^2 + 4*k") * P("q^2 + 16*k")
    facs, rem = factor_shifted_quadratics(p)
    assert facs == [(4, 1), (16, 1)]
    assert rem == MultiPoly.const(1)


def test_factor_m5_a0_numerator():
    from qeskc.gfm import solve_coeffs

    facs, rem = factor_shifted_quadratics(solve_coeffs(5).a[0].num)
    assert [c for c, _ in facs] == [4, 16]
    assert rem.is_const()


def test_factor_m6_a0_numerator():
    from qeskc.gfm import solve_coeffs

    facs, rem = factor_shifted_quadratics(solve_coeffs(6).a[0].num)
    assert [c for c, _ in facs] == [1, 9, 25]
    assert rem.is_const()


def test_factor_reconstructs_and_handles_multiplicity():
    p = P("q^2 + 3*k") ** 2 * P("q^2 + 1/2*k") * P("q + k")
    facs, rem = factor_shifted_quadratics(p)
    assert (3, 2) in facs and (Fraction(1, 2), 1) in facs
    prod = rem
    for c, mult in facs:
        prod = prod * (Q * Q + K.scale(c)) ** mult
    assert prod == p


def test_factor_none_found():
    p = P("q^2 - 4*k")
    facs, rem = factor_shifted_quadratics(p)
    assert facs == [] and rem == p


def test_factor_rejects_other_symbols():
    with pytest.raises(ValueError):
        factor_shifted_quadratics(Q + LL)

"""Generating-function construction of the QES extended Kepler-Coulomb family.

For family member ``m`` the pair

    W+ = (2L+3) ( -f/r + q a0 + k sum a_{2j+1} r/f^(2j+1) + sum a_{2j} / f^(2j) )
    W- = -f/r - q + m k r/f

must satisfy ``f W+' = W+ W- + E1 - E0`` with
``E1 - E0 = (2L+3) a0 (q^2 + (m+1)^2 k)``.  Matching coefficients gives a
linear system for ``a0..am``; everything else (superpotentials,
potential, energies, the two known eigenfunctions) follows from its
solution.  ``q`` is the reduced Coulomb strength Q / (2 (L+1)(L+2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .curvedalg import (
    F_OVER_R,
    INV_R2,
    ONE,
    R_OVER_F,
    CurvedExpr,
    apply_f_ddr,
    inv_f_pow,
    is_admissible,
    r_over_f_pow,
)
from .exactalg import MultiPoly, RatFunc, factor_shifted_quadratics, rat_sum, solve_linear_exact

q = RatFunc.var("q")
k = RatFunc.var("k")
L = RatFunc.var("L")
Q_OF_CALQ = 2 * (L + 1) * (L + 2) * q

_qp = MultiPoly.var("q")
_kp = MultiPoly.var("k")


class BadCount(ValueError):
    pass


class StructureMismatch(ValueError):
    pass


class ConsistencyFailure(ValueError):
    pass


@dataclass(frozen=True)
class CoeffSolution:
    m: int
    a: tuple  # RatFunc a_0 .. a_m in (q, k)

    def __post_init__(self):
        if len(self.a) != self.m + 1:
            raise ValueError("need m+1 coefficients")
        if self.a[self.m].is_zero():
            raise ValueError("a_m must be nonzero")


@dataclass
class PotentialSpec:
    m: int
    angular: RatFunc  # coefficient of 1/r^2, L(L+1)
    Q: RatFunc  # Coulomb strength
    B: list  # B_1 .. B_2m
    E0: RatFunc
    E1: RatFunc

    def curved(self) -> CurvedExpr:
        """The potential as a curved expression."""
        terms = {(-2, 0): self.angular, (-1, 1): -self.Q}
        for j in range(1, self.m + 1):
            terms[(1, -(2 * j - 1))] = k * self.B[2 * j - 2]
            terms[(0, -2 * j)] = k * self.B[2 * j - 1]
        return CurvedExpr(terms)


@dataclass
class WaveDescriptor:
    """Closed-form eigenfunction

        psi = prefactor(r) * r**r_exp * f**f_exp
              * exp( arcsin_coeff * arcsin(sqrt(k) r) / sqrt(k)
                     + sum_j inv_f_even[j] / f^(2j) + sum_j r_f_odd[j] * r / f^(2j-1) )

    ``arcsin_coeff`` is stored without the 1/sqrt(k) so that it stays rational.
    """

    r_exp: RatFunc
    f_exp: RatFunc
    arcsin_coeff: RatFunc
    inv_f_even: dict = field(default_factory=dict)
    r_f_odd: dict = field(default_factory=dict)
    prefactor: CurvedExpr | None = None


@dataclass
class ConjectureReport:
    m: int
    a0_factors: list
    b: list
    c: dict
    clauses: dict

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())


# ---------------------------------------------------------------------------
# linear system


def build_system(m: int):
    """Matrix ``A`` (rows of MultiPoly) and ``rhs`` for unknowns ``a0..am``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = m + 1
    zero = MultiPoly()
    rows, rhs = [], []

    def row():
        return [zero] * n

    # constant term
    r = row()
    r[0] = MultiPoly.const(m + 1)
    r[1] = MultiPoly.const(-1)
    rows.append(r)
    rhs.append(MultiPoly.const(1))

    # r/f term
    r = row()
    r[0] = _qp * m
    r[1] = r[1] - _qp
    for j in range(1, m // 2 + 1):
        r[2 * j] = r[2 * j] - 1
    rows.append(r)
    rhs.append(zero)

    # r/f^(2j+1) terms
    for kk in range(1, (m - 1) // 2 + 1):
        r = row()
        r[2 * kk] = MultiPoly.const(m - 2 * kk)
        r[2 * kk + 1] = r[2 * kk + 1] - _qp
        for ll in range(kk + 1, m // 2 + 1):
            r[2 * ll] = r[2 * ll] - 1
        rows.append(r)
        rhs.append(zero)

    # 1/f^(2j) terms
    for kk in range(1, m // 2):
        r = row()
        r[2 * kk - 1] = _kp * (m + 1 - 2 * kk)
        r[2 * kk] = r[2 * kk] - _qp
        r[2 * kk + 1] = r[2 * kk + 1] - _kp * (m + 1 - 2 * kk)
        rows.append(r)
        rhs.append(zero)

    # highest power; references a_{-1} when m = 1, where it is dropped
    if m >= 2:
        r = row()
        if m % 2:
            r[m - 2] = r[m - 2] + _kp * 2
            r[m - 1] = r[m - 1] - _qp
            r[m] = r[m] - _kp * 2
        else:
            r[m - 1] = r[m - 1] + _kp
            r[m] = r[m] - _qp
        rows.append(r)
        rhs.append(zero)

    if len(rows) != n:
        raise BadCount(f"assembled {len(rows)} equations for {n} unknowns")
    return rows, rhs


def redundant_residual(m: int, a) -> RatFunc:
    """Residual of the f/r balance q - q a0 - sum a_{2j}, implied by the system."""
    return q - q * a[0] - rat_sum(a[2 * j] for j in range(1, m // 2 + 1))


_SOLUTION_CACHE: dict[int, CoeffSolution] = {}


def solve_coeffs(m: int) -> CoeffSolution:
    if m in _SOLUTION_CACHE:
        return _SOLUTION_CACHE[m]
    A, rhs = build_system(m)
    a = solve_linear_exact(A, rhs)
    if not redundant_residual(m, a).is_zero():
        raise ConsistencyFailure(f"redundant f/r equation fails for m={m}")
    sol = CoeffSolution(m, tuple(a))
    _SOLUTION_CACHE[m] = sol
    return sol


# ---------------------------------------------------------------------------
# superpotentials and potential


def build_wplus(m: int, a) -> CurvedExpr:
    terms = {(-1, 1): RatFunc(-1), (0, 0): q * a[0]}
    for j in range(0, (m - 1) // 2 + 1):
        terms[(1, -(2 * j + 1))] = k * a[2 * j + 1]
    for j in range(1, m // 2 + 1):
        terms[(0, -2 * j)] = a[2 * j]
    return CurvedExpr(terms) * (2 * L + 3)


def build_wminus(m: int) -> CurvedExpr:
    return CurvedExpr({(-1, 1): -1, (0, 0): -q, (1, -1): k * m})


def build_superpotentials(sol: CoeffSolution):
    """``(W+, W-, W, W')`` with W = (W+ - W-)/2 and W' = (W+ + W-)/2."""
    wp = build_wplus(sol.m, sol.a)
    wm = build_wminus(sol.m)
    half = Fraction(1, 2)
    return wp, wm, (wp - wm) * half, (wp + wm) * half


def _allowed_potential_keys(m: int):
    keys = {(-2, 0), (-1, 1), (0, 0)}
    for j in range(1, m + 1):
        keys.add((1, -(2 * j - 1)))
        keys.add((0, -2 * j))
    return keys


def assemble_potential(sol: CoeffSolution) -> PotentialSpec:
    m = sol.m
    _, _, W, _ = build_superpotentials(sol)
    V1 = W * W - apply_f_ddr(W)
    allowed = _allowed_potential_keys(m)
    stray = {key: c for key, c in V1.terms.items() if key not in allowed}
    if stray:
        raise StructureMismatch(f"unexpected monomials in potential: {sorted(stray)}")
    angular = V1.coefficient_of(-2, 0)
    if angular != L * (L + 1):
        raise StructureMismatch(f"1/r^2 coefficient {angular} != L(L+1)")
    Q = -V1.coefficient_of(-1, 1)
    if Q != Q_OF_CALQ:
        raise StructureMismatch(f"f/r coefficient {-Q} != -2(L+1)(L+2)q")
    B = []
    for j in range(1, m + 1):
        B.append(V1.coefficient_of(1, -(2 * j - 1)) / k)
        B.append(V1.coefficient_of(0, -2 * j) / k)
    E0_const = -V1.coefficient_of(0, 0)
    E0, E1 = energies(sol)
    if E0 != E0_const:
        raise ConsistencyFailure("constant term of W^2 - f W' disagrees with the closed-form E0")
    return PotentialSpec(m, angular, Q, B, E0, E1)


def energies(sol: CoeffSolution):
    """Closed-form ``(E0, E1)``; both depend on a0 only."""
    m = sol.m
    A = (2 * L + 3) * sol.a[0]
    s2 = (m + 1) ** 2 * k
    E0 = Fraction(1, 4) * (-(q**2) * (A + 1) ** 2 + s2 * (A - 1) ** 2)
    E1 = Fraction(1, 4) * (-(q**2) * (A - 1) ** 2 + s2 * (A + 1) ** 2)
    if E1 - E0 != A * (q**2 + s2):
        raise ConsistencyFailure("E1 - E0 differs from (2L+3) a0 (q^2 + (m+1)^2 k)")
    return E0, E1


# ---------------------------------------------------------------------------
# identities


@dataclass
class IdentityReport:
    m: int
    residuals: dict  # name -> CurvedExpr

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def failures(self):
        return {name: r for name, r in self.residuals.items() if not r.is_zero()}


def verify_identities(sol: CoeffSolution) -> IdentityReport:
    """Compatibility, Riccati and partner-consistency residuals (all should vanish)."""
    wp, wm, W, Wp = build_superpotentials(sol)
    E0, E1 = energies(sol)
    gap = E1 - E0
    compat = apply_f_ddr(wp) - wp * wm - gap

    fW = apply_f_ddr(W)
    WW = W * W
    try:
        V = assemble_potential(sol).curved()
    except (StructureMismatch, ConsistencyFailure):
        # fall back to the raw potential so the residual still reports something
        V = WW - fW + E0
    riccati = WW - fW - (V - E0)

    # V'_1 + E'_0 = V_2 + E_0 with E'_0 = E1
    partner = (Wp * Wp - apply_f_ddr(Wp)) + E1 - (WW + fW) - E0
    return IdentityReport(sol.m, {"compatibility": compat, "riccati": riccati, "partner": partner})


# ---------------------------------------------------------------------------
# wavefunctions


def _integrate_over_f(W: CurvedExpr):
    """Pieces of ``-int W/f dr``: (log r coeff, log f coeff, arcsin coeff, 1/f^2j, r/f^(2j-1))."""
    log_r = RatFunc()
    log_f = RatFunc()
    arcsin = RatFunc()
    inv_even: dict[int, RatFunc] = {}
    r_odd: dict[int, RatFunc] = {}

    def add(d, j, c):
        v = d.get(j, RatFunc()) + c
        if v.is_zero():
            d.pop(j, None)
        else:
            d[j] = v

    for (p, s), c in W.terms.items():
        if (p, s) == (-1, 1):
            log_r = log_r - c  # W/f = c/r
        elif (p, s) == (0, 0):
            arcsin = arcsin - c  # int dr/f = arcsin(sqrt(k) r)/sqrt(k)
        elif (p, s) == (1, -1):
            log_f = log_f + c / k  # int r/f^2 dr = -ln f / k
        elif p == 1 and s < 0 and s % 2 == 1:
            j = (-s - 1) // 2  # r/f^(2j+1) -> int r/f^(2j+2) = f^(-2j) / (2 j k)
            add(inv_even, j, -c / (2 * j * k))
        elif p == 0 and s < 0 and s % 2 == 0:
            # int dr / f^(2l+1) = sum_j coeff_j r / f^(2j-1)
            for jj, cf in _odd_power_integral(-s // 2).items():
                add(r_odd, jj, -c * cf)
        else:
            raise StructureMismatch(f"cannot integrate r^{p} f^{s} / f in closed form")
    return log_r, log_f, arcsin, inv_even, r_odd


_ODD_INTEGRALS: dict[int, dict[int, Fraction]] = {1: {1: Fraction(1)}}


def _odd_power_integral(l: int) -> dict[int, Fraction]:
    """Coefficients c_j with int dr / f^(2l+1) = sum_j c_j r / f^(2j-1), l >= 1.

    From d/dr (r / f^(2j-1)) = (2j-1) / f^(2j+1) - (2j-2) / f^(2j-1).
    """
    if l not in _ODD_INTEGRALS:
        prev = _odd_power_integral(l - 1)
        out = {l: Fraction(1, 2 * l - 1)}
        for j, c in prev.items():
            out[j] = out.get(j, 0) + c * Fraction(2 * l - 2, 2 * l - 1)
        _ODD_INTEGRALS[l] = out
    return _ODD_INTEGRALS[l]


def _ground_state(W: CurvedExpr, prefactor=None) -> WaveDescriptor:
    log_r, log_f, arcsin, inv_even, r_odd = _integrate_over_f(W)
    return WaveDescriptor(
        r_exp=log_r,
        f_exp=log_f - Fraction(1, 2),
        arcsin_coeff=arcsin,
        inv_f_even=inv_even,
        r_f_odd=r_odd,
        prefactor=prefactor,
    )


def wavefunctions(sol: CoeffSolution):
    """Descriptors of psi0 ~ f^-1/2 exp(-int W/f) and psi1 ~ W+ f^-1/2 exp(-int W'/f)."""
    wp, _, W, Wp = build_superpotentials(sol)
    return _ground_state(W), _ground_state(Wp, prefactor=wp)


# ---------------------------------------------------------------------------
# conjecture


def _poly_in_qk_matches(num: MultiPoly, scale, kpow: int, qpow: int, inner: MultiPoly) -> bool:
    expected = MultiPoly.const(scale) * MultiPoly.var("k", kpow) * MultiPoly.var("q", qpow) * inner
    return num == expected


def _weighted_coeffs(p: MultiPoly, top: int):
    """For p = q^(2 top) + c1 k q^(2 top - 2) + ... + c_top k^top return [c1..c_top], else None."""
    out = []
    for i in range(top + 1):
        mono = MultiPoly.var("q", 2 * (top - i)) * MultiPoly.var("k", i)
        (key,) = mono.terms
        out.append(Fraction(p.terms.get(key, 0)))
    rebuilt = MultiPoly()
    for i, c in enumerate(out):
        rebuilt = rebuilt + MultiPoly.var("q", 2 * (top - i)) * MultiPoly.var("k", i) * c
    if rebuilt != p or out[0] != 1:
        return None
    return out[1:]


def check_conjecture(m: int) -> ConjectureReport:
    """Test the conjectured closed structure of a0..am for one m >= 2."""
    if m < 2:
        raise ValueError("the structural conjecture concerns m >= 2")
    sol = solve_coeffs(m)
    a = sol.a
    odd = m % 2 == 1
    mu = (m - 1) // 2 if odd else m // 2
    shifts = [4 * j * j for j in range(1, mu + 1)] if odd else [(2 * j - 1) ** 2 for j in range(1, mu + 1)]
    clauses: dict[str, bool] = {}

    D = a[0].den
    clauses["shared_denominator"] = all(ai.den == D for ai in a)
    b = _weighted_coeffs(D, mu)
    clauses["denominator_form"] = b is not None
    b = b or []

    def shifted_product(n):
        p = MultiPoly.const(1)
        for c in shifts[:n]:
            p = p * (MultiPoly.var("q", 2) + MultiPoly.var("k") * c)
        return p

    factors, rem = factor_shifted_quadratics(a[0].num)
    clauses["a0_numerator"] = a[0].num == shifted_product(mu) and [c for c, _ in factors] == [
        Fraction(c) for c in shifts
    ] and rem == 1

    top = factorial(2 * mu + 1) if odd else factorial(2 * mu)
    even_ok = True
    for kk in range(1, mu + 1):
        pref = top // factorial(2 * mu - 2 * kk + 1) if odd else top // factorial(2 * mu - 2 * kk)
        even_ok &= _poly_in_qk_matches(a[2 * kk].num, pref, kk, 1, shifted_product(mu - kk))
    clauses["even_coefficients"] = even_ok

    cs: dict[int, list] = {}
    odd_ok = True
    kmax = mu if odd else mu - 1
    for kk in range(0, kmax + 1):
        if odd:
            pref = top // factorial(2 * mu - 2 * kk)
            base = MultiPoly.const(pref) * MultiPoly.var("k", kk)
            inner_top = mu - kk
        else:
            pref = top // factorial(2 * mu - 2 * kk - 1)
            base = MultiPoly.const(pref) * MultiPoly.var("k", kk) * MultiPoly.var("q", 2)
            inner_top = mu - kk - 1
        try:
            inner = a[2 * kk + 1].num.divexact(base)
        except Exception:
            odd_ok = False
            continue
        c = _weighted_coeffs(inner, inner_top)
        if c is None:
            odd_ok = False
            continue
        cs[kk] = c
    clauses["odd_coefficients"] = odd_ok
    clauses["positive_constants"] = all(x > 0 for x in b) and all(x > 0 for c in cs.values() for x in c)
    am = a[m]
    clauses["a_m_positive"] = all(c > 0 for c in am.num.terms.values()) and all(
        c > 0 for c in am.den.terms.values()
    )
    return ConjectureReport(m, factors, b, cs, clauses)


def gap_positive(sol: CoeffSolution) -> bool:
    """E1 - E0 has a numerator and denominator with only positive coefficients."""
    E0, E1 = energies(sol)
    d = E1 - E0
    return all(c > 0 for c in d.num.terms.values()) and all(c > 0 for c in d.den.terms.values())


def potential_keys_ok(m: int, V: CurvedExpr) -> bool:
    return all(is_admissible(*key) for key in V.terms) and set(V.terms) <= _allowed_potential_keys(m)


__all__ = [
    "BadCount",
    "CoeffSolution",
    "ConjectureReport",
    "ConsistencyFailure",
    "IdentityReport",
    "PotentialSpec",
    "StructureMismatch",
    "WaveDescriptor",
    "assemble_potential",
    "build_superpotentials",
    "build_system",
    "check_conjecture",
    "energies",
    "redundant_residual",
    "solve_coeffs",
    "verify_identities",
    "wavefunctions",
]

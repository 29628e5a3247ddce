from fractions import Fraction

import pytest

from qeskc import gfm, published
from qeskc.curvedalg import CurvedExpr, apply_f_ddr
from qeskc.exactalg import MultiPoly

q, k, L = gfm.q, gfm.k, gfm.L
Qp = MultiPoly.var("q")
Kp = MultiPoly.var("k")


def test_build_system_m1():
    A, rhs = gfm.build_system(1)
    assert A == [[MultiPoly.const(2), MultiPoly.const(-1)], [Qp, -Qp]]
    assert rhs == [MultiPoly.const(1), MultiPoly()]


def test_build_system_m2():
    A, rhs = gfm.build_system(2)
    assert A == [
        [MultiPoly.const(3), MultiPoly.const(-1), MultiPoly()],
        [Qp * 2, -Qp, MultiPoly.const(-1)],
        [MultiPoly(), Kp, -Qp],
    ]
    assert rhs == [MultiPoly.const(1), MultiPoly(), MultiPoly()]


def test_build_system_m3_contains_published_rows():
    A, _ = gfm.build_system(3)
    assert [MultiPoly(), MultiPoly(), MultiPoly.const(1), -Qp] in A
    assert [MultiPoly(), Kp * 2, -Qp, Kp * -2] in A


@pytest.mark.parametrize("m", range(1, 13))
def test_system_is_square(m):
    A, rhs = gfm.build_system(m)
    assert len(A) == len(rhs) == m + 1
    assert all(len(row) == m + 1 for row in A)


def test_bad_m():
    with pytest.raises(ValueError):
        gfm.build_system(0)


@pytest.mark.parametrize("m", range(1, 8))
def test_solve_matches_published(m):
    assert list(gfm.solve_coeffs(m).a) == published.coefficients(m)


def test_m7_denominator():
    den = gfm.solve_coeffs(7).a[0].den
    assert den == Qp**6 + Qp**4 * Kp * 98 + Qp**2 * Kp**2 * 2464 + Kp**3 * 13392


@pytest.mark.parametrize("m", range(1, 11))
def test_redundant_equation(m):
    sol = gfm.solve_coeffs(m)
    assert gfm.redundant_residual(m, sol.a).is_zero()


def test_superpotentials_m1():
    wp, wm, W, Wp = gfm.build_superpotentials(gfm.solve_coeffs(1))
    assert wp == CurvedExpr({(-1, 1): -(2 * L + 3), (0, 0): (2 * L + 3) * q, (1, -1): (2 * L + 3) * k})
    assert wm == CurvedExpr({(-1, 1): -1, (0, 0): -q, (1, -1): k})
    assert W == CurvedExpr({(-1, 1): -(L + 1), (0, 0): (L + 2) * q, (1, -1): k * (L + 1)})


def test_wprime_m3_top_term():
    _, _, _, Wp = gfm.build_superpotentials(gfm.solve_coeffs(3))
    assert Wp.coefficient_of(1, -3) == 3 * k**2 * (2 * L + 3) / (q**2 + 10 * k)


@pytest.mark.parametrize("m", range(1, 8))
def test_wminus_form(m):
    assert gfm.build_wminus(m) == CurvedExpr({(-1, 1): -1, (0, 0): -q, (1, -1): m * k})


def test_potential_m1():
    pot = gfm.assemble_potential(gfm.solve_coeffs(1))
    assert pot.B == [2 * (L + 1) * (L + 2) * q, L * (L + 1)]
    assert pot.Q == 2 * (L + 1) * (L + 2) * q
    assert pot.angular == L * (L + 1)


def test_potential_m2_b2():
    pot = gfm.assemble_potential(gfm.solve_coeffs(2))
    want = (2 * (4 * L**2 + 10 * L + 7) * q**4 + k * (4 * L**2 + 3) * q**2 + 18 * k**2) / (q**2 + 3 * k) ** 2
    assert pot.B[1] == want
    assert pot.B == published.m2_potential()


def test_potential_m3_b6():
    pot = gfm.assemble_potential(gfm.solve_coeffs(3))
    assert pot.B[5] == 9 * k**2 * (2 * L + 3) ** 2 / (q**2 + 10 * k) ** 2


@pytest.mark.parametrize("m", range(1, 8))
def test_constant_term_is_minus_e0(m):
    sol = gfm.solve_coeffs(m)
    wp, wm, W, Wp = gfm.build_superpotentials(sol)
    E0, _ = gfm.energies(sol)
    V1 = W * W - apply_f_ddr(W)
    assert V1.coefficient_of(0, 0) == -E0


def test_energies_unit_point_m1():
    E0, E1 = gfm.energies(gfm.solve_coeffs(1))
    vals = {"q": Fraction(1, 12), "k": 1, "L": 1}
    assert E0.evaluate(vals) == Fraction(255, 16)
    assert float(E1.evaluate(vals)) == pytest.approx(35.9722, abs=5e-5)


def test_energies_m1_symbolic():
    E0, E1 = gfm.energies(gfm.solve_coeffs(1))
    assert E0 == 4 * k * (L + 1) ** 2 - (L + 2) ** 2 * q**2
    assert E1 == 4 * k * (L + 2) ** 2 - (L + 1) ** 2 * q**2


def test_energies_m2_unit_point():
    E0, E1 = gfm.energies(gfm.solve_coeffs(2))
    vals = {"q": 1, "k": 1, "L": 1}
    assert E0.evaluate(vals) == 2
    assert E1.evaluate(vals) == 27


@pytest.mark.parametrize("m", range(1, 11))
def test_gap_positive(m):
    sol = gfm.solve_coeffs(m)
    assert gfm.gap_positive(sol)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_identities_vanish(m):
    rep = gfm.verify_identities(gfm.solve_coeffs(m))
    assert rep.ok, rep.failures()


def test_corrupted_solution_detected():
    sol = gfm.solve_coeffs(2)
    bad = gfm.CoeffSolution(2, (sol.a[0] + 1,) + tuple(sol.a[1:]))
    rep = gfm.verify_identities(bad)
    assert not rep.residuals["compatibility"].is_zero()


def test_wavefunction_m1():
    psi0, psi1 = gfm.wavefunctions(gfm.solve_coeffs(1))
    Q = 2 * (L + 1) * (L + 2) * q
    assert psi0.r_exp == L + 1
    assert psi0.f_exp == L + Fraction(1, 2)
    assert psi0.arcsin_coeff == -Q / (2 * (L + 1))
    assert not psi0.inv_f_even and not psi0.r_f_odd
    assert psi0.prefactor is None
    assert psi1.prefactor is not None


def test_wavefunction_m3_series():
    psi0, _ = gfm.wavefunctions(gfm.solve_coeffs(3))
    D = q**2 + 10 * k
    assert psi0.r_f_odd[1] == -3 * k * (2 * L + 3) * q / D
    assert psi0.inv_f_even[1] == -3 * k * (2 * L + 3) / (2 * D)


@pytest.mark.parametrize("m", range(1, 9))
def test_wavefunction_exponents(m):
    sol = gfm.solve_coeffs(m)
    a0, a1 = sol.a[0], sol.a[1]
    psi0, psi1 = gfm.wavefunctions(sol)
    assert psi0.r_exp == L + 1
    assert psi1.r_exp == L + 2
    assert psi0.f_exp == ((2 * L + 3) * a1 - m - 1) / 2
    assert psi1.f_exp == ((2 * L + 3) * a1 + m - 1) / 2
    assert psi0.arcsin_coeff == -q * ((2 * L + 3) * a0 + 1) / 2
    assert psi1.arcsin_coeff - psi0.arcsin_coeff == q


def _double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@pytest.mark.parametrize("l", range(1, 8))
def test_odd_power_integral_closed_form(l):
    # int dr/f^(2l+1) = sum_{j=1}^{l} (2l-2)!!/(2l-1)!! * (2j-3)!!/(2j-2)!! * r/f^(2j-1)
    got = gfm._odd_power_integral(l)
    want = {
        j: Fraction(_double_factorial(2 * l - 2) * _double_factorial(2 * j - 3), _double_factorial(2 * l - 1) * _double_factorial(2 * j - 2))
        for j in range(1, l + 1)
    }
    assert got == want


@pytest.mark.parametrize("l", range(1, 6))
def test_odd_power_integral_derivative(l):
    # f * d/dr of the antiderivative equals f / f^(2l+1) = 1/f^(2l)
    expr = CurvedExpr({(1, -(2 * j - 1)): c for j, c in gfm._odd_power_integral(l).items()})
    assert apply_f_ddr(expr) == CurvedExpr({(0, -2 * l): 1})


def test_conjecture_examples():
    r4 = gfm.check_conjecture(4)
    assert r4.passed
    assert gfm.solve_coeffs(4).a[2] == 12 * k * q * (q**2 + k) / (q**4 + 22 * k * q**2 + 45 * k**2)
    r7 = gfm.check_conjecture(7)
    assert r7.passed
    assert [c for c, _ in r7.a0_factors] == [4, 16, 36]
    r2 = gfm.check_conjecture(2)
    assert r2.b == [3]


@pytest.mark.parametrize("m", range(2, 11))
def test_conjecture_holds(m):
    rep = gfm.check_conjecture(m)
    assert rep.passed, rep.clauses
    assert all(b > 0 for b in rep.b)
    assert all(c > 0 for cs in rep.c.values() for c in cs)


def test_potential_keys():
    for m in range(1, 5):
        V = gfm.assemble_potential(gfm.solve_coeffs(m)).curved()
        assert gfm.potential_keys_ok(m, V)

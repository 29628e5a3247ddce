"""Conditionally deformed shape invariance route for the first family members.

For m = 1, 2 the superpotential parameters, ground-state energies and
constraint relations of both hierarchy steps are taken in closed form and
certified by their Riccati residuals; compatibility of the two
constraint sets is then solved exactly.  For m = 3 the published closed
forms serve as the reference side of the cross-check with the
generating-function route.

Symbols: ``Q`` Coulomb strength, ``B1..B4`` potential parameters,
``s = sqrt(k B4)`` (so ``B4 = s^2 / k`` is eliminated exactly) and ``w``
is used for ``B3 / (2 s)`` while solving compatibility for m = 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gfm
from .curvedalg import CurvedExpr, apply_f_ddr
from .exactalg import MultiPoly, RatFunc, solve_linear_exact, symbol_index

q, k, L = gfm.q, gfm.k, gfm.L
Q = RatFunc.var("Q")
B1 = RatFunc.var("B1")
B2 = RatFunc.var("B2")
B3 = RatFunc.var("B3")
s = RatFunc.var("s")
w = RatFunc.var("w")


class ResidualNonzero(ValueError):
    pass


class Incompatible(ValueError):
    pass


class Mismatch(ValueError):
    pass


@dataclass
class SuperpotAnsatz:
    m: int
    xi: RatFunc
    eta: RatFunc
    zeta: RatFunc
    sigma: RatFunc | None = None

    def curved(self) -> CurvedExpr:
        terms = {(-1, 1): self.xi, (0, 0): self.eta, (1, -1): self.zeta}
        if self.sigma is not None:
            terms[(0, -2)] = self.sigma
        return CurvedExpr(terms)


@dataclass
class ConstraintSet:
    step: str  # "first" or "second"
    relations: dict  # parameter name -> RatFunc


def extended_potential(L_, Q_, Bs) -> CurvedExpr:
    """L(L+1)/r^2 - Q f/r + k sum (B_{2j-1} r/f^(2j-1) + B_{2j}/f^(2j))."""
    terms = {(-2, 0): L_ * (L_ + 1), (-1, 1): -Q_}
    for idx, B in enumerate(Bs):
        j = idx // 2 + 1
        key = (1, -(2 * j - 1)) if idx % 2 == 0 else (0, -2 * j)
        terms[key] = k * B
    return CurvedExpr(terms)


def riccati_residual(W: CurvedExpr, V: CurvedExpr, E0) -> CurvedExpr:
    return W * W - apply_f_ddr(W) - (V - E0)


def _check(res: CurvedExpr, what: str):
    if not res.is_zero():
        raise ResidualNonzero(f"{what}: nonzero residual {res}")


# ---------------------------------------------------------------------------
# m = 1


def _t1():
    return (L + 1) * B1 / Q


def _t2():
    return (L + 2) * B1 / Q


def _first_step_m1():
    t = _t1()
    ans = SuperpotAnsatz(1, -L - 1, Q / (2 * (L + 1)), k * t)
    E0 = k * (L + 1) ** 2 - Q**2 / (4 * (L + 1) ** 2) + k * t * (t + 2 * L + 2)
    cons = ConstraintSet("first", {"B2": t * (t - 1)})
    V = extended_potential(L, Q, [B1, cons.relations["B2"]])
    _check(riccati_residual(ans.curved(), V, E0), "m=1 first step")
    return ans, E0, cons


def _second_step_m1():
    t, t2 = _t1(), _t2()
    ans = SuperpotAnsatz(1, -L - 2, Q / (2 * (L + 2)), k * t2)
    E0p = k * (L + 2) ** 2 - Q**2 / (4 * (L + 2) ** 2) + k * t2 * (t2 + 2 * L + 4)
    cons = ConstraintSet("second", {"B2": t2 * (t2 - 1) - 2 * t})
    # partner of the starting potential, with B2 kept free until the constraint is imposed
    B2p = cons.relations["B2"] + 2 * t
    Vp = extended_potential(L + 1, Q, [B1, B2p])
    _check(riccati_residual(ans.curved(), Vp, E0p), "m=1 second step")
    return ans, E0p, cons


# ---------------------------------------------------------------------------
# m = 2


def _first_step_m2():
    wv = B3 / (2 * s)
    eta = Q / (2 * (L + 1)) - s
    ans = SuperpotAnsatz(2, -L - 1, eta, k * (wv + 1), s)
    E0 = k * (wv + L + 2) ** 2 - eta**2
    cons = ConstraintSet(
        "first",
        {
            "B1": 2 * eta * (wv + 1) - 2 * (L + 1) * s,
            "B2": (2 * eta * s + k * (wv + 1) * wv) / k,
        },
    )
    V = extended_potential(L, Q, [cons.relations["B1"], cons.relations["B2"], B3, s**2 / k])
    _check(riccati_residual(ans.curved(), V, E0), "m=2 first step")
    return ans, E0, cons


def _second_step_m2():
    wv = B3 / (2 * s)
    eta = Q / (2 * (L + 2)) - s
    ans = SuperpotAnsatz(2, -L - 2, eta, k * (wv + 3), s)
    E0p = k * (wv + L + 5) ** 2 - eta**2
    cons = ConstraintSet(
        "second",
        {
            "B1": 2 * eta * (wv + 3) - 2 * (L + 2) * s,
            "B2": (2 * eta * s + k * (wv**2 + 3 * wv + 4)) / k,
        },
    )
    # partner parameters: B2' = B2 + B3/s + 2, B3' = B3 + 4s, B4' = B4
    B2p = cons.relations["B2"] + B3 / s + 2
    Vp = extended_potential(L + 1, Q, [cons.relations["B1"], B2p, B3 + 4 * s, s**2 / k])
    _check(riccati_residual(ans.curved(), Vp, E0p), "m=2 second step")
    return ans, E0p, cons


def first_step(m: int):
    """``(ansatz, E0, constraints)`` for the starting potential."""
    if m == 1:
        return _first_step_m1()
    if m == 2:
        return _first_step_m2()
    raise ValueError("closed-form first step available for m = 1, 2")


def second_step(m: int):
    """``(ansatz', E0', constraints')`` for the partner taken as new starting potential."""
    if m == 1:
        return _second_step_m1()
    if m == 2:
        return _second_step_m2()
    raise ValueError("closed-form second step available for m = 1, 2")


def partner_parameters(m: int) -> dict:
    """Read L'(L'+1), Q', B', R off V2 = W^2 + f W' for the first-step W.

    Returns the extracted values together with the expected shifts; raises
    :class:`Mismatch` if any expected relation fails.
    """
    ans, E0, cons = first_step(m)
    W = ans.curved()
    V2 = W * W + apply_f_ddr(W)
    got = {
        "LL1": V2.coefficient_of(-2, 0),
        "Q": -V2.coefficient_of(-1, 1),
        "R": V2.coefficient_of(0, 0),
    }
    for j in range(1, m + 1):
        got[f"B{2 * j - 1}"] = V2.coefficient_of(1, -(2 * j - 1)) / k
        got[f"B{2 * j}"] = V2.coefficient_of(0, -2 * j) / k
    if m == 1:
        t = _t1()
        B2_first = cons.relations["B2"]
        expected = {"LL1": (L + 1) * (L + 2), "Q": Q, "R": -E0, "B1": B1, "B2": B2_first + 2 * t}
    else:
        expected = {
            "LL1": (L + 1) * (L + 2),
            "Q": Q,
            "R": -E0,
            "B1": cons.relations["B1"],
            "B2": cons.relations["B2"] + B3 / s + 2,
            "B3": B3 + 4 * s,
            "B4": s**2 / k,
        }
    for name, val in expected.items():
        if got[name] != val:
            raise Mismatch(f"partner parameter {name}: {got[name]} != {val}")
    return got


# ---------------------------------------------------------------------------
# compatibility


def _linear_system(exprs, unknowns):
    """Coefficient matrix / rhs of expressions that are affine in ``unknowns``."""
    idx = [symbol_index(u) for u in unknowns]
    A, rhs = [], []
    for e in exprs:
        num = e.num  # den is free of the unknowns by construction
        if any(i in e.den.variables() for i in idx):
            raise Incompatible("denominator depends on an unknown")
        row = []
        rest = num
        for i in idx:
            parts = rest.coeffs_in(i)
            if max(parts) > 1:
                raise Incompatible("constraint difference is not affine in the unknowns")
            row.append(parts.get(1, MultiPoly()))
            rest = parts.get(0, MultiPoly())
        A.append(row)
        rhs.append(-rest)
    return A, rhs


@dataclass
class Compatibility:
    m: int
    values: dict  # resolved parameters in terms of (L, q, k)
    ansatz: SuperpotAnsatz
    ansatz_prime: SuperpotAnsatz
    E0: RatFunc
    E1: RatFunc


def compatibility(m: int) -> Compatibility:
    """Resolve the parameters for which both constraint sets hold, in (L, q, k)."""
    a1, E0, c1 = first_step(m)
    a2, E1, c2 = second_step(m)
    if m == 1:
        diff = c1.relations["B2"] - c2.relations["B2"]
        # quadratic in B1 with a trivial root B1 = 0 (excluded: zeta > 0)
        num = diff.num.coeffs_in("B1")
        if num.get(0, MultiPoly()) != MultiPoly():
            raise Incompatible("unexpected constant term in m=1 compatibility")
        reduced = RatFunc(num.get(2, MultiPoly()) * MultiPoly.var("B1") + num.get(1, MultiPoly()))
        A, rhs = _linear_system([reduced], ["B1"])
        (B1v,) = solve_linear_exact(A, rhs)
        B1v = B1v.subs({"Q": gfm.Q_OF_CALQ})
        sub = {"B1": B1v, "Q": gfm.Q_OF_CALQ}
        values = {"B1": B1v, "B2": c1.relations["B2"].subs(sub)}
        if c2.relations["B2"].subs(sub) != values["B2"]:
            raise Incompatible("m=1 constraint sets disagree after substitution")
    elif m == 2:
        sub_w = {"B3": 2 * s * w, "Q": gfm.Q_OF_CALQ}
        diffs = [(c1.relations[n] - c2.relations[n]).subs(sub_w) for n in ("B1", "B2")]
        A, rhs = _linear_system(diffs, ["w", "s"])
        wv, sv = solve_linear_exact(A, rhs)
        B3v = 2 * sv * wv
        sub = {"B3": B3v, "s": sv, "Q": gfm.Q_OF_CALQ}
        values = {"B3": B3v, "B4": sv**2 / k, "s": sv}
        for n in ("B1", "B2"):
            v1, v2 = c1.relations[n].subs(sub), c2.relations[n].subs(sub)
            if v1 != v2:
                raise Incompatible(f"m=2 constraint {n} disagrees after substitution")
            values[n] = v1
    else:
        raise ValueError("compatibility is solved for m = 1, 2")

    def resolve(x):
        return x.subs(sub) if x is not None else None

    ans = SuperpotAnsatz(m, resolve(a1.xi), resolve(a1.eta), resolve(a1.zeta), resolve(a1.sigma))
    ansp = SuperpotAnsatz(m, resolve(a2.xi), resolve(a2.eta), resolve(a2.zeta), resolve(a2.sigma))
    return Compatibility(m, values, ans, ansp, resolve(E0), resolve(E1))


# ---------------------------------------------------------------------------
# m = 3 reference closed forms


def third_member_reference() -> dict:
    """Closed-form W, W', B1..B6, E0, E1 for the third family member, in (L, q, k)."""
    D = q**2 + 10 * k
    B = [
        6 * q * ((L + 1) * (L + 2) * q**4 + 4 * k * (L**2 + 3 * L + 1) * q**2 - 4 * k**2 * (3 * L**2 + 9 * L + 13)) / D**2,
        3 * ((7 * L**2 + 19 * L + 14) * q**4 + 4 * k * (3 * L**2 + 5 * L + 7) * q**2 - 4 * k**2 * (13 * L**2 + 29 * L - 17)) / D**2,
        6 * k * (2 * L + 3) * q * (4 * (L + 1) * q**2 + 5 * k * (2 * L - 1)) / D**2,
        9 * k * (2 * L + 3) * (4 * (L + 1) * q**2 + k * (2 * L - 17)) / D**2,
        18 * k**2 * (2 * L + 3) ** 2 * q / D**2,
        9 * k**2 * (2 * L + 3) ** 2 / D**2,
    ]
    W = CurvedExpr(
        {
            (-1, 1): -(L + 1),
            (0, 0): q * ((L + 2) * q**2 + k * (4 * L + 11)) / D,
            (1, -1): 3 * k * ((L + 1) * q**2 + 2 * k * (L - 1)) / D,
            (0, -2): 3 * k * (2 * L + 3) * q / D,
            (1, -3): 3 * k**2 * (2 * L + 3) / D,
        }
    )
    Wp = CurvedExpr(
        {
            (-1, 1): -(L + 2),
            (0, 0): q * ((L + 1) * q**2 + k * (4 * L + 1)) / D,
            (1, -1): 3 * k * ((L + 2) * q**2 + 2 * k * (L + 4)) / D,
            (0, -2): 3 * k * (2 * L + 3) * q / D,
            (1, -3): 3 * k**2 * (2 * L + 3) / D,
        }
    )
    u = ((L + 1) * q**2 + k * (4 * L + 1)) / D
    v = ((L + 2) * q**2 + k * (4 * L + 11)) / D
    E0 = 16 * k * u**2 - q**2 * v**2
    E1 = 16 * k * v**2 - q**2 * u**2
    return {"W": W, "Wp": Wp, "B": B, "E0": E0, "E1": E1}


# ---------------------------------------------------------------------------
# cross-check


@dataclass
class CrosscheckReport:
    m: int
    components: dict  # name -> bool

    @property
    def ok(self) -> bool:
        return all(self.components.values())


def _cdsi_side(m: int) -> dict:
    if m == 3:
        return third_member_reference()
    comp = compatibility(m)
    W, Wp = comp.ansatz.curved(), comp.ansatz_prime.curved()
    if m == 1:
        B = [comp.values["B1"], comp.values["B2"]]
    else:
        B = [comp.values[n] for n in ("B1", "B2", "B3", "B4")]
    return {"W": W, "Wp": Wp, "B": B, "E0": comp.E0, "E1": comp.E1}


def crosscheck_gfm(m: int, raise_on_mismatch: bool = False) -> CrosscheckReport:
    """Compare W, W', E0, E1 and B between this route and the generating-function route."""
    if m not in (1, 2, 3):
        raise ValueError("cross-check covers m = 1, 2, 3")
    ref = _cdsi_side(m)
    sol = gfm.solve_coeffs(m)
    _, _, W, Wp = gfm.build_superpotentials(sol)
    pot = gfm.assemble_potential(sol)
    comps = {
        "W": W == ref["W"],
        "Wp": Wp == ref["Wp"],
        "E0": pot.E0 == ref["E0"],
        "E1": pot.E1 == ref["E1"],
        "B": list(pot.B) == list(ref["B"]),
    }
    report = CrosscheckReport(m, comps)
    if raise_on_mismatch and not report.ok:
        bad = [n for n, v in comps.items() if not v]
        raise Mismatch(f"m={m}: routes disagree on {bad}")
    return report


def kc_partner_is_shifted() -> bool:
    """Pure KC: V2 from W = -(L+1) f/r + Q/(2L+2) equals V1 with L -> L+1 (same Q, same constant)."""
    W = CurvedExpr({(-1, 1): -(L + 1), (0, 0): Q / (2 * (L + 1))})
    V1 = W * W - apply_f_ddr(W)
    V2 = W * W + apply_f_ddr(W)
    E0 = -V1.coefficient_of(0, 0)
    expected_V2 = extended_potential(L + 1, Q, []) - E0
    expected_V1 = extended_potential(L, Q, []) - E0
    return V1 == expected_V1 and V2 == expected_V2


def kc_ground_energy() -> RatFunc:
    """E0 of the pure KC potential from the Riccati constant term."""
    W = CurvedExpr({(-1, 1): -(L + 1), (0, 0): Q / (2 * (L + 1))})
    return -(W * W - apply_f_ddr(W)).coefficient_of(0, 0)


__all__ = [
    "Compatibility",
    "ConstraintSet",
    "CrosscheckReport",
    "Incompatible",
    "Mismatch",
    "ResidualNonzero",
    "SuperpotAnsatz",
    "compatibility",
    "crosscheck_gfm",
    "first_step",
    "partner_parameters",
    "second_step",
    "third_member_reference",
]

"""Fraction-free (Bareiss) solution of square polynomial linear systems."""

from __future__ import annotations

from fractions import Fraction

from .poly import MultiPoly
from .ratfunc import RatFunc


class SingularSystem(ArithmeticError):
    pass


def solve_linear_exact(A, rhs) -> list[RatFunc]:
    """Solve ``A x = rhs`` over the rational-function field.

    Entries may be ``MultiPoly`` or plain rationals.  Elimination stays
    inside the polynomial ring (every Bareiss division is exact); the
    fraction-free back substitution yields ``det * x_i`` as polynomials,
    and only the final quotients are reduced to lowest terms.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    if len(rhs) != n:
        raise ValueError("right-hand side length mismatch")
    M = [[MultiPoly.coerce(x) for x in row] + [MultiPoly.coerce(b)] for row, b in zip(A, rhs)]

    prev = MultiPoly.const(1)
    for k in range(n):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    break
            else:
                raise SingularSystem(f"zero pivot in column {k}")
        piv = M[k][k]
        for i in range(k + 1, n):
            row = M[i]
            lead = row[k]
            for j in range(k + 1, n + 1):
                t = row[j] * piv - lead * M[k][j]
                row[j] = t.divexact(prev) if not prev.is_const() else t.scale(Fraction(1, 1) / prev.const_value())
            row[k] = MultiPoly()
        prev = piv

    det = M[n - 1][n - 1]
    # y_i = det * x_i is a polynomial (Cramer); each division below is exact
    y = [MultiPoly()] * n
    for i in range(n - 1, -1, -1):
        acc = det * M[i][n]
        for j in range(i + 1, n):
            if not M[i][j].is_zero():
                acc = acc - M[i][j] * y[j]
        y[i] = acc.divexact(M[i][i])
    return [RatFunc(yi, det) for yi in y]


def residual(A, x, rhs) -> list[RatFunc]:
    """``A x - rhs`` evaluated exactly."""
    out = []
    for row, b in zip(A, rhs):
        acc = -RatFunc.coerce(b)
        for a, xi in zip(row, x):
            if not MultiPoly.coerce(a).is_zero():
                acc = acc + RatFunc.coerce(a) * xi
        out.append(acc)
    return out

"""Bridges between the exact univariate kernel and sympy, plus a small
exact linear solver."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy as sp

from .algebra import UPoly


def to_sympy(p: UPoly, sym: sp.Symbol) -> sp.Expr:
    return sum((sp.Rational(c.numerator, c.denominator) * sym ** k
                for k, c in enumerate(p.coeffs)), sp.Integer(0))


def to_sympy_poly(p: UPoly, sym: sp.Symbol, *gens: sp.Symbol) -> sp.Poly:
    return sp.Poly(to_sympy(p, sym), *(gens or (sym,)), domain="QQ")


def from_sympy(expr, sym: sp.Symbol) -> UPoly:
    poly = sp.Poly(expr, sym, domain="QQ")
    coeffs = [Fraction(0)] * (poly.degree() + 1 if not poly.is_zero else 0)
    for (k,), c in poly.terms():
        if not c:
            continue
        coeffs[k] = Fraction(int(c.p), int(c.q))
    return UPoly(coeffs)


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Exact Gauss-Jordan elimination; free variables are set to zero.

    Returns None when the system is inconsistent.
    """
    n = len(rows[0]) if rows else 0
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for i in range(len(mat)):
            if i != row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        pivots.append(col)
        row += 1
    for i in range(row, len(mat)):
        if mat[i][n] != 0:
            return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = mat[i][n]
    return sol

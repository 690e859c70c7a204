"""Independent reference computations built on sympy."""
from __future__ import annotations

from fractions import Fraction

import sympy

from freediv.pseries import Series


def symbols(n: int):
    return sympy.symbols(f"v0:{n}")


def to_sympy(s: Series):
    xs = symbols(s.nvars)
    expr = sympy.Integer(0)
    for mon, c in s.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, mon):
            term *= x ** e
        expr += term
    return expr


def from_sympy(expr, n: int, prec=None) -> Series:
    xs = symbols(n)
    poly = sympy.Poly(sympy.expand(expr), *xs)
    terms = {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c != 0}
    return Series(terms, n) if prec is None else Series(terms, n, prec)


def truncated(expr, n: int, k: int) -> Series:
    return from_sympy(expr, n, k)


def matrix_jordan_parts(m):
    """Semisimple and nilpotent parts via sympy's Jordan normal form."""
    a = sympy.Matrix(m)
    p, j = a.jordan_form()
    d = sympy.diag(*[j[i, i] for i in range(j.rows)])
    s = sympy.simplify(p * d * p.inv())
    return s, sympy.simplify(a - s)


def is_jordan_chevalley_pair(m, s, n) -> bool:
    """``s + n = m``, ``sn = ns``, ``n`` nilpotent, and the squarefree part of
    the characteristic polynomial kills ``s``; these determine ``s`` uniquely."""
    a, s, n = sympy.Matrix(m), sympy.Matrix(s), sympy.Matrix(n)
    size = a.rows
    if s + n != a or s * n != n * s or n ** size != sympy.zeros(size):
        return False
    t = sympy.Symbol("t")
    sqf = sympy.Poly(sympy.sqf_part(a.charpoly(t).as_expr()), t)
    acc = sympy.zeros(size)
    for c in sqf.all_coeffs():
        acc = acc * s + c * sympy.eye(size)
    return acc == sympy.zeros(size)


def seh_solvable(f_text: str, d: int) -> bool:
    """Brute-force rank test for ``f = sum m_i df/dx_i`` with ``m_i`` in ``m`` of degree ``<= d`` (plane curves)."""
    x, y = sympy.symbols("x y")
    f = sympy.sympify(f_text.replace("^", "**"), locals={"x": x, "y": y})
    mons = [x ** a * y ** b for a in range(d + 1) for b in range(d + 1) if 1 <= a + b <= d]
    unknowns, expr = [], -f
    for var in (x, y):
        cs = sympy.symbols(f"c_{var}_0:{len(mons)}")
        unknowns += cs
        expr += sum(c * m for c, m in zip(cs, mons)) * sympy.diff(f, var)
    eqs = sympy.Poly(sympy.expand(expr), x, y).coeffs()
    a, b = sympy.linear_eq_to_matrix(eqs, unknowns)
    return a.rank() == a.row_join(b).rank()

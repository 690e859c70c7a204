"""Exact linear algebra over Q with ``Fraction`` entries.

Dense matrices are lists of rows.  Linear systems built by the solvers are
very sparse, so elimination works on rows stored as ``{column: value}``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list[list[Fraction]]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def to_fractions(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols]
            for row in a]


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def matpow(a: Matrix, e: int) -> Matrix:
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result


def is_nilpotent(a: Matrix) -> bool:
    """``a^n == 0`` for an ``n x n`` matrix."""
    if not a:
        return True
    return is_zero(matpow(a, len(a)))


def sparse_rref(rows: Sequence[dict], col_order: Sequence | None = None):
    """Reduced row echelon form of sparse rows.

    ``col_order`` ranks columns (earlier = pivot preferred).  Returns
    ``(pivot_rows, pivots)`` where ``pivot_rows[i]`` has a 1 in column
    ``pivots[i]`` and zeros in every other pivot column.
    """
    rank_of = None
    if col_order is not None:
        rank_of = {c: i for i, c in enumerate(col_order)}

    def key(c):
        return rank_of[c] if rank_of is not None else c

    pivots: list = []
    prow: dict = {}  # pivot column -> row
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        # pivot rows are zero in every other pivot column, so one pass suffices
        for c in [c for c in r if c in prow]:
            v = r.get(c)
            if not v:
                continue
            for cc, vv in prow[c].items():
                nv = r.get(cc, 0) - v * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r, key=key)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        # back-substitute into earlier pivot rows
        for c, other in prow.items():
            v = other.get(p)
            if v:
                for cc, vv in r.items():
                    nv = other.get(cc, 0) - v * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        prow[p] = r
        pivots.append(p)
    pivots.sort(key=key)
    return [prow[p] for p in pivots], pivots


def sparse_nullspace(rows: Sequence[dict], columns: Sequence) -> list[dict]:
    """Basis of ``{v : row . v = 0 for every row}`` over the listed columns.

    The basis is returned in reduced echelon form with respect to the order
    of ``columns`` (first nonzero entry of each vector is 1, in distinct,
    increasing columns, and zero in the other vectors' leading columns).
    """
    reduced, pivots = sparse_rref(rows, columns)
    pivot_set = set(pivots)
    free = [c for c in columns if c not in pivot_set]
    basis = []
    for fc in free:
        v = {fc: Fraction(1)}
        for r, p in zip(reduced, pivots):
            val = r.get(fc)
            if val:
                v[p] = -val
        basis.append(v)
    # the kernel vectors above are echelon w.r.t. the free columns; re-reduce
    # so that leading entries follow the requested column order
    ech, _ = sparse_rref(basis, columns)
    return ech


def sparse_solve(rows: Sequence[dict], rhs: Sequence, columns: Sequence):
    """One solution of ``rows . v = rhs`` (free variables set to zero) or ``None``."""
    marker = object()
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[marker] = Fraction(b)
        aug.append(r)
    reduced, pivots = sparse_rref(aug, list(columns) + [marker])
    if marker in pivots:
        return None
    sol = {}
    for r, p in zip(reduced, pivots):
        v = r.get(marker, 0)
        if v:
            sol[p] = v
    return sol


def rank(a: Matrix) -> int:
    rows = [{j: x for j, x in enumerate(row) if x} for row in a]
    return len(sparse_rref(rows)[1])


def det(a: Matrix) -> Fraction:
    """Determinant by fraction-based Gaussian elimination."""
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return d


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    rows = [{**{j: x for j, x in enumerate(row) if x}, n + i: Fraction(1)} for i, row in enumerate(a)]
    reduced, pivots = sparse_rref(rows, list(range(2 * n)))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [[r.get(n + j, Fraction(0)) for j in range(n)] for r in reduced[:n]]


def charpoly(a: Matrix, convert=Fraction) -> list:
    """Characteristic polynomial ``det(t I - a)``, coefficients low to high.

    Hessenberg reduction followed by the standard recurrence; O(n^3).
    ``convert`` maps entries into the working field.
    """
    n = len(a)
    h = [list(map(convert, row)) for row in a]
    for j in range(n - 2):
        p = next((i for i in range(j + 1, n) if h[i][j]), None)
        if p is None:
            continue
        if p != j + 1:
            h[p], h[j + 1] = h[j + 1], h[p]
            for row in h:
                row[p], row[j + 1] = row[j + 1], row[p]
        piv = h[j + 1][j]
        for i in range(j + 2, n):
            f = h[i][j] / piv
            if f:
                for c in range(n):
                    h[i][c] -= f * h[j + 1][c]
                for r in range(n):
                    h[r][j + 1] += f * h[r][i]
    # p_k = charpoly of leading k x k block
    one = convert(1)
    polys: list[list] = [[one]]
    for k in range(1, n + 1):
        # p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_ik * prod(h_{j,j-1}) p_{i-1}
        prev = polys[k - 1]
        pk = [one - one] + prev  # t * prev
        for idx, c in enumerate(prev):
            pk[idx] -= h[k - 1][k - 1] * c
        prod = one
        for i in range(k - 1, 0, -1):
            prod *= h[i][i - 1]
            if not prod:
                break
            coef = h[i - 1][k - 1] * prod
            if coef:
                for idx, c in enumerate(polys[i - 1]):
                    pk[idx] -= coef * c
        polys.append(pk)
    return polys[n]

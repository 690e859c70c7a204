"""Semisimple / topologically nilpotent splitting of singular derivations.

A singular derivation preserves every power of ``m`` and so acts on the
finite-dimensional quotients ``O/m^k``.  The semisimple part of that action
is again induced by a derivation, which is read off from its values on the
coordinate classes ``[x_j]``.

The Jordan-Chevalley splitting of a matrix is computed without factoring:
with ``p`` the squarefree part of the characteristic polynomial, Newton's
iteration ``a <- a - p(a) / p'(a)`` in ``Q[t] / (p^e)`` converges to a
polynomial ``a`` with ``p(a(M)) = 0`` and ``M - a(M)`` nilpotent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from sympy import Poly, QQ, Symbol, invert

from .derivation import Derivation, bracket
from .errors import InputError, InternalInconsistency, UnsupportedEigenvalues
from .linalg import charpoly, identity, is_nilpotent as matrix_is_nilpotent, matadd, matmul, scalar, sparse_solve, zeros
from .pseries import EXACT, Series, monomials_below

MAX_QUOTIENT_DIM = 3003

_t = Symbol("t")


def _q(x):
    return QQ(x.numerator, x.denominator) if isinstance(x, Fraction) else QQ(x)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class InducedMap:
    """Matrix of ``delta`` on ``O/m^k`` in the monomial basis of degree ``< k``.

    ``columns[c]`` maps row indices to entries: the coordinates of
    ``delta(basis[c]) mod m^k``.
    """

    def __init__(self, delta: Derivation, k: int):
        if not delta.is_singular():
            raise InputError("the induced map needs a singular derivation")
        if delta.prec < k:
            raise InputError(f"derivation only known mod m^{delta.prec}, need m^{k}")
        n = delta.nvars
        dim = comb(n + k - 1, n)
        if dim > MAX_QUOTIENT_DIM:
            raise InputError(f"dim O/m^{k} = {dim} exceeds the limit {MAX_QUOTIENT_DIM}")
        self.k = k
        self.nvars = n
        self.basis = monomials_below(n, k)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.degrees = [sum(m) for m in self.basis]
        coeffs = [[(m, _q(c)) for m, c in a.terms.items() if sum(m) < k] for a in delta.coeffs]
        cols = []
        for mon in self.basis:
            col: dict = {}
            dmon = sum(mon)
            for j, e in enumerate(mon):
                if not e:
                    continue
                base = list(mon)
                base[j] -= 1
                for m, c in coeffs[j]:
                    if dmon - 1 + sum(m) >= k:
                        continue
                    r = self.index[tuple(a + b for a, b in zip(base, m))]
                    v = col.get(r, 0) + e * c
                    if v:
                        col[r] = v
                    else:
                        col.pop(r, None)
            cols.append(col)
        self.columns = cols

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> list[list[Fraction]]:
        """Dense matrix with ``Fraction`` entries."""
        out = zeros(self.dim, self.dim)
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = _frac(v)
        return out

    def blocks(self) -> list[list[int]]:
        """Index ranges of the homogeneous degrees (diagonal blocks)."""
        out: list[list[int]] = []
        for i, d in enumerate(self.degrees):
            if d == len(out):
                out.append([])
            out[d].append(i)
        return out

    def diagonal_block(self, idx: Sequence[int]) -> list[list]:
        pos = {r: i for i, r in enumerate(idx)}
        out = [[QQ(0)] * len(idx) for _ in idx]
        for j, c in enumerate(idx):
            for r, v in self.columns[c].items():
                i = pos.get(r)
                if i is not None:
                    out[i][j] = v
        return out

    def apply(self, vec: dict) -> dict:
        return _matvec(self.columns, vec)


def induced_map(delta: Derivation, k: int) -> InducedMap:
    return InducedMap(delta, k)


def _matvec(columns, vec: dict) -> dict:
    out: dict = {}
    for c, x in vec.items():
        for r, v in columns[c].items():
            s = out.get(r, 0) + x * v
            if s:
                out[r] = s
            else:
                out.pop(r, None)
    return out


def _coeffs(p: Poly) -> list:
    """Coefficients (highest degree first) as ground-domain elements."""
    return p.rep.to_list() or [QQ(0)]


def _poly(coeffs_low_to_high) -> Poly:
    return Poly([_q(c) for c in reversed(coeffs_low_to_high)], _t, domain=QQ)


def _dense_charpoly(a) -> Poly:
    return Poly(list(reversed(charpoly(a, _q))), _t, domain=QQ)


def _horner_dense(coeffs_high_to_low, a):
    n = len(a)
    result = [[QQ(0)] * n for _ in range(n)]
    for c in coeffs_high_to_low:
        result = _mm(result, a)
        for i in range(n):
            result[i][i] += c
    return result


def _mm(a, b):
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [QQ(0)] * n
        for x, brow in zip(row, b):
            if x:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def _nilpotency_index(a) -> int:
    n = len(a)
    if n == 0:
        return 1
    power = a
    for e in range(1, n + 1):
        if all(not x for row in power for x in row):
            return e
        power = _mm(power, a)
    raise InternalInconsistency("matrix expected to be nilpotent is not")


def _columns_of(a) -> list[dict]:
    return [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(len(a))]


def _sparse_nilpotency_index(columns: list[dict], coeffs_high_to_low) -> int:
    """Nilpotency index of ``q(A)`` for ``A`` given by sparse columns."""
    n = len(columns)
    qcols = [_horner_apply(columns, coeffs_high_to_low, {c: QQ(1)}) for c in range(n)]
    vecs = [v for v in qcols if v]
    e = 1
    while vecs:
        e += 1
        if e > n + 1:
            raise InternalInconsistency("matrix expected to be nilpotent is not")
        vecs = [w for w in (_matvec(qcols, v) for v in vecs) if w]
    return e


def _eval_mod(p: Poly, a: Poly, modulus: Poly) -> Poly:
    """``p(a) mod modulus`` by Horner's rule."""
    out = Poly(0, _t, domain=QQ)
    for c in _coeffs(p):
        out = (out * a + c).rem(modulus)
    return out


def _newton_root(p: Poly, e: int) -> Poly:
    """``a`` in ``Q[t]/(p^e)`` with ``a = t mod p`` and ``p(a) = 0 mod p^e``.

    Precision doubles each round; the inverse of ``p'(a)`` is carried along
    by its own Newton update, starting from a Bezout inverse modulo ``p``.
    """
    a = Poly(_t, _t, domain=QQ)
    if e <= 1:
        return a
    dp = p.diff(_t)
    w = invert(dp, p)
    prec = 1
    while prec < e:
        prec = min(2 * prec, e)
        modulus = p ** prec
        a = (a - _eval_mod(p, a, modulus) * w).rem(modulus)
        w = (w * (2 - _eval_mod(dp, a, modulus) * w)).rem(modulus)
    if not _eval_mod(p, a, p ** e).is_zero:
        raise InternalInconsistency("Newton iteration did not converge")
    return a


def _semisimple_polynomial(char_blocks: Sequence[Poly], block_cols: Sequence | None) -> tuple[Poly, Poly, int]:
    """Squarefree part ``p``, exponent ``e`` and the Newton root ``a``.

    ``char_blocks`` are characteristic polynomials of the diagonal blocks of a
    block triangular matrix (sparse columns in ``block_cols``).  ``p(M)^e = 0``
    holds for ``e`` the smaller of the summed block indices and the largest
    root multiplicity of the whole characteristic polynomial.
    """
    p = Poly(1, _t, domain=QQ)
    total = Poly(1, _t, domain=QQ)
    block_sum = 0
    for i, chi in enumerate(char_blocks):
        if chi.degree() <= 0:
            continue
        total = total * chi
        q = chi.sqf_part()
        p = p.lcm(q)
        if q.degree() == chi.degree():
            block_sum += 1
        elif block_cols is not None:
            block_sum += _sparse_nilpotency_index(block_cols[i], _coeffs(q.monic()))
        else:
            block_sum += max(m for _, m in chi.sqf_list()[1])
    p = p.monic()
    # group roots by their multiplicity i in the full characteristic polynomial;
    # (t - lambda)^min(i, block_sum) then annihilates each generalized eigenspace
    t = Poly(_t, _t, domain=QQ)
    a, modulus, e = t, Poly(1, _t, domain=QQ), 1
    groups = total.sqf_list()[1] if total.degree() > 0 else []
    for q, i in sorted(groups, key=lambda g: g[1]):
        ei = max(min(i, block_sum), 1)
        e = max(e, ei)
        qe = q.monic() ** ei
        root = _newton_root(q.monic(), ei)
        if modulus.degree() > 0:
            # CRT: keep a mod the previous moduli, match root mod qe
            inv = invert(modulus.rem(qe), qe)
            root = a + modulus * ((root - a) * inv).rem(qe)
        a, modulus = root, modulus * qe
    return p, a.rem(modulus) if modulus.degree() > 0 else a, e


def _max_multiplicity(chi: Poly) -> int:
    if chi.degree() <= 0:
        return 1
    return max(m for _, m in chi.sqf_list()[1])


def _as_fractions(a) -> list[list[Fraction]]:
    return [[_frac(x) if not isinstance(x, Fraction) else x for x in row] for row in a]


def matrix_jordan_chevalley(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Split ``M = S + N`` with ``S`` semisimple, ``N`` nilpotent, ``SN = NS``.

    Both parts are polynomials in ``M`` over Q; no eigenvalues are computed.
    """
    n = len(m)
    if n == 0:
        return [], []
    mq = [[_q(Fraction(x)) for x in row] for row in m]
    chi = _poly(charpoly([[Fraction(x) for x in row] for row in m]))
    p, a, e = _semisimple_polynomial([chi], None)
    if e == 1:
        s = mq
    else:
        s = _horner_dense(_coeffs(a), mq)
    s = _as_fractions(s)
    nil = [[Fraction(x) - y for x, y in zip(r1, r2)] for r1, r2 in zip(m, s)]
    return s, nil


@dataclass(frozen=True)
class SNDecomposition:
    """``delta = semisimple + nilpotent`` modulo ``m^k``, with the checks that passed."""

    semisimple: Derivation
    nilpotent: Derivation
    k: int
    checks: dict = field(default_factory=dict)


def _read_derivation(vectors: Sequence[dict], basis, n: int, k: int) -> Derivation:
    return Derivation([Series({basis[r]: _frac(v) for r, v in vec.items()}, n, k) for vec in vectors])


def _commutes(a: InducedMap, b: InducedMap) -> bool:
    for c in range(a.dim):
        unit = {c: QQ(1)}
        if _matvec(a.columns, _matvec(b.columns, unit)) != _matvec(b.columns, _matvec(a.columns, unit)):
            return False
    return True


def sn_decompose(delta: Derivation, k: int, validate: bool = True) -> SNDecomposition:
    """Jordan-Chevalley splitting of a singular derivation modulo ``m^k``."""
    if not delta.is_singular():
        raise InputError("sn_decompose needs a singular derivation")
    if k < 2:
        raise InputError("truncation order must be at least 2")
    n = delta.nvars
    delta = delta.truncate(k)
    mp = InducedMap(delta, k)
    blocks = mp.blocks()
    mats = [mp.diagonal_block(b) for b in blocks]
    chars = [_dense_charpoly(b) for b in mats]
    p, a, e = _semisimple_polynomial(chars, [_columns_of(b) for b in mats])
    coords = [mp.index[tuple(1 if i == j else 0 for i in range(n))] for j in range(n)]
    if p == Poly(_t, _t, domain=QQ):
        images = [{} for _ in coords]
    elif e == 1:
        images = [mp.columns[c] for c in coords]
    else:
        coeffs = _coeffs(a)
        images = [_horner_apply(mp.columns, coeffs, {c: QQ(1)}) for c in coords]
    ds = _read_derivation(images, mp.basis, n, k)
    dn = delta - ds
    checks = {"newton_exponent": e, "squarefree_degree": p.degree()}
    if validate:
        _validate(delta, ds, dn, mp, p, a, k, checks)
    return SNDecomposition(ds, dn, k, checks)


def _horner_apply(columns, coeffs_high_to_low, vec: dict) -> dict:
    """``q(A) vec`` through the Krylov vectors ``A^i vec``.

    Krylov vectors keep the small entries of ``A``; only the final linear
    combination meets the (often large) coefficients of ``q``.
    """
    out: dict = {}
    power = vec
    for c in reversed(coeffs_high_to_low):
        if c:
            for r, x in power.items():
                s = out.get(r, 0) + c * x
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        power = _matvec(columns, power)
        if not power:
            break
    return out


def _validate(delta, ds, dn, mp, p, a, k, checks):
    if (ds + dn).truncate(k) != delta:
        raise InternalInconsistency("S + N does not reproduce the derivation")
    checks["sum"] = True
    if not bracket(ds, dn).truncate(k).is_zero():
        raise InternalInconsistency("[S, N] is not zero")
    checks["commute"] = True
    if not matrix_is_nilpotent(dn.linear_part()):
        raise InternalInconsistency("linear part of N is not nilpotent")
    checks["nilpotent_linear_part"] = True
    sp = InducedMap(ds, k)
    if not _commutes(sp, mp):
        raise InternalInconsistency("induced S does not commute with the induced map")
    nil_cols = [dict(c) for c in mp.columns]
    for c, col in enumerate(sp.columns):
        for r, v in col.items():
            s = nil_cols[c].get(r, 0) - v
            if s:
                nil_cols[c][r] = s
            else:
                nil_cols[c].pop(r, None)
    for b in mp.blocks():
        pos = {r: i for i, r in enumerate(b)}
        block = [{pos[r]: v for r, v in nil_cols[c].items() if r in pos} for c in b]
        _sparse_nilpotency_index(block, [QQ(1), QQ(0)])
    checks["nilpotent_induced"] = True
    # Leibniz read-off: S built as a derivation agrees with a(M) on degree-2 classes;
    # agreement in all degrees follows from the commute, nilpotent and semisimple
    # checks by uniqueness of the decomposition
    coeffs = _coeffs(a)
    for c, mon in enumerate(mp.basis):
        if sum(mon) == 2:
            if _horner_apply(mp.columns, coeffs, {c: QQ(1)}) != sp.columns[c]:
                raise InternalInconsistency("semisimple part is not a derivation")
    checks["leibniz_sample"] = True
    pcoef = _coeffs(p)
    for c in range(sp.dim):
        if _horner_apply(sp.columns, pcoef, {c: QQ(1)}):
            raise InternalInconsistency("semisimple part is not semisimple")
    checks["semisimple"] = True


def is_nilpotent(delta: Derivation) -> bool:
    """Topological nilpotency: the linear part is a nilpotent matrix."""
    if not delta.is_singular():
        raise InputError("nilpotency is defined for singular derivations")
    return matrix_is_nilpotent(delta.linear_part())


def induced_is_nilpotent(delta: Derivation, k: int) -> bool:
    """Whether the induced map on ``O/m^k`` is nilpotent (checked block by block)."""
    if not delta.is_singular():
        raise InputError("induced maps are defined for singular derivations")
    mp = InducedMap(delta.truncate(k), k)
    return all(matrix_is_nilpotent(_as_fractions(mp.diagonal_block(b))) for b in mp.blocks())


def is_semisimple_at(delta: Derivation, k: int) -> bool:
    """Whether the induced map on ``O/m^k`` has squarefree minimal polynomial."""
    if not delta.is_singular():
        raise InputError("semisimplicity is defined for singular derivations")
    mp = InducedMap(delta.truncate(k), k)
    p = Poly(1, _t, domain=QQ)
    for b in mp.blocks():
        chi = _dense_charpoly(mp.diagonal_block(b))
        if chi.degree() > 0:
            p = p.lcm(chi.sqf_part())
    coeffs = _coeffs(p.monic())
    return all(not _horner_apply(mp.columns, coeffs, {c: QQ(1)}) for c in range(mp.dim))


def nilpotent_cofactor_check(delta: Derivation, f: Series, k=None) -> bool:
    """For nilpotent logarithmic ``delta`` the cofactor vanishes at the origin."""
    from .logmodule import cofactor

    if not is_nilpotent(delta):
        raise InputError("derivation is not nilpotent")
    w = cofactor(delta, f, k)
    if w is None:
        raise InputError("derivation is not logarithmic")
    return not w.cofactor.constant_term()


def diagonal_coordinates(delta: Derivation, k: int) -> tuple[list[Series], list[Fraction]]:
    """Coordinates ``y_i`` with ``delta_S(y_i) = lambda_i y_i mod m^k``.

    Needs rational eigenvalues of the linear part; raises
    :class:`UnsupportedEigenvalues` otherwise.
    """
    n = delta.nvars
    dec = sn_decompose(delta, k)
    lin = dec.semisimple.linear_part()
    chi = _poly(charpoly(lin))
    roots = []
    for fac, mult in chi.factor_list()[1]:
        if fac.degree() != 1:
            raise UnsupportedEigenvalues(f"characteristic polynomial has factor {fac.as_expr()}")
        c1, c0 = fac.all_coeffs()
        roots.append((_frac(-c0 / c1), mult))
    mp = InducedMap(dec.semisimple, k)
    ys, weights = [], []
    for lam, _ in sorted(roots):
        lq = _q(lam)
        # eigenvectors of the linear part: linear forms l with delta_S(l) = lam*l mod m^2
        rows_lin = []
        for i in range(n):
            rows_lin.append({j: lin[i][j] - (lam if i == j else 0) for j in range(n)})
        from .linalg import sparse_nullspace
        for vec in sparse_nullspace(rows_lin, list(range(n))):
            ell = {mp.index[tuple(1 if i == j else 0 for i in range(n))]: _q(v) for j, v in vec.items()}
            # solve (S - lam) h = -(S - lam) ell with h of degree >= 2
            target = _matvec(mp.columns, ell)
            for r, v in ell.items():
                target[r] = target.get(r, 0) - lq * v
            higher = [c for c in range(mp.dim) if mp.degrees[c] >= 2]
            rows = {}
            for c in higher:
                col = dict(mp.columns[c])
                col[c] = col.get(c, 0) - lq
                for r, v in col.items():
                    if v:
                        rows.setdefault(r, {})[c] = _frac(v)
            keys = sorted(set(rows) | set(target))
            sol = sparse_solve([rows.get(r, {}) for r in keys], [-_frac(target.get(r, 0)) for r in keys], higher)
            if sol is None:
                raise InternalInconsistency("semisimple part has no eigenvector extension")
            terms = {mp.basis[r]: _frac(v) for r, v in ell.items()}
            terms.update({mp.basis[c]: v for c, v in sol.items()})
            ys.append(Series(terms, n, k))
            weights.append(lam)
    return ys, weights

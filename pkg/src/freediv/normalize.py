"""Normal forms: diagonal unit extraction and plane-curve basis normalization."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .derivation import Derivation
from .errors import CertificationError, Inconclusive, InputError, InternalInconsistency
from .linalg import identity, inverse, rank
from .logmodule import SaitoBasis, certify_saito, cofactor
from .pseries import EXACT, Series, compose, exp, invert_unit, order, sharp_mul, weight

NOT_MONOMIAL_TYPE = "NOT_MONOMIAL_TYPE"
CASE_1 = "CASE_1"
CASE_2 = "CASE_2"


@dataclass(frozen=True)
class DiagNormalization:
    """``f = unit * normalized`` with ``delta_lambda(normalized) = eigenvalue * normalized`` mod ``m^k``.

    ``resonant_part`` is the weight-zero part of the cofactor, which must
    reduce to the constant ``eigenvalue``; it is known modulo
    ``m^cofactor_precision``.
    """

    unit: Series
    normalized: Series
    eigenvalue: Fraction
    k: int
    weights: tuple
    cofactor: Series
    resonant_part: Series
    cofactor_precision: object
    note: str = "eigen-decomposition uniqueness is certified modulo m^k only"


def _check_weights(weights: Sequence, n: int) -> tuple:
    if len(weights) != n:
        raise InputError(f"expected {n} weights, got {len(weights)}")
    return tuple(Fraction(w) for w in weights)


def diag_normalize(weights: Sequence, f: Series, c: Series | None = None, k: int = 8) -> DiagNormalization:
    """Split off a unit so that the remaining factor is an eigenvector of ``sum w_i x_i d_i``.

    ``c`` is the cofactor of ``delta_lambda`` on ``f``.  By default it is
    recomputed; for a polynomial ``f`` it is then known modulo ``m^k``.
    """
    n = f.nvars
    lam = _check_weights(weights, n)
    if k < 1:
        raise InputError("truncation order must be positive")
    if f.is_zero():
        raise InputError("f must be nonzero")
    delta = Derivation.diagonal(lam)
    if c is None:
        kk = k + order(f) if f.is_exact else k
        w = cofactor(delta, f, kk)
        if w is None:
            raise InputError("the diagonal derivation is not logarithmic for f")
        c = w.cofactor
    elif c.nvars != n:
        raise InputError(f"cofactor lives in {c.nvars} variables, expected {n}")
    lhs = delta.apply(f)
    rhs = sharp_mul(c, f)
    kc = min(k, lhs.prec, rhs.prec)
    if kc < k or not (lhs - rhs).truncate(k).is_zero():
        raise InputError(f"delta_lambda(f) is not c*f modulo m^{k}")
    cprec = min(c.prec, k)
    c0 = c.constant_term()
    b_terms, resonant = {}, {}
    for mon, v in c.truncate(cprec).terms.items():
        wt = weight(mon, lam)
        if wt:
            b_terms[mon] = v / wt
        else:
            resonant[mon] = v
    b = Series(b_terms, n, cprec)
    u = exp(b, cprec)
    g = sharp_mul(invert_unit(u, cprec), f).truncate(k)
    res = Series(resonant, n, cprec)
    if res != Series.constant(c0, n, cprec):
        raise InternalInconsistency("weight-zero part of the cofactor is not its constant term")
    dg = delta.apply(g)
    if not (dg - g.scale(c0)).truncate(k).is_zero():
        raise InternalInconsistency("normalized factor is not an eigenvector")
    if not (sharp_mul(u, g) - f).truncate(k).is_zero():
        raise InternalInconsistency("u*g differs from f")
    return DiagNormalization(u, g, c0, k, lam, c, res, cprec)


def eigen_support_factor(g: Series, weights: Sequence):
    """Write an annihilated plane germ as ``v * x^p * y^q`` with ``v`` a unit.

    Returns ``(p, q, v)`` or ``NOT_MONOMIAL_TYPE`` when the support of ``g``
    is not on the ray of ``(p, q)``.
    """
    if g.nvars != 2:
        raise InputError("eigen_support_factor works in two variables")
    lam = _check_weights(weights, 2)
    if not any(lam):
        raise InputError("weights must not all vanish")
    if g.is_zero():
        raise InputError("g must be nonzero")
    if not Derivation.diagonal(lam).apply(g).is_zero():
        raise InputError("g is not annihilated by the diagonal derivation")
    # primitive integer solutions of alpha . lambda = 0 span a line
    l1, l2 = lam
    den = l1.denominator * l2.denominator
    a1, a2 = int(l1 * den), int(l2 * den)
    p, q = a2, -a1
    h = gcd(p, q)
    p, q = p // h, q // h
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    if all(not any(m) for m in g.terms):
        return 0, 0, g
    if p < 0 or q < 0:
        return NOT_MONOMIAL_TYPE
    ks = set()
    for m in g.terms:
        if m[0] * q != m[1] * p:
            return NOT_MONOMIAL_TYPE
        ks.add(m[0] // p if p else m[1] // q)
    t = min(ks)
    p, q = t * p, t * q
    v = Series({(m[0] - p, m[1] - q): c for m, c in g.terms.items()}, 2, g.prec - p - q)
    if not v.constant_term():
        return NOT_MONOMIAL_TYPE
    return p, q, v


@dataclass(frozen=True)
class RankBMatrix:
    """Linear-part coefficients ``(a_i, b_i, c_i, d_i)`` of two plane derivations."""

    rows: tuple

    def as_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]


def _abcd(delta: Derivation) -> tuple:
    lin = delta.linear_part()
    return lin[0][0], lin[1][0], lin[0][1], lin[1][1]


def rank_B(basis) -> tuple[RankBMatrix, int]:
    """The matrix ``B`` of linear-part coefficients and its rank."""
    derivs = basis.derivations if isinstance(basis, SaitoBasis) else tuple(basis)
    if len(derivs) != 2 or any(d.nvars != 2 for d in derivs):
        raise InputError("rank_B needs two plane derivations")
    if not all(d.is_singular() for d in derivs):
        raise InputError("rank_B needs singular derivations")
    b = RankBMatrix(tuple(_abcd(d) for d in derivs))
    return b, rank(b.as_lists())


@dataclass(frozen=True)
class LinearChange:
    """New coordinates ``x'_i = sum matrix[i][j] x_j``."""

    matrix: tuple
    description: str

    @classmethod
    def identity(cls) -> "LinearChange":
        return cls(tuple(tuple(r) for r in identity(2)), "identity")


def _substitution(change: LinearChange) -> list[Series]:
    inv = inverse([list(r) for r in change.matrix])
    n = len(inv)
    return [Series({tuple(1 if t == j else 0 for t in range(n)): inv[i][j] for j in range(n) if inv[i][j]}, n)
            for i in range(n)]


def change_series(f: Series, change: LinearChange) -> Series:
    """``f`` written in the new coordinates."""
    return compose(f, _substitution(change), f.prec)


def change_derivation(delta: Derivation, change: LinearChange) -> Derivation:
    """``delta`` written in the new coordinates: ``delta(x'_i)`` in terms of ``x'``."""
    subs = _substitution(change)
    n = delta.nvars
    out = []
    for i in range(n):
        img = Series.zero(n)
        for j in range(n):
            if change.matrix[i][j]:
                img = img + delta.coeffs[j].scale(change.matrix[i][j])
        out.append(compose(img, subs, img.prec))
    return Derivation(out)


@dataclass(frozen=True)
class PlaneBasisNormalForm:
    kind: str
    transformed_basis: tuple
    coordinate_change: LinearChange
    f: Series
    parameter: Fraction | None = None
    certified: SaitoBasis | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NormalizationPlan:
    """Outcome of the linear case analysis on ``B``.

    The new pair is ``combos[i][0] * delta_1 + combos[i][1] * delta_2``,
    written in the coordinates of ``change``.
    """

    kind: str
    combos: tuple
    change: LinearChange
    parameter: Fraction | None = None


_SWAP = LinearChange(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))), "x' = y, y' = x")


def plane_normalization_plan(b: Sequence[Sequence]) -> NormalizationPlan:
    """Case analysis on the linear-part coefficients ``B`` of a plane basis.

    Assumes the relations forced by ``det(A) = unit * f`` with ``f`` in
    ``m^3``; the caller re-checks the declared linear parts.  A zero-linear
    element is preferred whenever one is available.
    """
    (a1, b1, c1, d1), (a2, b2, c2, d2) = [[Fraction(v) for v in row] for row in b]
    one, zero = Fraction(1), Fraction(0)
    ident = LinearChange.identity()
    if not (a1 or b1 or c1 or d1):
        return NormalizationPlan(CASE_1, ((one, zero), (zero, one)), ident)
    if not (a2 or b2 or c2 or d2):
        return NormalizationPlan(CASE_1, ((zero, one), (one, zero)), ident)
    det_ab = a2 * b1 - a1 * b2
    e1, e2 = (a2, -a1), (-b2, b1)
    if det_ab:
        par = (a2 * d1 - a1 * d2) / det_ab
        change = LinearChange(((one, zero), (-par, one)), "x' = x, y' = y - a*x")
        combos = (tuple(v / det_ab for v in e2), tuple(v / det_ab for v in e1))
        return NormalizationPlan(CASE_2, combos, change, par)
    for pivot, z, other in ((a1, e1, (one, zero)), (a2, e1, (zero, one)),
                            (b1, e2, (one, zero)), (b2, e2, (zero, one))):
        if pivot:
            return NormalizationPlan(CASE_1, (z, other), ident)
    det_cd = c2 * d1 - c1 * d2
    if det_cd:
        combos = ((c2 / det_cd, -c1 / det_cd), (-d2 / det_cd, d1 / det_cd))
        return NormalizationPlan(CASE_2, combos, _SWAP, zero)
    # (c2, d2) = eta (c1, d1) with (c1, d1) nonzero
    eta = c2 / c1 if c1 else d2 / d1
    return NormalizationPlan(CASE_1, ((eta, -one), (one, zero)), ident)


def _has_zero_linear_part(d: Derivation) -> bool:
    return not any(any(row) for row in d.linear_part())


def _declared_linear_parts_hold(kind: str, pair, parameter) -> bool:
    if kind == CASE_1:
        return _has_zero_linear_part(pair[0])
    return (_abcd(pair[0]) == (1, 0, 0, 0)
            and _abcd(pair[1]) == (parameter, 1, 0, 0))


def normalize_plane_basis(f: Series, basis: SaitoBasis) -> PlaneBasisNormalForm:
    """Bring a plane-curve basis to one of the two linear normal forms.

    ``CASE_1``: the first element has zero linear part.  ``CASE_2``: linear
    parts ``x dx`` and ``(a x + y) dx`` in new coordinates.  The result is
    re-certified as a basis.
    """
    if f.nvars != 2 or basis.nvars != 2:
        raise InputError("normalize_plane_basis works in two variables")
    if order(f) < 3:
        raise InputError("f must lie in m^3")
    d1, d2 = basis.derivations
    if not (d1.is_singular() and d2.is_singular()):
        raise InputError("a basis of a non-product germ consists of singular derivations")
    k = None if basis.validity == EXACT else basis.validity
    matrix, _ = rank_B(basis)
    plan = plane_normalization_plan(matrix.rows)
    pair = tuple(change_derivation(d1 * r1 + d2 * r2, plan.change) for r1, r2 in plan.combos)
    g = change_series(f, plan.change)
    if not _declared_linear_parts_hold(plan.kind, pair, plan.parameter):
        raise InternalInconsistency(f"{plan.kind} linear parts do not hold for the transformed pair")
    try:
        certified = certify_saito(g, list(pair), k, check_reduced=False)
    except (CertificationError, Inconclusive) as exc:
        raise InternalInconsistency(f"normalized pair is not a basis: {exc}") from exc
    return PlaneBasisNormalForm(plan.kind, pair, plan.change, g, plan.parameter, certified)


__all__ = [
    "CASE_1", "CASE_2", "NOT_MONOMIAL_TYPE", "DiagNormalization", "LinearChange", "NormalizationPlan",
    "PlaneBasisNormalForm", "RankBMatrix", "change_derivation", "change_series", "diag_normalize",
    "eigen_support_factor", "normalize_plane_basis", "plane_normalization_plan", "rank_B",
]

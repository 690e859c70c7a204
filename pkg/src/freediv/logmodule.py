"""Logarithmic derivations of a divisor germ ``f = 0``.

A derivation ``delta`` is logarithmic when ``delta(f) = a * f``.  This module
finds such derivations with bounded coefficient degree, certifies free bases
with Saito's criterion ``f = u * det(A)`` and splits off trivial factors of
products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .derivation import Derivation
from .errors import CertificationError, Inconclusive, InputError, InternalInconsistency
from .linalg import sparse_nullspace, sparse_rref
from .pseries import (
    EXACT, Series, compose, divide_mod, exact_divide, exp, invert_unit, is_reduced,
    monomials, order, sharp_mul,
)

MAX_GENERATORS = 12


@dataclass(frozen=True)
class LogWitness:
    """``derivation(f) == cofactor * f``, exactly or modulo ``m^validity``."""

    derivation: Derivation
    cofactor: Series
    validity: float | int = EXACT

    def holds_for(self, f: Series) -> bool:
        lhs = self.derivation.apply(f)
        rhs = sharp_mul(self.cofactor, f)
        if self.validity == EXACT:
            return lhs.is_exact and rhs.is_exact and lhs == rhs
        return (lhs - rhs).truncate(self.validity).is_zero() and min(lhs.prec, rhs.prec) >= self.validity


@dataclass(frozen=True)
class SaitoBasis:
    """Certified free basis: ``f == unit * det(saito_matrix)`` (mod ``m^validity``)."""

    derivations: tuple
    saito_matrix: tuple
    determinant: Series
    unit: Series
    witnesses: tuple
    validity: float | int = EXACT

    @property
    def nvars(self) -> int:
        return len(self.derivations)

    def traces(self) -> list[Fraction]:
        return [d.trace() if d.is_singular() else None for d in self.derivations]


def cofactor(delta: Derivation, f: Series, k=None) -> LogWitness | None:
    """Cofactor ``a`` with ``delta(f) = a*f``, or ``None`` if ``delta`` is not logarithmic.

    Exact inputs are handled by polynomial division unless an order ``k`` is
    given; otherwise ``a`` is solved order by order modulo ``m^k``.  Raises
    :class:`Inconclusive` when ``k <= order(f)``.
    """
    if f.is_zero():
        raise InputError("f must be nonzero")
    if delta.nvars != f.nvars:
        raise InputError(f"variable count mismatch: {delta.nvars} vs {f.nvars}")
    if k is None and delta.prec == EXACT and f.is_exact:
        a = exact_divide(delta.apply(f), f)
        return None if a is None else LogWitness(delta, a, EXACT)
    if k is None:
        k = min(delta.prec, f.prec)
    if not delta.is_singular():
        if delta.prec != EXACT:
            raise InputError("truncated cofactor solving needs a singular derivation")
    o = order(f)
    if k <= o:
        raise Inconclusive(f"order(f) = {o} but only m^{k} is known")
    g = delta.apply(f)
    if g.prec < k:
        raise Inconclusive(f"delta(f) is only known mod m^{g.prec}")
    a = divide_mod(g.truncate(k), f.truncate(k), k)
    if a is None:
        return None
    return LogWitness(delta, a, k)


def is_logarithmic(delta: Derivation, f: Series, k=None) -> bool:
    return cofactor(delta, f, k) is not None


def _columns(n: int, d: int):
    """Unknowns of the derivation solver: ``(monomial, variable)`` pairs.

    Ordered by degree, then variable, then monomial (lex-descending), so the
    echelon basis leads with the lowest-degree part of each solution.
    """
    cols = []
    for deg in range(d + 1):
        mons = monomials(n, deg)
        for j in range(n):
            cols.extend(("d", mon, j) for mon in mons)
    return cols


def _primitive(vec: dict) -> dict:
    """Scale to coprime integer entries with a positive leading entry."""
    den = 1
    for v in vec.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in vec.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    return {c: Fraction(v, g) for c, v in ints.items()}


def solve_log_derivations(f: Series, d: int) -> list[LogWitness]:
    """Basis of polynomial logarithmic derivations with coefficient degree ``<= d``.

    Unknowns are the coefficients of ``delta`` and of the cofactor ``a``
    (degree ``<= d - 1``).  The solution space of ``delta(f) - a*f = 0`` is
    returned in echelon form with primitive integer scaling.
    """
    if f.is_zero() or not f.is_exact:
        raise InputError("f must be a nonzero polynomial")
    if d < 1:
        raise InputError("degree bound must be at least 1")
    n = f.nvars
    partials = [f.diff(j) for j in range(n)]
    cols = _columns(n, d)
    for deg in range(d):
        cols.extend(("a", mon, None) for mon in monomials(n, deg))
    rows: dict = {}
    for col in cols:
        kind, mon, j = col
        image = partials[j] if kind == "d" else -f
        for m, c in image.terms.items():
            key = tuple(a + b for a, b in zip(m, mon))
            rows.setdefault(key, {})[col] = c
    kernel = sparse_nullspace(list(rows.values()), cols)
    out = []
    for vec in kernel:
        vec = _primitive(vec)
        coeffs = [dict() for _ in range(n)]
        cof = {}
        for (kind, mon, j), v in vec.items():
            if kind == "d":
                coeffs[j][mon] = v
            else:
                cof[mon] = v
        delta = Derivation([Series(c, n) for c in coeffs])
        out.append(LogWitness(delta, Series(cof, n), EXACT))
    return out


def saito_matrix(derivations: Sequence[Derivation]) -> list[list[Series]]:
    """``A[i][j] = delta_i(x_j)``, the coefficient of ``d_j`` in ``delta_i``."""
    return [list(d.coeffs) for d in derivations]


def series_det(a: Sequence[Sequence[Series]]) -> Series:
    """Determinant of a small square matrix of series by permutation expansion."""
    n = len(a)
    nvars = a[0][0].nvars
    total = None
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Series.one(nvars)
        for i, j in enumerate(perm):
            term = sharp_mul(term, a[i][j])
            if term.is_zero() and term.is_exact:
                break
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total


def certify_saito(f: Series, candidates: Sequence, k=None, check_reduced: bool = True,
                  unit_order: int = 8) -> SaitoBasis:
    """Certify ``candidates`` (derivations or witnesses) as a free basis of ``Der_f``.

    With ``k`` given, every check is modulo ``m^k``; otherwise exact.  A
    non-constant quotient ``det(A)/f`` makes the unit a genuine power series,
    which is then reported modulo ``m^unit_order``.
    """
    n = f.nvars
    if len(candidates) != n:
        raise InputError(f"need exactly {n} candidates, got {len(candidates)}")
    if check_reduced:
        if not is_reduced(f.exact() if k is not None else f):
            raise CertificationError("NOT_REDUCED", detail="f has a repeated factor")
    witnesses = []
    for i, c in enumerate(candidates):
        delta = c.derivation if isinstance(c, LogWitness) else c
        w = cofactor(delta, f, k)
        if w is None:
            raise CertificationError("NOT_LOGARITHMIC", i, f"candidate {i} is not logarithmic")
        witnesses.append(w)
    derivs = [w.derivation for w in witnesses]
    a = saito_matrix(derivs)
    det = series_det(a)
    if k is None and det.is_exact:
        q = exact_divide(det, f)
        if q is None or not q.constant_term():
            raise CertificationError("DET_NOT_UNIT_MULTIPLE", detail="det(A) is not a unit multiple of f")
        if q.degree() == 0:
            unit = Series.constant(1 / q.constant_term(), n)
        else:
            unit = invert_unit(q, unit_order)
        validity = EXACT
    else:
        if k is None:
            k = det.prec
        o = order(f)
        if k <= o:
            raise Inconclusive(f"order(f) = {o} but only m^{k} is known")
        q = divide_mod(det.truncate(k), f.truncate(k), k)
        if q is None or not q.constant_term():
            raise CertificationError("DET_NOT_UNIT_MULTIPLE", detail=f"det(A) is not a unit multiple of f mod m^{k}")
        unit = invert_unit(q, q.prec)
        validity = k
    return SaitoBasis(tuple(derivs), tuple(tuple(r) for r in a), det, unit, tuple(witnesses), validity)


def _as_vector(delta: Derivation) -> dict:
    return {(j, m): c for j, s in enumerate(delta.coeffs) for m, c in s.terms.items()}


def minimal_generators(generators: Sequence[LogWitness]) -> list[LogWitness]:
    """Drop generators lying in the span of the kept ones and their monomial multiples.

    Over polynomial generators this keeps a set whose images span
    ``M / m M`` whenever the input spans ``M``.
    """
    top = max((c.degree() for w in generators for c in w.derivation.coeffs if c.terms), default=0)
    kept: list[LogWitness] = []
    span: list[dict] = []
    rank = 0
    for w in generators:
        vec = _as_vector(w.derivation)
        if not vec or len(sparse_rref(span + [vec])[1]) == rank:
            continue
        kept.append(w)
        delta = w.derivation
        n = delta.nvars
        span.append(vec)
        for deg in range(1, top + 1):
            for mon in monomials(n, deg):
                span.append(_as_vector(Series.monomial(mon) * delta))
        span = sparse_rref(span)[0]
        rank = len(span)
    return kept


def extract_basis(f: Series, generators: Sequence[LogWitness], k=None) -> SaitoBasis | None:
    """First ``n``-subset (lexicographic on indices) that certifies, or ``None``.

    More than ``MAX_GENERATORS`` exact generators are first thinned with
    :func:`minimal_generators`.
    """
    n = f.nvars
    gens = list(generators)
    if len(gens) > MAX_GENERATORS and all(w.derivation.prec == EXACT for w in gens):
        gens = minimal_generators(gens)
    if len(gens) > MAX_GENERATORS:
        raise InputError(f"subset search is capped at {MAX_GENERATORS} generators, got {len(gens)}")
    for subset in combinations(range(len(gens)), n):
        try:
            return certify_saito(f, [gens[i] for i in subset], k, check_reduced=False)
        except CertificationError:
            continue
    return None


def is_product(f: Series, d: int, generators: Sequence[LogWitness] | None = None):
    """``(True, witness)`` if a logarithmic derivation of degree ``<= d`` is non-singular.

    ``(False, None)`` only says that no such derivation exists at this bound.
    """
    if generators is None:
        generators = solve_log_derivations(f, d)
    for w in generators:
        if not w.derivation.is_singular():
            return True, w
    return False, None


@dataclass(frozen=True)
class ProductSplit:
    """``f(change(y)) == unit(y) * g(y) mod m^k`` with ``g`` free of ``y[axis]``."""

    change: tuple
    g: Series
    unit: Series
    axis: int
    k: int


def _integrate(s: Series, i: int) -> Series:
    terms = {}
    for m, c in s.terms.items():
        mm = list(m)
        mm[i] += 1
        terms[tuple(mm)] = c / mm[i]
    return Series(terms, s.nvars, s.prec + 1)


def split_product(f: Series, witness: LogWitness, k: int) -> ProductSplit:
    """Straighten a non-singular logarithmic derivation by its flow.

    With ``p`` an index where ``delta`` does not vanish at the origin, the map
    ``psi(y, t) = exp(t delta)(x)`` restricted to ``x_p = 0`` (``t`` taking the
    slot ``p``) is a formal coordinate change with ``delta = d/dt``.  Along
    the flow ``f`` satisfies ``df/dt = a f``, so
    ``f(psi) = exp(int_0^t a(psi)) * f|_{x_p = 0}``.
    """
    delta = witness.derivation
    if delta.is_singular():
        raise InputError("split_product needs a non-singular witness")
    if not f.is_exact or delta.prec != EXACT:
        raise InputError("split_product needs a polynomial f and derivation")
    n = f.nvars
    p = next(i for i, c in enumerate(delta.constant_part()) if c)
    t = Series.var(p, n)
    change = []
    for i in range(n):
        total = Series.zero(n, k)
        term = Series.var(i, n)
        fact = 1
        for r in range(k):
            if r:
                term = delta.apply(term)
                fact *= r
            if term.is_zero():
                break
            piece = term.subs_zero(p).truncate(k - r)
            total = total + sharp_mul(piece, t ** r).scale(Fraction(1, fact))
        change.append(total)
    g = f.subs_zero(p)
    a_flow = compose(witness.cofactor, change, k - 1) if k > 1 else Series.zero(n, 0)
    unit = exp(_integrate(a_flow, p).truncate(k), k)
    lhs = compose(f, change, k)
    if not (lhs - unit * g.truncate(k)).truncate(k).is_zero():
        raise InternalInconsistency("flow-box splitting failed to reproduce f")
    return ProductSplit(tuple(change), g, unit, p, k)

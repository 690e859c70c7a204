"""Exact multivariate polynomials and truncated power series over Q.

A :class:`Series` is a finite map from exponent tuples to ``Fraction``
coefficients together with a precision ``prec``.  ``prec == EXACT`` marks a
polynomial; an integer ``prec = k`` means the value is only known modulo
``m^k`` (``m`` the maximal ideal), and no stored monomial has total degree
``>= k``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

EXACT = math.inf
INFINITY = math.inf

Monomial = tuple


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Monomials of total degree ``degree``, lexicographically descending.

    >>> monomials(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def monomials_below(nvars: int, k: int) -> list[tuple[int, ...]]:
    """Basis of ``O/m^k``: monomials of degree ``< k``, ascending by degree."""
    out = []
    for d in range(k):
        out.extend(monomials(nvars, d))
    return out


def _sort_key(mon: tuple[int, ...]):
    return (sum(mon), mon)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Series:
    """Immutable truncated multivariate power series with rational coefficients."""

    __slots__ = ("nvars", "terms", "prec")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None, nvars: int,
                 prec=EXACT):
        if prec != EXACT:
            if int(prec) != prec or prec < 0:
                raise ValueError(f"precision must be a non-negative integer or EXACT, got {prec!r}")
            prec = int(prec)
        clean = {}
        for mon, c in (terms or {}).items():
            mon = tuple(mon)
            if len(mon) != nvars:
                raise ValueError(f"exponent {mon} does not have {nvars} entries")
            if any(e < 0 for e in mon):
                raise ValueError(f"negative exponent in {mon}")
            c = _coerce(c)
            if c and sum(mon) < prec:
                clean[mon] = c
        self.nvars = nvars
        self.terms = clean
        self.prec = prec

    # construction helpers
    @classmethod
    def constant(cls, c, nvars: int, prec=EXACT) -> "Series":
        return cls({(0,) * nvars: c}, nvars, prec)

    @classmethod
    def zero(cls, nvars: int, prec=EXACT) -> "Series":
        return cls({}, nvars, prec)

    @classmethod
    def one(cls, nvars: int, prec=EXACT) -> "Series":
        return cls.constant(1, nvars, prec)

    @classmethod
    def var(cls, i: int, nvars: int, prec=EXACT) -> "Series":
        mon = [0] * nvars
        mon[i] = 1
        return cls({tuple(mon): 1}, nvars, prec)

    @classmethod
    def monomial(cls, mon: Sequence[int], coeff=1, prec=EXACT) -> "Series":
        return cls({tuple(mon): coeff}, len(mon), prec)

    # basic protocol
    @property
    def is_exact(self) -> bool:
        return self.prec == EXACT

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Series.constant(other, self.nvars, self.prec)
        if not isinstance(other, Series):
            return NotImplemented
        return (self.nvars == other.nvars and self.prec == other.prec
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.prec, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = to_string(self)
        if self.is_exact:
            return f"Series({body!r})"
        return f"Series({body!r}, prec={self.prec})"

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self.sorted_terms())

    def sorted_terms(self, descending: bool = True) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical order: graded, then lexicographic on exponents."""
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]), reverse=descending)

    def coeff(self, mon: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(mon), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def valuation(self):
        """Certified lower bound for the order: ``min(order, prec)``."""
        return min(order(self), self.prec)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def homogeneous(self, d: int) -> "Series":
        """Degree-``d`` part (exact polynomial)."""
        if d >= self.prec:
            raise ValueError(f"degree {d} part is not determined mod m^{self.prec}")
        return Series({m: c for m, c in self.terms.items() if sum(m) == d}, self.nvars)

    def truncate(self, k) -> "Series":
        return Series(self.terms, self.nvars, min(self.prec, k))

    def with_prec(self, k) -> "Series":
        """Reinterpret with precision ``k`` (must not exceed the current one)."""
        if k > self.prec:
            raise ValueError("cannot raise the precision of a truncated series")
        return self.truncate(k)

    def exact(self) -> "Series":
        """Forget the truncation marker (the stored polynomial itself)."""
        return Series(self.terms, self.nvars)

    # arithmetic
    def _lift(self, other) -> "Series":
        if isinstance(other, Series):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Series.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Series(terms, self.nvars, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return Series({m: -c for m, c in self.terms.items()}, self.nvars, self.prec)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Series.one(self.nvars, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Series":
        c = _coerce(c)
        return Series({m: c * v for m, v in self.terms.items()}, self.nvars, self.prec)

    def diff(self, i: int) -> "Series":
        """Partial derivative in variable ``i``; precision drops by one."""
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                terms[tuple(mm)] = c * m[i]
        prec = self.prec if self.prec == EXACT else max(self.prec - 1, 0)
        return Series(terms, self.nvars, prec)

    def subs_zero(self, i: int) -> "Series":
        """Set variable ``i`` to zero."""
        return Series({m: c for m, c in self.terms.items() if m[i] == 0}, self.nvars, self.prec)

    def depends_on(self, i: int) -> bool:
        return any(m[i] for m in self.terms)


def mul(a: Series, b: Series) -> Series:
    """Product; the precision is the minimum of the operands' precisions."""
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    prec = min(a.prec, b.prec)
    return Series(_mul_terms(a.terms, b.terms, prec), a.nvars, prec)


def _mul_terms(ta, tb, prec) -> dict:
    out: dict = {}
    if not ta or not tb:
        return out
    if len(ta) > len(tb):
        ta, tb = tb, ta
    tb_items = sorted(tb.items(), key=lambda kv: sum(kv[0]))
    for ma, ca in ta.items():
        da = sum(ma)
        for mb, cb in tb_items:
            if da + sum(mb) >= prec:
                break
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return out


def sharp_mul(a: Series, b: Series) -> Series:
    """Product with the sharp precision ``min(prec_a + v(b), prec_b + v(a))``.

    ``v`` is the certified valuation.  Used where an order-raising factor
    compensates a truncated one (derivation application, brackets).
    """
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")
    prec = min(a.prec + b.valuation(), b.prec + a.valuation())
    return Series(_mul_terms(a.terms, b.terms, prec), a.nvars, prec)


def order(s: Series):
    """Minimal total degree of the stored terms, ``INFINITY`` for zero."""
    if not s.terms:
        return INFINITY
    return min(sum(m) for m in s.terms)


def initial_form(s: Series) -> Series:
    """Lowest-degree homogeneous part of a nonzero series."""
    if not s.terms:
        raise ValueError("the zero series has no initial form")
    return s.homogeneous(order(s))


def congruent(a: Series, b: Series, k) -> bool:
    """``a == b mod m^k``; both operands must be known to that precision."""
    if min(a.prec, b.prec) < k:
        raise ValueError(f"operands only known mod m^{min(a.prec, b.prec)}, cannot compare mod m^{k}")
    return (a - b).truncate(k).is_zero()


def invert_unit(u: Series, k) -> Series:
    """Inverse of a unit modulo ``m^k`` by order-by-order recursion."""
    u0 = u.constant_term()
    if not u0:
        raise ValueError("not a unit: constant term is zero")
    if k > u.prec:
        raise ValueError(f"unit only known mod m^{u.prec}, cannot invert mod m^{k}")
    if k == EXACT:
        if u.degree() == 0:
            return Series.constant(1 / u0, u.nvars)
        raise ValueError("the inverse of a non-constant polynomial is not a polynomial; give k")
    n = u.nvars
    by_deg = _graded(u, k)
    inv0 = 1 / u0
    parts = [Series.constant(inv0, n)]
    for j in range(1, k):
        acc = Series.zero(n)
        for i in range(1, j + 1):
            if by_deg[i].terms and parts[j - i].terms:
                acc = acc + by_deg[i] * parts[j - i]
        parts.append(acc.scale(-inv0))
    total: dict = {}
    for p in parts:
        total.update(p.terms)
    return Series(total, n, k)


def _graded(s: Series, k) -> list[Series]:
    parts: list[dict] = [dict() for _ in range(k)]
    for m, c in s.terms.items():
        d = sum(m)
        if d < k:
            parts[d][m] = c
    return [Series(p, s.nvars) for p in parts]


def exp(s: Series, k) -> Series:
    """``sum_{j<k} s^j / j!`` modulo ``m^k`` for ``s`` without constant term."""
    if s.constant_term():
        raise ValueError("exp is only defined for series vanishing at the origin")
    if k > s.prec:
        raise ValueError(f"series only known mod m^{s.prec}")
    n = s.nvars
    s = s.truncate(k)
    result = Series.one(n, k)
    power = Series.one(n, k)
    fact = 1
    for j in range(1, k):
        power = power * s
        if power.is_zero():
            break
        fact *= j
        result = result + power.scale(Fraction(1, fact))
    return result


def log1p(s: Series, k) -> Series:
    """``log(1 + s)`` modulo ``m^k`` for ``s`` without constant term."""
    if s.constant_term():
        raise ValueError("log1p is only defined for series vanishing at the origin")
    if k > s.prec:
        raise ValueError(f"series only known mod m^{s.prec}")
    n = s.nvars
    s = s.truncate(k)
    result = Series.zero(n, k)
    power = Series.one(n, k)
    for j in range(1, k):
        power = power * s
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (j + 1), j))
    return result


def weight(mon: Sequence[int], weights: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(w) for a, w in zip(mon, weights)), Fraction(0))


def weight_split(s: Series, weights: Sequence) -> dict[Fraction, Series]:
    """Group the terms of ``s`` by weight ``alpha . weights``.

    Each part is an eigenvector of the diagonal derivation
    ``sum w_i x_i d_i`` with eigenvalue its weight.
    """
    if len(weights) != s.nvars:
        raise ValueError(f"expected {s.nvars} weights, got {len(weights)}")
    groups: dict[Fraction, dict] = {}
    for m, c in s.terms.items():
        groups.setdefault(weight(m, weights), {})[m] = c
    return {mu: Series(t, s.nvars, s.prec) for mu, t in sorted(groups.items())}


def compose(s: Series, subs: Sequence[Series], k) -> Series:
    """``s(subs_1, ..., subs_n)`` modulo ``m^k``.

    Every substituted series must vanish at the origin unless ``s`` is a
    polynomial.
    """
    if len(subs) != s.nvars:
        raise ValueError(f"expected {s.nvars} substitutions, got {len(subs)}")
    if not subs:
        return s
    m = subs[0].nvars
    if not s.is_exact and any(t.constant_term() for t in subs):
        raise ValueError("cannot substitute series with constant terms into a truncated series")
    subs = [t.truncate(k) for t in subs]
    cache: list[dict[int, Series]] = [{0: Series.one(m, k)} for _ in subs]

    def power(i, e):
        table = cache[i]
        if e not in table:
            table[e] = power(i, e - 1) * subs[i]
        return table[e]

    result = Series.zero(m, min(k, s.prec))
    for mon, c in s.terms.items():
        term = Series.constant(c, m, k)
        for i, e in enumerate(mon):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


# exact division and gcd for polynomials

def _lex_lead(p: Series):
    mon = max(p.terms)
    return mon, p.terms[mon]


def exact_divide(p: Series, q: Series) -> Series | None:
    """``p / q`` if ``q`` divides ``p`` exactly (polynomials), else ``None``."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p = p.exact()
    q = q.exact()
    lm_q, lc_q = _lex_lead(q)
    quotient: dict = {}
    rem = dict(p.terms)
    q_items = list(q.terms.items())
    while rem:
        lm = max(rem)
        if any(a < b for a, b in zip(lm, lm_q)):
            return None
        t = tuple(a - b for a, b in zip(lm, lm_q))
        c = rem[lm] / lc_q
        quotient[t] = c
        for mq, cq in q_items:
            mm = tuple(a + b for a, b in zip(mq, t))
            v = rem.get(mm, 0) - c * cq
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return Series(quotient, p.nvars)


def divide_mod(g: Series, f: Series, k) -> Series | None:
    """Solve ``q * f == g mod m^k`` order by order through the initial form of ``f``.

    Returns ``q`` (determined modulo ``m^(k - order(f))``) or ``None`` when
    no solution exists.  Requires ``order(f) < k``.
    """
    o = order(f)
    if o >= k:
        raise ValueError(f"order(f) = {o} is not below k = {k}")
    if min(g.prec, f.prec) < k:
        raise ValueError(f"operands are not known mod m^{k}")
    n = f.nvars
    f_by_deg = _graded(f, k)
    g_by_deg = _graded(g, k)
    for d in range(o):
        if g_by_deg[d].terms:
            return None
    lead = f_by_deg[o]
    qparts: list[Series] = []
    for j in range(k - o):
        target = g_by_deg[o + j]
        for i, qi in enumerate(qparts):
            fd = o + j - i
            if qi.terms and fd < k and f_by_deg[fd].terms:
                target = target - qi * f_by_deg[fd]
        if target.is_zero():
            qparts.append(Series.zero(n))
            continue
        qj = exact_divide(target, lead)
        if qj is None:
            return None
        qparts.append(qj)
    total: dict = {}
    for p in qparts:
        total.update(p.terms)
    return Series(total, n, k - o)


def _as_univariate(p: Series, i: int) -> dict[int, Series]:
    """View ``p`` as a polynomial in variable ``i`` with coefficients free of it."""
    out: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = m[i]
        mm = list(m)
        mm[i] = 0
        out.setdefault(e, {})[tuple(mm)] = c
    return {e: Series(t, p.nvars) for e, t in out.items()}


def _from_univariate(coeffs: dict[int, Series], i: int, nvars: int) -> Series:
    terms = {}
    for e, c in coeffs.items():
        for m, v in c.terms.items():
            mm = list(m)
            mm[i] = e
            terms[tuple(mm)] = v
    return Series(terms, nvars)


def _normalize(p: Series) -> Series:
    """Scale so the lexicographically largest coefficient is one."""
    if p.is_zero():
        return p
    return p.scale(1 / _lex_lead(p)[1])


def poly_gcd(a: Series, b: Series, _vars: Sequence[int] | None = None) -> Series:
    """Monic (lex-leading coefficient one) gcd of two polynomials over Q.

    Recursive: the polynomials are viewed as univariate in their last
    active variable over the ring of the remaining ones; contents and
    primitive parts are split off and a primitive pseudo-remainder sequence
    is run on the primitive parts.
    """
    a, b = a.exact(), b.exact()
    if a.nvars != b.nvars:
        raise ValueError("variable count mismatch")
    n = a.nvars
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    active = [i for i in range(n) if a.depends_on(i) or b.depends_on(i)] if _vars is None else list(_vars)
    active = [i for i in active if a.depends_on(i) or b.depends_on(i)]
    if not active:
        return Series.one(n)
    x = active[-1]
    rest = active[:-1]
    ca, pa = _content_split(a, x, rest)
    cb, pb = _content_split(b, x, rest)
    c = poly_gcd(ca, cb, rest)
    # primitive PRS in x
    r0, r1 = (pa, pb) if _deg_in(pa, x) >= _deg_in(pb, x) else (pb, pa)
    while True:
        if r1.is_zero():
            return _normalize(c * r0)
        if _deg_in(r1, x) == 0:
            # a primitive polynomial free of x is a constant: coprime parts
            return _normalize(c)
        r = _pseudo_rem(r0, r1, x)
        r0, r1 = r1, (r if r.is_zero() else _content_split(r, x, rest)[1])


def _deg_in(p: Series, i: int) -> int:
    return max((m[i] for m in p.terms), default=-1)


def _content_split(p: Series, x: int, rest: Sequence[int]) -> tuple[Series, Series]:
    coeffs = _as_univariate(p, x)
    cont = Series.zero(p.nvars)
    for c in coeffs.values():
        cont = poly_gcd(cont, c, rest)
        if cont.degree() == 0:
            break
    prim = exact_divide(p, cont)
    assert prim is not None
    return cont, prim


def _pseudo_rem(a: Series, b: Series, x: int) -> Series:
    db = _deg_in(b, x)
    lb = _as_univariate(b, x)[db]
    n = a.nvars
    r = a
    while not r.is_zero() and _deg_in(r, x) >= db:
        dr = _deg_in(r, x)
        lr = _as_univariate(r, x)[dr]
        shift = [0] * n
        shift[x] = dr - db
        r = r * lb - lr * Series.monomial(shift) * b
    return r


def is_reduced(f: Series) -> bool:
    """Squarefreeness of a nonzero polynomial: ``gcd(f, df/dx_1, ..., df/dx_n)`` is constant."""
    if not f.is_exact:
        raise ValueError("reducedness is only decided for polynomials")
    if f.is_zero():
        raise ValueError("the zero polynomial is not a divisor equation")
    g = f
    for i in range(f.nvars):
        g = poly_gcd(g, f.diff(i))
        if g.degree() <= 0:
            return True
    return g.degree() <= 0


def to_string(s: Series, names: Sequence[str] | None = None) -> str:
    """Canonical text in the expression grammar (terms only, no precision)."""
    if names is None:
        names = default_names(s.nvars)
    if not s.terms:
        return "0"
    pieces = []
    for mon, c in s.sorted_terms():
        factors = []
        for name, e in zip(names, mon):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _fmt(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt(mag) + "*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def default_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


def coefficient_list(s: Series) -> list[list]:
    """Machine-readable export: ``[[exponents], "p/q"], ...`` in canonical order."""
    return [[list(m), _fmt(c)] for m, c in s.sorted_terms()]


def sum_series(items: Iterable[Series], nvars: int, prec=EXACT) -> Series:
    total = Series.zero(nvars, prec)
    for s in items:
        total = total + s
    return total

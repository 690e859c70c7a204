"""Derivations ``sum a_i d_i`` of the (truncated) power series ring."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .pseries import EXACT, Series, coefficient_list, default_names, sharp_mul, to_string


class Derivation:
    """Immutable derivation with coefficient series ``coeffs[i]`` of ``d/dx_i``.

    The linear part is stored in the row convention ``A = (delta_i(x_j))``
    used for Saito matrices: ``linear_part()[i][j]`` is the coefficient of
    ``x_i`` in ``coeffs[j]``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Series]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a derivation needs at least one coefficient")
        n = len(coeffs)
        for c in coeffs:
            if c.nvars != n:
                raise ValueError(f"coefficient series live in {c.nvars} variables, expected {n}")
        self.coeffs = coeffs

    @classmethod
    def partial(cls, i: int, nvars: int) -> "Derivation":
        return cls([Series.constant(1 if j == i else 0, nvars) for j in range(nvars)])

    @classmethod
    def zero(cls, nvars: int, prec=EXACT) -> "Derivation":
        return cls([Series.zero(nvars, prec) for _ in range(nvars)])

    @classmethod
    def diagonal(cls, weights: Sequence, prec=EXACT) -> "Derivation":
        """``sum w_i x_i d_i``."""
        n = len(weights)
        return cls([Series.var(i, n, prec).scale(Fraction(w)) for i, w in enumerate(weights)])

    @classmethod
    def from_matrix(cls, a: Sequence[Sequence], prec=EXACT) -> "Derivation":
        """Linear derivation ``x A d`` (coefficient of ``d_j`` is ``sum_i A[i][j] x_i``)."""
        n = len(a)
        coeffs = []
        for j in range(n):
            terms = {}
            for i in range(n):
                if a[i][j]:
                    mon = [0] * n
                    mon[i] = 1
                    terms[tuple(mon)] = a[i][j]
            coeffs.append(Series(terms, n, prec))
        return cls(coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Derivation({self.to_strings()!r})"

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        out = ""
        for name, c in zip(names, self.coeffs):
            if not c.terms:
                continue
            body = to_string(c, names)
            sign = "+"
            if len(c.terms) > 1:
                body = f"({body})"
            elif body.startswith("-"):
                sign, body = "-", body[1:]
            if body == "1":
                piece = f"d{name}"
            else:
                piece = f"{body}*d{name}"
            if not out:
                out = piece if sign == "+" else "-" + piece
            else:
                out += f" {sign} {piece}"
        return out or "0"

    def to_strings(self, names: Sequence[str] | None = None) -> list[str]:
        """Coefficient expressions in variable order (the serialized form)."""
        return [to_string(c, names) for c in self.coeffs]

    def coefficient_lists(self) -> list[list]:
        return [coefficient_list(c) for c in self.coeffs]

    def __getitem__(self, i: int) -> Series:
        return self.coeffs[i]

    def _check(self, other: "Derivation"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation([-a for a in self.coeffs])

    def __mul__(self, c) -> "Derivation":
        """Multiply by a rational scalar or a series (``c * delta``)."""
        if isinstance(c, Series):
            return Derivation([c * a for a in self.coeffs])
        c = Fraction(c)
        return Derivation([a.scale(c) for a in self.coeffs])

    __rmul__ = __mul__

    def truncate(self, k) -> "Derivation":
        return Derivation([c.truncate(k) for c in self.coeffs])

    def exact(self) -> "Derivation":
        return Derivation([c.exact() for c in self.coeffs])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def apply(self, f: Series) -> Series:
        """``delta(f) = sum a_i df/dx_i``.

        For a singular derivation the result is known modulo ``m^k`` when
        ``f`` and the coefficients are.
        """
        if f.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {f.nvars}")
        total = None
        for i, a in enumerate(self.coeffs):
            term = sharp_mul(a, f.diff(i))
            total = term if total is None else total + term
        return total

    __call__ = apply

    def is_singular(self) -> bool:
        """All coefficients vanish at the origin (``delta_{-1} = 0``)."""
        return all(not c.constant_term() for c in self.coeffs)

    def graded_part(self, i: int) -> "Derivation":
        """Piece whose coefficients are homogeneous of degree ``i + 1``."""
        if i < -1:
            raise ValueError("graded pieces are indexed from -1")
        n = self.nvars
        if i + 1 >= self.prec:
            raise ValueError(f"degree {i + 1} coefficients are not known mod m^{self.prec}")
        return Derivation([Series({m: v for m, v in c.terms.items() if sum(m) == i + 1}, n)
                           for c in self.coeffs])

    def linear_part(self) -> list[list[Fraction]]:
        """Matrix ``A`` with ``delta_0 = x A d``: ``A[i][j]`` = coefficient of ``x_i`` in ``coeffs[j]``."""
        n = self.nvars
        out = [[Fraction(0)] * n for _ in range(n)]
        for j, c in enumerate(self.coeffs):
            for i in range(n):
                mon = [0] * n
                mon[i] = 1
                out[i][j] = c.coeff(mon)
        return out

    def constant_part(self) -> list[Fraction]:
        return [c.constant_term() for c in self.coeffs]

    def trace(self) -> Fraction:
        """Trace of the linear part of a singular derivation."""
        if not self.is_singular():
            raise ValueError("trace is only defined for singular derivations")
        a = self.linear_part()
        return sum((a[i][i] for i in range(self.nvars)), Fraction(0))

    def is_diagonal(self) -> bool:
        """Exactly of the form ``sum w_i x_i d_i``."""
        for i, c in enumerate(self.coeffs):
            for m in c.terms:
                if sum(m) != 1 or m[i] != 1:
                    return False
        return True

    def diagonal_weights(self) -> list[Fraction]:
        if not self.is_diagonal():
            raise ValueError("derivation is not diagonal")
        a = self.linear_part()
        return [a[i][i] for i in range(self.nvars)]


def bracket(d: Derivation, e: Derivation) -> Derivation:
    """Lie bracket: ``[d, e](x_j) = d(e(x_j)) - e(d(x_j))``.

    Truncated inputs must be singular (otherwise a precision order would be
    lost silently).
    """
    d._check(e)
    if (d.prec != EXACT or e.prec != EXACT) and not (d.is_singular() and e.is_singular()):
        raise ValueError("bracket of truncated derivations requires singular inputs")
    return Derivation([d.apply(b) - e.apply(a) for a, b in zip(d.coeffs, e.coeffs)])


def apply(d: Derivation, f: Series) -> Series:
    return d.apply(f)


def graded_part(d: Derivation, i: int) -> Derivation:
    return d.graded_part(i)


def is_singular(d: Derivation) -> bool:
    return d.is_singular()


def trace(d: Derivation) -> Fraction:
    return d.trace()

"""Strong Euler-homogeneity, order bounds and the trace obstruction.

Verdicts that rest on a degree-bounded search are reported together with the
bound; "not found" never silently becomes "false".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .derivation import Derivation
from .errors import CertificationError, Inconclusive, InputError
from .jordan import is_nilpotent
from .linalg import sparse_solve
from .logmodule import (
    LogWitness, SaitoBasis, certify_saito, extract_basis, is_product, solve_log_derivations,
    split_product,
)
from .pseries import (
    EXACT, Series, default_names, invert_unit, is_reduced, monomials, order, sharp_mul, to_string,
)

SEH = "SEH"
NOT_FOUND_AT_BOUND = "NOT_FOUND_AT_BOUND"
OBSTRUCTED = "OBSTRUCTED"
NOT_OBSTRUCTED = "NOT_OBSTRUCTED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SEHResult:
    verdict: str
    bound: int
    witness: Derivation | None = None
    validity: float | int = EXACT
    source: str = "membership"

    @property
    def found(self) -> bool:
        return self.verdict == SEH


def membership_system(f: Series, d: int):
    """Linear system for ``f = sum m_i df/dx_i`` with ``m_i`` in ``m``, ``deg m_i <= d``.

    Returns ``(rows, rhs, columns)`` keyed by output monomial; columns are
    ``(monomial, i)`` pairs ordered by degree, then variable.
    """
    n = f.nvars
    partials = [f.diff(i) for i in range(n)]
    cols = [(mon, i) for deg in range(1, d + 1) for i in range(n) for mon in monomials(n, deg)]
    rows: dict = {}
    for mon, i in cols:
        for m, c in partials[i].terms.items():
            key = tuple(a + b for a, b in zip(m, mon))
            rows.setdefault(key, {})[(mon, i)] = c
    keys = sorted(set(rows) | set(f.terms))
    return [rows.get(key, {}) for key in keys], [f.coeff(key) for key in keys], cols


def is_strongly_euler_homogeneous(f: Series, d: int) -> SEHResult:
    """Search ``delta = sum m_i d_i`` with ``m_i`` in ``m`` of degree ``<= d`` and ``delta(f) = f``."""
    if f.is_zero() or not f.is_exact:
        raise InputError("f must be a nonzero polynomial")
    if f.constant_term():
        raise InputError("f is a unit at the origin")
    if d < 1:
        raise InputError("degree bound must be at least 1")
    n = f.nvars
    rows, rhs, cols = membership_system(f, d)
    sol = sparse_solve(rows, rhs, cols)
    if sol is None:
        return SEHResult(NOT_FOUND_AT_BOUND, d)
    coeffs = [dict() for _ in range(n)]
    for (mon, i), v in sol.items():
        coeffs[i][mon] = v
    return SEHResult(SEH, d, Derivation([Series(c, n) for c in coeffs]))


def euler_from_unit_cofactor(witness: LogWitness, k: int) -> Derivation | None:
    """``delta / a`` (modulo ``m^k`` unless ``a`` is constant) for a singular witness with unit cofactor ``a``."""
    delta = witness.derivation
    a = witness.cofactor
    if not delta.is_singular() or not a.constant_term():
        return None
    if a.is_exact and a.degree() == 0 and delta.prec == EXACT:
        return delta * (1 / a.constant_term())
    k = min(k, a.prec + 1, delta.prec)
    inv = invert_unit(a, k - 1)
    return Derivation([sharp_mul(c, inv).truncate(k) for c in delta.coeffs])


def order_bound_check(f: Series, basis: SaitoBasis | None, seh: SEHResult | None,
                      product: bool | None) -> bool | None:
    """``order(f) >= n + 1`` for non-products that are not strongly Euler-homogeneous.

    ``None`` when the hypotheses do not hold (the check is skipped).
    """
    if basis is None or seh is None or product is None:
        return None
    if product or seh.found:
        return None
    return order(f) >= f.nvars + 1


@dataclass(frozen=True)
class NilpotencyCheck:
    applicable: bool
    violations: tuple = ()
    entries: tuple = ()  # (index, cofactor_in_m, nilpotent)

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return all(nil for _, in_m, nil in self.entries if in_m)


def plane_curve_nilpotency(f: Series, basis: SaitoBasis, product: bool | None = False,
                           reduced: bool | None = None) -> NilpotencyCheck:
    """For a reduced non-product plane curve in ``m^3``, basis elements with cofactor in ``m`` are nilpotent."""
    violations = []
    if f.nvars != 2:
        violations.append("n != 2")
    if order(f) < 3:
        violations.append("f not in m^3")
    if product is None or product:
        violations.append("f is a product" if product else "productness unknown")
    if reduced is None:
        reduced = is_reduced(f)
    if not reduced:
        violations.append("f not reduced")
    entries = []
    for i, w in enumerate(basis.witnesses):
        in_m = not w.cofactor.constant_term()
        nil = is_nilpotent(w.derivation) if w.derivation.is_singular() else False
        entries.append((i, in_m, nil))
    return NilpotencyCheck(not violations, tuple(violations), tuple(entries))


@dataclass(frozen=True)
class ObstructionVerdict:
    verdict: str
    traces: tuple
    bound: int | None = None
    note: str = ""


def lct_trace_obstruction(f: Series, basis: SaitoBasis, product: bool | None,
                          bound: int | None = None) -> ObstructionVerdict:
    """Trace test: a non-product whose log derivations all have trace 0 fails LCT.

    Trace is linear, so checking a basis covers all of ``Der_f``.  A nonzero
    trace only removes the obstruction; it does not prove LCT.
    """
    singular = [d.is_singular() for d in basis.derivations]
    traces = tuple(d.trace() if s else None for d, s in zip(basis.derivations, singular))
    if any(t for t in traces if t is not None):
        return ObstructionVerdict(NOT_OBSTRUCTED, traces, bound)
    if product or not all(singular):
        return ObstructionVerdict(INCONCLUSIVE, traces, bound, "f is a product; the trace test applies to the factor")
    if product is None:
        return ObstructionVerdict(INCONCLUSIVE, traces, bound, "productness unknown")
    return ObstructionVerdict(OBSTRUCTED, traces, bound,
                              f"every basis trace is 0 and no non-singular log derivation of degree <= {bound}")


def in_ideal_Dx(delta: Derivation) -> bool:
    """Membership in the left ideal generated by the coordinates, i.e. zero trace."""
    if not delta.is_singular():
        raise InputError("membership test needs a singular derivation")
    return delta.trace() == 0


@dataclass
class AnalysisConfig:
    order: int = 8
    degree: int = 4
    check_reduced: bool = True
    split_products: bool = True

    def __post_init__(self):
        if self.order < 2:
            raise InputError("truncation order must be at least 2")
        if self.degree < 1:
            raise InputError("degree bound must be at least 1")


@dataclass
class AnalysisReport:
    f: Series
    names: list
    config: AnalysisConfig
    reduced: bool | None = None
    product: bool | None = None
    product_witness: LogWitness | None = None
    split: object = None
    factor_report: "AnalysisReport | None" = None
    basis: SaitoBasis | None = None
    basis_status: str = "SKIPPED"
    basis_detail: str = ""
    seh: SEHResult | None = None
    order_of_f: float | int = 0
    traces: list = field(default_factory=list)
    order_bound: bool | None = None
    nilpotency: NilpotencyCheck | None = None
    obstruction: ObstructionVerdict | None = None
    notes: list = field(default_factory=list)

    @property
    def lct_obstruction(self) -> str:
        return self.obstruction.verdict if self.obstruction else INCONCLUSIVE

    def to_dict(self) -> dict:
        names = self.names
        out = {
            "input": {"variables": list(names), "f": to_string(self.f, names)},
            "config": {"order": self.config.order, "degree": self.config.degree},
            "reduced": self.reduced,
            "order_of_f": None if self.order_of_f == EXACT else self.order_of_f,
            "product": _product_dict(self, names),
            "basis": _basis_dict(self, names),
            "seh": _seh_dict(self.seh, names),
            "traces": [_q(t) for t in self.traces],
            "order_bound_check": _tristate(self.order_bound),
            "plane_curve_nilpotency": _nilpotency_dict(self.nilpotency),
            "lct_obstruction": self.lct_obstruction,
            "lct_note": self.obstruction.note if self.obstruction else "",
            "notes": list(self.notes),
        }
        return out


def _q(x) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _prec(p):
    return "EXACT" if p == EXACT else p


def _tristate(v):
    return "SKIPPED" if v is None else ("HOLDS" if v else "FAILED")


def derivation_dict(delta: Derivation, names) -> dict:
    return {
        "coefficients": delta.to_strings(names),
        "coefficient_lists": delta.coefficient_lists(),
        "precision": _prec(delta.prec),
    }


def witness_dict(w: LogWitness, names) -> dict:
    d = derivation_dict(w.derivation, names)
    d["cofactor"] = to_string(w.cofactor, names)
    d["validity"] = _prec(w.validity)
    return d


def _product_dict(r: AnalysisReport, names) -> dict:
    if r.product is None:
        return {"verdict": INCONCLUSIVE, "bound": r.config.degree}
    out = {"verdict": "PRODUCT" if r.product else "NOT_PRODUCT_AT_BOUND", "bound": r.config.degree}
    if r.product_witness is not None:
        out["witness"] = witness_dict(r.product_witness, names)
    if r.split is not None:
        sp = r.split
        out["split"] = {
            "axis": names[sp.axis],
            "g": to_string(sp.g, names),
            "unit": to_string(sp.unit, names),
            "change": [to_string(c, names) for c in sp.change],
            "order": sp.k,
        }
    if r.factor_report is not None:
        out["factor_report"] = r.factor_report.to_dict()
    return out


def _basis_dict(r: AnalysisReport, names) -> dict:
    out = {"status": r.basis_status, "bound": r.config.degree}
    if r.basis_detail:
        out["detail"] = r.basis_detail
    b = r.basis
    if b is not None:
        out["derivations"] = [witness_dict(w, names) for w in b.witnesses]
        out["saito_determinant"] = to_string(b.determinant, names)
        out["unit"] = to_string(b.unit, names)
        out["unit_precision"] = _prec(b.unit.prec)
        out["validity"] = _prec(b.validity)
    return out


def _seh_dict(s: SEHResult | None, names) -> dict:
    if s is None:
        return {"verdict": "NOT_APPLICABLE"}
    out = {"verdict": s.verdict, "bound": s.bound, "source": s.source}
    if s.witness is not None:
        out["witness"] = derivation_dict(s.witness, names)
        out["validity"] = _prec(s.validity)
    return out


def _nilpotency_dict(c: NilpotencyCheck | None) -> dict:
    if c is None:
        return {"applicable": False, "violations": ["not run"]}
    return {
        "applicable": c.applicable,
        "violations": list(c.violations),
        "entries": [{"index": i, "cofactor_in_m": m, "nilpotent": nil} for i, m, nil in c.entries],
        "holds": c.holds,
    }


def _drop_variable(g: Series, axis: int) -> Series:
    return Series({m[:axis] + m[axis + 1:]: c for m, c in g.terms.items()}, g.nvars - 1)


def analyze(f: Series, config: AnalysisConfig | None = None, names: Sequence[str] | None = None,
            candidates: Sequence[Derivation] | None = None) -> AnalysisReport:
    """Run the full pipeline on a polynomial germ and collect every certificate."""
    config = config or AnalysisConfig()
    names = list(names or default_names(f.nvars))
    if f.is_zero() or not f.is_exact:
        raise InputError("f must be a nonzero polynomial")
    n = f.nvars
    k, d = config.order, config.degree
    r = AnalysisReport(f, names, config)
    r.order_of_f = order(f)
    if f.constant_term():
        r.notes.append("f is a unit at the origin: the germ is empty")
        return r
    r.reduced = is_reduced(f)
    if not r.reduced:
        r.notes.append("NOT_REDUCED: f has a repeated factor")
    generators = solve_log_derivations(f, d)
    r.product, r.product_witness = is_product(f, d, generators)
    if r.product and config.split_products:
        r.split = split_product(f, r.product_witness, k)
        if n > 1:
            g = _drop_variable(r.split.g, r.split.axis)
            if not g.is_zero() and not g.constant_term():
                sub_names = names[:r.split.axis] + names[r.split.axis + 1:]
                r.factor_report = analyze(g, config, sub_names)
    if not r.reduced and config.check_reduced:
        r.basis_status = "REJECTED"
        r.basis_detail = "NOT_REDUCED"
    elif candidates is not None:
        try:
            r.basis = certify_saito(f, candidates, check_reduced=False, unit_order=k)
            r.basis_status = "CERTIFIED"
        except CertificationError as e:
            r.basis_status = "REJECTED"
            r.basis_detail = str(e)
        except Inconclusive as e:
            r.basis_status = INCONCLUSIVE
            r.basis_detail = str(e)
    else:
        try:
            r.basis = extract_basis(f, generators)
        except InputError as e:
            r.basis_detail = str(e)
        if r.basis is not None:
            r.basis_status = "CERTIFIED"
        else:
            r.basis_status = "BOUNDED_FAILURE"
            r.basis_detail = r.basis_detail or f"no {n} generators of degree <= {d} certify"
    r.seh = is_strongly_euler_homogeneous(f, d)
    if not r.seh.found and r.basis is not None:
        for w in r.basis.witnesses:
            e = euler_from_unit_cofactor(w, k)
            if e is not None:
                r.seh = SEHResult(SEH, d, e, k, "unit_cofactor")
                break
    if r.basis is not None:
        r.traces = [t for t in r.basis.traces()]
        r.order_bound = order_bound_check(f, r.basis, r.seh, r.product)
        if r.order_bound is False:
            r.notes.append("order bound FAILED: a product or SEH verdict is wrong")
        if n == 2:
            r.nilpotency = plane_curve_nilpotency(f, r.basis, r.product, r.reduced)
        r.obstruction = lct_trace_obstruction(f, r.basis, r.product, d)
        if r.product and r.factor_report is not None:
            sub = r.factor_report.obstruction
            if sub is not None:
                r.obstruction = ObstructionVerdict(sub.verdict, r.obstruction.traces, d,
                                                   "verdict of the factor after splitting off a smooth direction")
    else:
        r.obstruction = ObstructionVerdict(INCONCLUSIVE, (), d, "no certified basis")
    if not r.product:
        r.notes.append(f"product refuted only up to coefficient degree {d}")
    return r

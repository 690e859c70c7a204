"""Regression corpus of divisor germs and the property hooks run on each entry."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .derivation import Derivation
from .errors import FreedivError, InputError
from .homogeneity import AnalysisConfig, AnalysisReport, analyze
from .jobs import Job, load_document, parse_input, validate
from .jordan import induced_is_nilpotent, is_nilpotent, matrix_jordan_chevalley, sn_decompose
from .logmodule import cofactor
from .normalize import CASE_1, diag_normalize, normalize_plane_basis, rank_B
from .pseries import order

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    job: Job
    expected: dict
    description: str = ""
    source: str = ""


def parse_entry(document, source: str = "") -> CorpusEntry:
    validate(document, "corpus_entry.schema.json")
    job = parse_input(document["job"], base="/job")
    return CorpusEntry(document["name"], job, document["expected"], document.get("description", ""), source)


def load_entries(directory=None) -> list[CorpusEntry]:
    """Entries from ``directory`` (default: the shipped corpus), sorted by name."""
    if directory is None:
        root = resources.files("freediv").joinpath("data", "corpus")
        docs = [(p.name, json.loads(p.read_text(encoding="utf-8"))) for p in root.iterdir() if p.name.endswith(".json")]
    else:
        path = Path(directory)
        if not path.is_dir():
            raise InputError(f"{directory}: not a directory")
        docs = [(p.name, load_document(p)) for p in sorted(path.glob("*.json"))]
    entries = []
    for fname, doc in docs:
        try:
            entries.append(parse_entry(doc, fname))
        except InputError as exc:
            raise InputError(f"{fname}: {exc}") from exc
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise InputError("corpus entry names must be unique")
    return sorted(entries, key=lambda e: e.name)


@dataclass
class HookResult:
    status: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "detail": self.detail}


@dataclass
class EntryResult:
    name: str
    expectations: dict = field(default_factory=dict)
    properties: dict = field(default_factory=dict)
    error: str = ""

    @property
    def failures(self) -> int:
        bad = sum(1 for v in self.expectations.values() if not v["ok"])
        bad += sum(1 for v in self.properties.values() if v.status == FAIL)
        return bad + (1 if self.error else 0)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.failures == 0,
            "error": self.error,
            "expectations": self.expectations,
            "properties": {k: v.to_dict() for k, v in sorted(self.properties.items())},
        }


@dataclass
class SuiteReport:
    entries: list

    @property
    def failures(self) -> int:
        return sum(e.failures for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "failures": self.failures,
            "passed": self.passed,
        }


# property hooks; each returns a HookResult for one entry

def _singular_basis(report: AnalysisReport) -> list[Derivation]:
    if report.basis is None:
        return []
    return [d for d in report.basis.derivations if d.is_singular()]


def _decompositions(report: AnalysisReport, k: int, cache: dict) -> list:
    if "sn" not in cache:
        cache["sn"] = [(d, sn_decompose(d, k)) for d in _singular_basis(report)]
    return cache["sn"]


def hook_sn_logarithmic(report, k, cache) -> HookResult:
    """Both Jordan parts of a logarithmic singular derivation stay logarithmic."""
    decs = _decompositions(report, k, cache)
    if not decs:
        return HookResult(SKIPPED, "no singular basis element")
    if k <= order(report.f):
        return HookResult(SKIPPED, f"order(f) >= {k}")
    for i, (_, dec) in enumerate(decs):
        for label, part in (("S", dec.semisimple), ("N", dec.nilpotent)):
            if cofactor(part, report.f, k) is None:
                return HookResult(FAIL, f"element {i}: {label} part has no cofactor mod m^{k}")
    return HookResult(PASS, f"{2 * len(decs)} parts logarithmic mod m^{k}")


def hook_linear_part_jordan(report, k, cache) -> HookResult:
    """Linear parts of the Jordan parts are the Jordan parts of the linear part."""
    decs = _decompositions(report, k, cache)
    if not decs:
        return HookResult(SKIPPED, "no singular basis element")
    for i, (d, dec) in enumerate(decs):
        s, nil = matrix_jordan_chevalley(d.linear_part())
        if dec.semisimple.linear_part() != s or dec.nilpotent.linear_part() != nil:
            return HookResult(FAIL, f"element {i}: linear parts disagree with the matrix decomposition")
    return HookResult(PASS, f"{len(decs)} elements")


def hook_nilpotent_cofactor(report, k, cache) -> HookResult:
    """Nilpotent logarithmic derivations have cofactors vanishing at the origin."""
    if k <= order(report.f):
        return HookResult(SKIPPED, f"order(f) >= {k}")
    candidates = [d for d in _singular_basis(report) if is_nilpotent(d)]
    candidates += [dec.nilpotent for _, dec in _decompositions(report, k, cache)]
    checked = 0
    for d in candidates:
        w = cofactor(d, report.f, k)
        if w is None:
            continue
        checked += 1
        if w.cofactor.constant_term():
            return HookResult(FAIL, f"nilpotent {d} has cofactor with constant term {w.cofactor.constant_term()}")
    if not checked:
        return HookResult(SKIPPED, "no nilpotent logarithmic derivation")
    return HookResult(PASS, f"{checked} nilpotent derivations")


def hook_nilpotency_equivalence(report, k, cache) -> HookResult:
    """Nilpotent linear part iff nilpotent induced map on ``O/m^k``."""
    decs = _decompositions(report, k, cache)
    if not decs:
        return HookResult(SKIPPED, "no singular basis element")
    count = 0
    for d, dec in decs:
        for part in (d, dec.semisimple, dec.nilpotent):
            count += 1
            if is_nilpotent(part) != induced_is_nilpotent(part, k):
                return HookResult(FAIL, f"{part}: linear-part and induced-map nilpotency disagree")
    return HookResult(PASS, f"{count} derivations")


def hook_order_bound(report, k, cache) -> HookResult:
    """Non-SEH non-products have order at least ``n + 1``."""
    if report.order_bound is None:
        return HookResult(SKIPPED, "hypotheses not met")
    return HookResult(PASS if report.order_bound else FAIL, f"order(f) = {report.order_of_f}")


def hook_plane_nilpotency(report, k, cache) -> HookResult:
    """Plane curves in ``m^3``: basis elements with cofactor in ``m`` are nilpotent."""
    chk = report.nilpotency
    if chk is None or not chk.applicable:
        return HookResult(SKIPPED, "hypotheses not met")
    return HookResult(PASS if chk.holds else FAIL, f"{len(chk.entries)} basis elements")


def _plane_hypotheses(report) -> bool:
    return (report.f.nvars == 2 and report.basis is not None and report.reduced
            and report.product is False and order(report.f) >= 3)


def hook_plane_case(report, k, cache) -> HookResult:
    """The plane normal form of a reduced non-product curve in ``m^3`` is CASE_1."""
    if not _plane_hypotheses(report):
        return HookResult(SKIPPED, "hypotheses not met")
    nf = normalize_plane_basis(report.f, report.basis)
    cache["plane_case"] = nf.kind
    return HookResult(PASS if nf.kind == CASE_1 else FAIL, nf.kind)


def hook_rank_b(report, k, cache) -> HookResult:
    """``rank(B) = 2`` rules out strong Euler homogeneity."""
    if not _plane_hypotheses(report):
        return HookResult(SKIPPED, "hypotheses not met")
    _, r = rank_B(report.basis)
    cache["rank_b"] = r
    if r == 2 and report.seh is not None and report.seh.found:
        return HookResult(FAIL, "rank(B) = 2 but an Euler vector field was found")
    return HookResult(PASS, f"rank(B) = {r}")


def hook_diag_normalize(report, k, cache) -> HookResult:
    """Diagonal basis elements split off a unit leaving an eigenvector."""
    diag = [d for d in _singular_basis(report) if d.is_diagonal() and not d.is_zero()]
    if not diag:
        return HookResult(SKIPPED, "no diagonal basis element")
    for d in diag:
        diag_normalize(d.diagonal_weights(), report.f, k=k)
    return HookResult(PASS, f"{len(diag)} diagonal elements")


HOOKS: dict[str, Callable] = {
    "sn_parts_logarithmic": hook_sn_logarithmic,
    "linear_part_jordan": hook_linear_part_jordan,
    "nilpotent_cofactor_in_m": hook_nilpotent_cofactor,
    "nilpotency_equivalence": hook_nilpotency_equivalence,
    "order_bound": hook_order_bound,
    "plane_nilpotency": hook_plane_nilpotency,
    "plane_case_one": hook_plane_case,
    "rank_b_contrapositive": hook_rank_b,
    "diag_normalize": hook_diag_normalize,
}


def _frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _combination(report: AnalysisReport, coeffs: Sequence) -> Derivation:
    derivs = report.basis.derivations
    if len(coeffs) != len(derivs):
        raise InputError(f"combination needs {len(derivs)} coefficients")
    total = Derivation.zero(report.f.nvars)
    for c, d in zip(coeffs, derivs):
        total = total + d * Fraction(c)
    return total


def _compare(result: EntryResult, key: str, expected, actual, provenance: str):
    result.expectations[key] = {"expected": expected, "actual": actual, "provenance": provenance,
                                "ok": expected == actual}


def _check_expectations(entry: CorpusEntry, report: AnalysisReport, cache: dict, result: EntryResult):
    exp = entry.expected
    seh = None if report.seh is None else report.seh.found
    simple = {"reduced": report.reduced, "product": report.product, "seh": seh,
              "basis_status": report.basis_status, "obstruction": report.lct_obstruction}
    for key, actual in simple.items():
        if key in exp:
            _compare(result, key, exp[key]["value"], actual, exp[key]["provenance"])
    if "traces" in exp:
        actual = sorted(_frac_str(t) for t in report.traces if t is not None)
        _compare(result, "traces", sorted(exp["traces"]["value"]), actual, exp["traces"]["provenance"])
    if "plane_case" in exp:
        _compare(result, "plane_case", exp["plane_case"]["value"], cache.get("plane_case"),
                 exp["plane_case"]["provenance"])
    if "rank_b" in exp:
        _compare(result, "rank_b", exp["rank_b"]["value"], cache.get("rank_b"), exp["rank_b"]["provenance"])
    for i, comb in enumerate(exp.get("combinations", [])):
        if report.basis is None:
            _compare(result, f"combinations/{i}", comb, None, comb["provenance"])
            continue
        eta = _combination(report, comb["coefficients"])
        actual = {"coefficients": comb["coefficients"], "provenance": comb["provenance"]}
        if "annihilates" in comb:
            actual["annihilates"] = eta.apply(report.f).is_zero()
        if "diagonal" in comb:
            actual["diagonal"] = eta.is_diagonal()
        if "nilpotent" in comb:
            actual["nilpotent"] = is_nilpotent(eta)
        if "trace" in comb:
            actual["trace"] = _frac_str(eta.trace())
        _compare(result, f"combinations/{i}", comb, actual, comb["provenance"])


def run_entry(entry: CorpusEntry, hooks: dict | None = None) -> EntryResult:
    hooks = HOOKS if hooks is None else hooks
    job = entry.job
    result = EntryResult(entry.name)
    config = AnalysisConfig(job.config.order, job.config.degree, not job.config.skip_reduced_check)
    try:
        report = analyze(job.f, config, job.names, job.derivations)
    except FreedivError as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        return result
    cache: dict = {}
    for name, hook in hooks.items():
        try:
            result.properties[name] = hook(report, config.order, cache)
        except FreedivError as exc:
            result.properties[name] = HookResult(FAIL, f"{type(exc).__name__}: {exc}")
    _check_expectations(entry, report, cache, result)
    return result


def run_corpus(entries: Sequence[CorpusEntry] | None = None, workers: int = 1) -> SuiteReport:
    """Run every entry (optionally in parallel); results are ordered by entry name."""
    entries = load_entries() if entries is None else list(entries)
    ordered = sorted(entries, key=lambda e: e.name)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run_entry, ordered))
    else:
        results = [run_entry(e) for e in ordered]
    return SuiteReport(results)

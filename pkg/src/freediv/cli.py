"""Command-line interface: ``freediv analyze|sn|normalize|corpus run``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .corpus import load_entries, run_corpus
from .errors import CertificationError, Inconclusive, InputError, InternalInconsistency, UnsupportedEigenvalues
from .homogeneity import AnalysisConfig, analyze, derivation_dict
from .jobs import Job, load_document, parse_input
from .jordan import sn_decompose
from .logmodule import certify_saito, cofactor
from .normalize import diag_normalize, normalize_plane_basis, rank_B
from .pseries import EXACT, coefficient_list, to_string

EXIT_OK, EXIT_FAILED_SUITE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _prec(p):
    return "EXACT" if p == EXACT else p


def _series_dict(s, names) -> dict:
    return {"expression": to_string(s, names), "coefficient_list": coefficient_list(s), "precision": _prec(s.prec)}


def _input_dict(job: Job) -> dict:
    out = {"variables": list(job.names)}
    if job.f is not None:
        out["f"] = to_string(job.f, job.names)
    return out


def _require_f(job: Job):
    if job.f is None:
        raise InputError("/: missing required property 'f'")


def _config(job: Job) -> AnalysisConfig:
    return AnalysisConfig(job.config.order, job.config.degree, not job.config.skip_reduced_check)


def cmd_analyze(job: Job) -> dict:
    _require_f(job)
    report = analyze(job.f, _config(job), job.names, job.derivations)
    out = report.to_dict()
    out["command"] = "analyze"
    return out


def cmd_sn(job: Job) -> dict:
    if not job.derivations or len(job.derivations) != 1:
        raise InputError("/derivations: sn needs exactly one derivation")
    delta = job.derivations[0]
    k = job.config.order
    dec = sn_decompose(delta, k)
    out = {
        "command": "sn",
        "input": dict(_input_dict(job), derivation=delta.to_strings(job.names)),
        "order": k,
        "semisimple": derivation_dict(dec.semisimple, job.names),
        "nilpotent": derivation_dict(dec.nilpotent, job.names),
        "checks": dict(dec.checks),
    }
    if job.f is not None and not job.f.is_zero():
        out["logarithmic"] = _parts_logarithmic(dec, job.f, k)
    return out


def _parts_logarithmic(dec, f, k) -> dict:
    """Whether each part admits a cofactor on ``f`` modulo ``m^k``."""
    out = {}
    for label, part in (("semisimple", dec.semisimple), ("nilpotent", dec.nilpotent)):
        try:
            w = cofactor(part, f, k)
        except Inconclusive as exc:
            out[label] = {"verdict": "INCONCLUSIVE", "detail": str(exc)}
            continue
        if w is None:
            out[label] = {"verdict": "NOT_LOGARITHMIC", "order": k}
        else:
            out[label] = {"verdict": "LOGARITHMIC", "order": k, "cofactor": to_string(w.cofactor)}
    return out


def _diag(job: Job) -> dict:
    res = diag_normalize(job.weights, job.f, job.cofactor, job.config.order)
    return {
        "command": "normalize",
        "kind": "DIAGONAL",
        "input": dict(_input_dict(job), weights=[_q(w) for w in job.weights]),
        "order": res.k,
        "unit": _series_dict(res.unit, job.names),
        "normalized": _series_dict(res.normalized, job.names),
        "eigenvalue": _q(res.eigenvalue),
        "cofactor": _series_dict(res.cofactor, job.names),
        "resonant_part": to_string(res.resonant_part, job.names),
        "note": res.note,
    }


def _plane(job: Job) -> dict:
    if job.derivations is not None:
        try:
            basis = certify_saito(job.f, list(job.derivations), check_reduced=not job.config.skip_reduced_check,
                                  unit_order=job.config.order)
        except (CertificationError, Inconclusive) as exc:
            raise InputError(f"/derivations: not a certified basis: {exc}") from exc
    else:
        report = analyze(job.f, _config(job), job.names)
        if report.basis is None:
            raise InputError(f"/f: no certified basis ({report.basis_status}: {report.basis_detail})")
        if report.product:
            raise InputError("/f: plane normalization needs a non-product germ")
        basis = report.basis
    b, r = rank_B(basis)
    nf = normalize_plane_basis(job.f, basis)
    change = [[_q(v) for v in row] for row in nf.coordinate_change.matrix]
    return {
        "command": "normalize",
        "kind": nf.kind,
        "input": _input_dict(job),
        "parameter": None if nf.parameter is None else _q(nf.parameter),
        "coordinate_change": {"matrix": change, "description": nf.coordinate_change.description},
        "f_in_new_coordinates": to_string(nf.f, job.names),
        "transformed_basis": [derivation_dict(d, job.names) for d in nf.transformed_basis],
        "rank_b": {"matrix": [[_q(v) for v in row] for row in b.rows], "rank": r},
    }


def cmd_normalize(job: Job) -> dict:
    _require_f(job)
    if job.weights is not None:
        return _diag(job)
    if len(job.names) == 2:
        return _plane(job)
    raise InputError("/: normalize needs weights, or a plane curve in two variables")


def cmd_corpus(directory, order=None, degree=None) -> tuple[dict, bool]:
    entries = load_entries(directory)
    if order is not None or degree is not None:
        entries = [_override(e, order, degree) for e in entries]
    suite = run_corpus(entries)
    out = suite.to_dict()
    out["command"] = "corpus run"
    return out, suite.passed


def _override(entry, order, degree):
    from dataclasses import replace

    cfg = replace(entry.job.config, **{k: v for k, v in (("order", order), ("degree", degree)) if v is not None})
    return replace(entry, job=replace(entry.job, config=cfg))


def render_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for key in sorted(doc):
            yield from _flatten(doc[key], f"{prefix}.{key}" if prefix else key)
    elif isinstance(doc, list) and doc and any(isinstance(v, (dict, list)) for v in doc):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(doc, ensure_ascii=False)


def render_text(doc) -> str:
    """One ``path: value`` line per leaf of the JSON report, in the same key order."""
    return "".join(f"{k}: {v}\n" for k, v in _flatten(doc))


def build_parser() -> argparse.ArgumentParser:
    def options(top: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags without overriding them
        p = argparse.ArgumentParser(add_help=False)
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        p.add_argument("--order", type=int, default=d(None), metavar="K", help="truncation order k (default 8)")
        p.add_argument("--degree", type=int, default=d(None), metavar="D", help="degree bound d (default 4)")
        p.add_argument("--format", choices=("json", "text"), default=d("json"), help="report format")
        return p

    common = options(False)
    parser = argparse.ArgumentParser(prog="freediv", parents=[options(True)],
                                     description="Logarithmic derivations, Jordan decompositions and trace tests.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("analyze", "full analysis of a divisor germ"),
                       ("sn", "Jordan decomposition of one derivation"),
                       ("normalize", "diagonal or plane-basis normal form")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file", help="job document (JSON)")
    corpus = sub.add_parser("corpus", help="regression corpus")
    corpus_sub = corpus.add_subparsers(dest="action", required=True)
    run = corpus_sub.add_parser("run", parents=[common], help="run the corpus and its property hooks")
    run.add_argument("dir", nargs="?", default=None, help="directory of entries (default: shipped corpus)")
    return parser


def _positive_options(args):
    if args.order is not None and args.order < 2:
        raise InputError("--order must be at least 2")
    if args.degree is not None and args.degree < 1:
        raise InputError("--degree must be at least 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    status = EXIT_OK
    try:
        _positive_options(args)
        if args.command == "corpus":
            doc, passed = cmd_corpus(args.dir, args.order, args.degree)
            status = EXIT_OK if passed else EXIT_FAILED_SUITE
        else:
            job = parse_input(load_document(args.file), args.order, args.degree)
            doc = {"analyze": cmd_analyze, "sn": cmd_sn, "normalize": cmd_normalize}[args.command](job)
    except (InputError, UnsupportedEigenvalues) as exc:
        print(f"freediv: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"freediv: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CertificationError, Inconclusive) as exc:
        print(f"freediv: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render_json(doc) if args.format == "json" else render_text(doc))
    return status


if __name__ == "__main__":
    sys.exit(main())

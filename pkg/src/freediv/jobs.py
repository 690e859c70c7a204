"""Job documents: schema validation and conversion to package objects."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .derivation import Derivation
from .errors import InputError
from .expr import ParseError, parse
from .pseries import Series

DEFAULT_ORDER = 8
DEFAULT_DEGREE = 4


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("freediv").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(name: str):
    schema = load_schema(name)
    return jsonschema.validators.validator_for(schema)(schema)


def pointer(path) -> str:
    """JSON pointer for a jsonschema error path."""
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else ""


def validate(document, schema_name: str = "job.schema.json", base: str = "") -> None:
    errors = sorted(_validator(schema_name).iter_errors(document), key=lambda e: list(map(str, e.path)))
    if errors:
        e = errors[0]
        raise InputError(f"{base}{pointer(e.absolute_path) or '/'}: {e.message}")


@dataclass(frozen=True)
class JobConfig:
    order: int = DEFAULT_ORDER
    degree: int = DEFAULT_DEGREE
    skip_reduced_check: bool = False

    def __post_init__(self):
        if self.order < 2:
            raise InputError("truncation order must be at least 2")
        if self.degree < 1:
            raise InputError("degree bound must be at least 1")


@dataclass(frozen=True)
class Job:
    names: tuple
    f: Series | None
    derivations: tuple | None
    config: JobConfig
    weights: tuple | None = None
    cofactor: Series | None = None


def _parse(text: str, names, where: str) -> Series:
    try:
        return parse(text, names)
    except ParseError as exc:
        raise InputError(f"{where}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _fraction(v, where: str) -> Fraction:
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: not a rational number: {v!r}") from exc


def parse_input(document, order: int | None = None, degree: int | None = None, base: str = "") -> Job:
    """Validate a job document and parse its expressions.

    ``order`` and ``degree`` override the values in the document.
    """
    validate(document, "job.schema.json", base)
    names = tuple(document["variables"])
    f = _parse(document["f"], names, f"{base}/f") if "f" in document else None
    derivs = None
    if "derivations" in document:
        derivs = []
        for i, row in enumerate(document["derivations"]):
            if len(row) != len(names):
                raise InputError(f"{base}/derivations/{i}: expected {len(names)} coefficients, got {len(row)}")
            derivs.append(Derivation([_parse(t, names, f"{base}/derivations/{i}/{j}") for j, t in enumerate(row)]))
        derivs = tuple(derivs)
    weights = None
    if "weights" in document:
        if len(document["weights"]) != len(names):
            raise InputError(f"{base}/weights: expected {len(names)} weights")
        weights = tuple(_fraction(w, f"{base}/weights/{i}") for i, w in enumerate(document["weights"]))
    cof = _parse(document["cofactor"], names, f"{base}/cofactor") if "cofactor" in document else None
    config = JobConfig(
        order if order is not None else document.get("order", DEFAULT_ORDER),
        degree if degree is not None else document.get("degree", DEFAULT_DEGREE),
        document.get("skip_reduced_check", False),
    )
    return Job(names, f, derivs, config, weights, cof)


def load_document(path) -> object:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 (byte {exc.start})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at byte {exc.pos}: {exc.msg}") from exc

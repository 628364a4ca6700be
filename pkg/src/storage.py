"""JSON documents, CSV exports and the artifact store."""

import csv
import json
import logging
import math
import os
from typing import Any, Iterable, Sequence

import numpy as np

from .almost_periodic import JointTranslationReport, TranslationReport
from .bohr import BohrCoefficient, SpectrumReport
from .composition import Symbol, Verdict
from .errors import (
    AplineError,
    ArtifactWrite,
    FrequencyOrder,
    MalformedDocument,
    NegativeFrequency,
    NegativeLinearPart,
)
from .families import FamilySpec
from .polynomial import GDPolynomial, SupNormEnclosure
from .riesz import RieszSweep

logger = logging.getLogger(__name__)


def _number(data: dict, key: str) -> float:
    try:
        value = data[key]
    except (KeyError, TypeError):
        raise MalformedDocument(f"Missing field {key!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedDocument(f"Field {key!r} must be a number, got {value!r}")
    return float(value)


def _complex(data: dict, re_key: str = "re", im_key: str = "im") -> complex:
    return complex(_number(data, re_key), _number(data, im_key))


def _only_keys(data: dict, allowed: set, what: str):
    if not isinstance(data, dict):
        raise MalformedDocument(f"{what} must be an object")
    extra = set(data) - allowed
    if extra:
        raise MalformedDocument(f"Unexpected fields in {what}: {sorted(extra)}")


# Polynomials and enclosures

def polynomial_to_dict(P: GDPolynomial) -> dict:
    """{"terms": [{"lambda", "re", "im"}, ...]} in increasing frequency."""
    return {
        "terms": [
            {"lambda": lam, "re": c.real, "im": c.imag} for lam, c in P.terms
        ]
    }


def polynomial_from_dict(data: dict) -> GDPolynomial:
    """Inverse of polynomial_to_dict; frequencies must be strictly increasing."""
    _only_keys(data, {"terms"}, "polynomial")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise MalformedDocument("'terms' must be a list")
    parsed = []
    for term in terms:
        _only_keys(term, {"lambda", "re", "im"}, "term")
        lam = _number(term, "lambda")
        if lam < 0:
            raise NegativeFrequency(f"Frequency {lam} is negative")
        if parsed and lam <= parsed[-1][0]:
            raise FrequencyOrder(f"Frequency {lam} does not exceed {parsed[-1][0]}")
        parsed.append((lam, _complex(term)))
    return GDPolynomial(tuple(parsed))


def enclosure_to_dict(enc: SupNormEnclosure) -> dict:
    data = {
        "lower": enc.lower,
        "upper": enc.upper,
        "sigma": enc.sigma,
        "window": enc.window,
        "step": enc.step,
    }
    # an unknown bound is read back as infinity
    if math.isfinite(enc.bound):
        data["bound"] = enc.bound
    return data


def enclosure_from_dict(data: dict) -> SupNormEnclosure:
    _only_keys(data, {"lower", "upper", "sigma", "window", "step", "bound"}, "enclosure")
    lower, upper = _number(data, "lower"), _number(data, "upper")
    if not 0 <= lower <= upper:
        raise MalformedDocument(f"Enclosure [{lower}, {upper}] is not ordered")
    bound = _number(data, "bound") if "bound" in data else math.inf
    return SupNormEnclosure(
        lower, upper, _number(data, "sigma"), _number(data, "window"), _number(data, "step"), bound
    )


# Symbols and verdicts

def symbol_to_dict(phi: Symbol) -> dict:
    return {"a": phi.a, "psi": polynomial_to_dict(phi.psi)}


def symbol_from_dict(data: dict) -> Symbol:
    _only_keys(data, {"a", "psi"}, "symbol")
    a = _number(data, "a")
    if a < 0:
        raise NegativeLinearPart(f"Linear coefficient a={a} is negative")
    return Symbol(a, polynomial_from_dict(data.get("psi", {"terms": []})))


def verdict_to_dict(verdict: Verdict) -> dict:
    return {
        "kind": verdict.kind,
        "answer": "yes" if verdict.answer else "no",
        "evidence": dict(verdict.evidence),
        "reasons": list(verdict.reasons),
    }


def verdict_from_dict(data: dict) -> Verdict:
    _only_keys(data, {"kind", "answer", "evidence", "reasons"}, "verdict")
    if data.get("answer") not in ("yes", "no"):
        raise MalformedDocument("Verdict answer must be 'yes' or 'no'")
    return Verdict(
        kind=str(data["kind"]),
        answer=data["answer"] == "yes",
        evidence=dict(data.get("evidence", {})),
        reasons=tuple(data.get("reasons", ())),
    )


# Reports

def translation_report_to_dict(report: TranslationReport) -> dict:
    data = {
        "epsilon": report.epsilon,
        "kappa": report.kappa,
        "window": report.window,
        "step": report.step,
        "members": list(report.members),
        "max_gap": report.max_gap,
    }
    if isinstance(report, JointTranslationReport):
        data["family_size"] = report.family_size
        data["scales"] = list(report.scales) if report.scales is not None else None
    return data


def translation_report_from_dict(data: dict) -> TranslationReport:
    fields = dict(
        epsilon=_number(data, "epsilon"),
        kappa=_number(data, "kappa"),
        window=_number(data, "window"),
        step=_number(data, "step"),
        members=tuple(float(tau) for tau in data.get("members", ())),
        max_gap=_number(data, "max_gap"),
    )
    if "family_size" in data:
        scales = data.get("scales")
        return JointTranslationReport(
            **fields,
            family_size=int(data["family_size"]),
            scales=tuple(float(a) for a in scales) if scales is not None else None,
        )
    return TranslationReport(**fields)


def coefficient_to_dict(c: BohrCoefficient) -> dict:
    return {
        "lambda": c.lambda_,
        "re": c.estimate.real,
        "im": c.estimate.imag,
        "err": c.error_bound,
        "exact_re": c.exact.real,
        "exact_im": c.exact.imag,
    }


def coefficient_from_dict(data: dict) -> BohrCoefficient:
    return BohrCoefficient(
        lambda_=_number(data, "lambda"),
        estimate=_complex(data),
        error_bound=_number(data, "err"),
        exact=_complex(data, "exact_re", "exact_im"),
    )


def spectrum_to_dict(report: SpectrumReport) -> dict:
    return {
        "candidates": [coefficient_to_dict(c) for c in report.candidates],
        "detected": [coefficient_to_dict(c) for c in report.detected],
        "thresholds": list(report.thresholds),
    }


def spectrum_from_dict(data: dict) -> SpectrumReport:
    return SpectrumReport(
        candidates=tuple(coefficient_from_dict(c) for c in data["candidates"]),
        detected=tuple(coefficient_from_dict(c) for c in data.get("detected", ())),
        thresholds=tuple(float(x) for x in data.get("thresholds", ())),
    )


def sweep_to_dict(sweep: RieszSweep) -> dict:
    return {
        "kappa": sweep.kappa,
        "omegas": list(sweep.omegas),
        "errors": [enclosure_to_dict(e) for e in sweep.errors],
        "bounds": list(sweep.bounds),
    }


def sweep_from_dict(data: dict) -> RieszSweep:
    return RieszSweep(
        kappa=_number(data, "kappa"),
        omegas=tuple(float(w) for w in data["omegas"]),
        errors=tuple(enclosure_from_dict(e) for e in data["errors"]),
        bounds=tuple(float(b) for b in data["bounds"]),
    )


def family_spec_to_dict(spec: FamilySpec) -> dict:
    params = dict(spec.params)
    if isinstance(params.get("base"), GDPolynomial):
        params["base"] = polynomial_to_dict(params["base"])
    return {"generator": spec.generator, "params": params, "seed": spec.seed}


def family_spec_from_dict(data: dict) -> FamilySpec:
    _only_keys(data, {"generator", "params", "seed"}, "family spec")
    params = dict(data.get("params", {}))
    if "base" in params:
        params["base"] = polynomial_from_dict(params["base"])
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise MalformedDocument(f"seed must be an integer, got {seed!r}")
    return FamilySpec(str(data["generator"]), params, seed)


_TO_DICT = [
    (GDPolynomial, polynomial_to_dict),
    (SupNormEnclosure, enclosure_to_dict),
    (Symbol, symbol_to_dict),
    (Verdict, verdict_to_dict),
    (TranslationReport, translation_report_to_dict),
    (BohrCoefficient, coefficient_to_dict),
    (SpectrumReport, spectrum_to_dict),
    (RieszSweep, sweep_to_dict),
    (FamilySpec, family_spec_to_dict),
]


def to_dict(value: Any) -> dict:
    """Document dict of any result type; plain dicts pass through."""
    for cls, convert in _TO_DICT:
        if isinstance(value, cls):
            return convert(value)
    if isinstance(value, dict):
        return value
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def serialize(value: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline.

    Documents are strict JSON; a non-finite number raises ValueError.
    """
    return json.dumps(to_dict(value), sort_keys=True, indent=2, allow_nan=False) + "\n"


def from_dict(data: Any):
    """Rebuild a value from its document, recognising the kind by its fields."""
    if not isinstance(data, dict):
        raise MalformedDocument("Document must be a JSON object")
    keys = set(data)
    if keys == {"terms"}:
        return polynomial_from_dict(data)
    if {"a", "psi"} & keys:
        return symbol_from_dict(data)
    if {"lower", "upper"} <= keys:
        return enclosure_from_dict(data)
    if "members" in keys:
        return translation_report_from_dict(data)
    if "candidates" in keys:
        return spectrum_from_dict(data)
    if {"kind", "answer"} <= keys:
        return verdict_from_dict(data)
    if "generator" in keys:
        return family_spec_from_dict(data)
    if "omegas" in keys:
        return sweep_from_dict(data)
    if {"lambda", "err"} <= keys:
        return coefficient_from_dict(data)
    if "result" in keys:
        return data
    raise MalformedDocument(f"Unrecognised document with fields {sorted(keys)}")


def parse(text: str):
    """Parse JSON text into the result type it describes."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"Invalid JSON: {e}") from None
    try:
        return from_dict(data)
    except AplineError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedDocument(f"Malformed document: {e}") from None


def load_document(path: str):
    """Read and parse one JSON document; unreadable files are MalformedDocument."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse(f.read())
    except OSError as e:
        raise MalformedDocument(f"Could not read {path}: {e}") from None


# CSV exports

LINE_SCAN_HEADER = ("t", "re", "im", "abs")
DEFECT_HEADER = ("tau", "defect")
SWEEP_HEADER = ("omega", "err_lower", "err_upper", "bound")


def line_scan_rows(t: np.ndarray, values: np.ndarray) -> list[tuple]:
    return [
        (float(tk), float(v.real), float(v.imag), float(abs(v)))
        for tk, v in zip(t, values)
    ]


def defect_rows(taus: np.ndarray, defects: np.ndarray) -> list[tuple]:
    return [(float(tau), float(d)) for tau, d in zip(taus, defects)]


def matrix_rows(matrix: np.ndarray) -> tuple[tuple, list[tuple]]:
    n = matrix.shape[0]
    header = ("i",) + tuple(str(j) for j in range(n))
    return header, [(i,) + tuple(float(x) for x in matrix[i]) for i in range(n)]


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]):
    """Write one CSV table with a header row."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


class ArtifactStore:
    """Writes JSON and CSV artifacts of a run into one output directory."""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir
        self.written: list[str] = []

    def _path(self, name: str) -> str:
        try:
            os.makedirs(self.output_dir, exist_ok=True)
        except OSError as e:
            raise ArtifactWrite(f"Could not create {self.output_dir}: {e}") from None
        return os.path.join(self.output_dir, name)

    def save_json(self, name: str, value: Any) -> str:
        """Write `value` as NAME.json; failures raise ArtifactWrite."""
        path = self._path(name)
        text = serialize(value)
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise ArtifactWrite(f"Could not save {path}: {e}") from None
        logger.debug("Saved %s", path)
        self.written.append(path)
        return path

    def save_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        path = self._path(name)
        try:
            write_csv(path, header, rows)
        except OSError as e:
            raise ArtifactWrite(f"Could not save {path}: {e}") from None
        logger.debug("Saved %s", path)
        self.written.append(path)
        return path

#!/usr/bin/env python3
"""Command-line entry point: one subcommand per analysis."""

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import config
from .almost_periodic import (
    ball_grid,
    defect_curve,
    joint_translation_set,
    schottky_bound,
    translation_set,
    verify_schottky,
)
from .bohr import FREQUENCY_RULES, abscissa_L, bohr_coefficient, bohr_spectrum, frequency_prefix, tail_bound
from .composition import (
    Symbol,
    check_compact,
    check_compact_subspace,
    classify_bounded,
    sublevel_uniform_continuity,
)
from .errors import AplineError, InputParse, MalformedDocument, NumericPrecondition, UnknownSubcommand
from .families import FamilySpec, build_family
from .montel import distance_matrix, exponential_separation, counterexample_gap, joint_ap_dichotomy
from .polynomial import GDPolynomial, certified_sup_norm, evaluate, line_scan
from .riesz import poisson_smooth_check, riesz_error_sweep, riesz_mean
from .storage import (
    DEFECT_HEADER,
    LINE_SCAN_HEADER,
    SWEEP_HEADER,
    ArtifactStore,
    defect_rows,
    line_scan_rows,
    load_document,
    matrix_rows,
    serialize,
    spectrum_to_dict,
    to_dict,
)

logger = logging.getLogger(__name__)

SUBCOMMANDS = (
    "eval", "norm", "translate-set", "joint-set", "bohr", "spectrum", "abscissa",
    "riesz", "riesz-sweep", "poisson-check", "schottky", "classify", "compact",
    "compact-subspace", "algebra", "montel", "counterexample", "separation",
)

POSITIVE_CONTROLS = ("epsilon", "T", "step", "sigma", "radius", "r", "omega", "window")
NONNEGATIVE_CONTROLS = ("kappa", "lambda", "lambda_n", "abs_fc", "dist")


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting."""

    def error(self, message):
        raise InputParse(message)


def parse_complex(text: str) -> complex:
    """Accept 1.5, 2i, 0+3.14i or 1-2j."""
    return complex(text.replace(" ", "").replace("i", "j"))


@dataclass
class RunConfig:
    """Subcommand, input paths and numeric controls of one invocation."""
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    controls: dict[str, Any] = field(default_factory=dict)
    output_format: str = "json"
    out: Optional[str] = None
    seed: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {k: v for k, v in vars(args).items() if v is not None}
        command = values.pop("command")
        output_format = values.pop("format", "json")
        out = values.pop("out", None)
        seed = values.pop("seed", None)
        inputs = {k: values.pop(k) for k in ("poly", "symbol", "family") if k in values}
        return cls(command, inputs, values, output_format, out, seed)

    def validate(self):
        for name in POSITIVE_CONTROLS:
            value = self.controls.get(name)
            if value is not None and not value > 0:
                raise NumericPrecondition(f"--{name.replace('_', '-')} must be positive, got {value}")
        for name in NONNEGATIVE_CONTROLS:
            value = self.controls.get(name)
            if value is not None and not value >= 0:
                raise NumericPrecondition(f"--{name.replace('_', '-')} must be >= 0, got {value}")
        for name in ("omegas", "deltas", "epsilons", "scales"):
            values = self.controls.get(name)
            if values is not None and any(not v > 0 for v in values):
                raise NumericPrecondition(f"--{name} must all be positive")
        omegas = self.controls.get("omegas")
        if omegas is not None and any(b <= a for a, b in zip(omegas, omegas[1:])):
            raise NumericPrecondition("--omegas must be strictly increasing")
        candidates = self.controls.get("candidates")
        if candidates is not None and (
            any(c < 0 for c in candidates) or any(b < a for a, b in zip(candidates, candidates[1:]))
        ):
            raise NumericPrecondition("--candidates must be sorted and >= 0")
        for name in ("N", "samples"):
            if self.controls.get(name) is not None and self.controls[name] < 1:
                raise NumericPrecondition(f"--{name} must be positive")
        if self.seed is not None and self.seed < 0:
            raise NumericPrecondition("--seed must be >= 0")


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--out", help="Directory for JSON/CSV artifacts (default: stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, help="Seed for random family generators")


def build_parser() -> CliArgumentParser:
    """Parser with one subcommand per analysis."""
    parser = CliArgumentParser(prog="apline", description="Almost periodic analysis on half-planes")
    subs = parser.add_subparsers(dest="command", parser_class=CliArgumentParser)

    def sub(name: str, help_text: str, *flags: tuple) -> argparse.ArgumentParser:
        p = subs.add_parser(name, help=help_text)
        for args, kwargs in flags:
            p.add_argument(*args, **kwargs)
        _add_common(p)
        return p

    poly = (("--poly",), dict(required=True, help="Polynomial JSON"))
    polys = (("--poly",), dict(nargs="+", help="Polynomial JSON files"))
    symbol = (("--symbol",), dict(required=True, help="Symbol JSON"))
    family = (("--family",), dict(help="FamilySpec manifest JSON"))
    kappa = (("--kappa",), dict(type=float, required=True))
    epsilon = (("--epsilon",), dict(type=float, required=True))
    scan_T = (("--T",), dict(type=float, required=True, dest="T", help="Scan window [0, T]"))
    step = (("--step",), dict(type=float))
    window = (("--window",), dict(type=float))

    sub("eval", "Evaluate a polynomial", poly, (("--s",), dict(type=parse_complex, required=True)))
    sub("norm", "Certified sup norm on Re s = kappa", poly, kappa, window, step)
    sub("translate-set", "epsilon-translation numbers", poly, epsilon, kappa, scan_T, step)
    sub("joint-set", "Common translation numbers of a family", polys, family, epsilon, kappa,
        scan_T, step, (("--scales",), dict(type=float, nargs="+")))
    sub("bohr", "Bohr coefficient by mean value", poly,
        (("--lambda",), dict(type=float, required=True, dest="lambda")),
        (("--sigma",), dict(type=float, default=config.DEFAULT_BOHR_SIGMA)),
        (("--T",), dict(type=float, default=config.DEFAULT_BOHR_T, dest="T")))
    sub("spectrum", "Bohr spectrum over candidates", poly,
        (("--candidates",), dict(type=float, nargs="+", required=True)),
        (("--sigma",), dict(type=float, default=config.DEFAULT_BOHR_SIGMA)),
        (("--T",), dict(type=float, default=config.DEFAULT_BOHR_T, dest="T")),
        (("--threshold",), dict(type=float)))
    sub("abscissa", "Abscissa L(lambda) and tail bounds",
        (("--rule",), dict(choices=FREQUENCY_RULES, required=True)),
        (("--N",), dict(type=int, default=10_000, dest="N")),
        (("--kappa",), dict(type=float)),
        (("--cut",), dict(type=int)))
    sub("riesz", "Riesz mean R_omega", poly, (("--omega",), dict(type=float, required=True)))
    sub("riesz-sweep", "Riesz approximation errors", poly, kappa,
        (("--omegas",), dict(type=float, nargs="+", required=True)), window, step)
    sub("poisson-check", "Poisson smoothing identity", poly, kappa,
        (("--sigma",), dict(type=float, required=True)),
        (("--t",), dict(type=float, default=0.0)))
    sub("schottky", "Schottky bound, or verify exp(P) on a ball",
        (("--poly",), dict(help="Verify f = exp(P) on the ball")),
        (("--abs-fc",), dict(type=float, dest="abs_fc")),
        (("--center",), dict(type=parse_complex)),
        (("--radius",), dict(type=float, required=True)),
        (("--dist",), dict(type=float)),
        (("--samples",), dict(type=int, default=100)))
    for name in ("classify", "compact", "compact-subspace"):
        sub(name, f"Composition verdict: {name}", symbol, (("--window",), dict(type=float)))
    sub("algebra", "Uniform continuity on sublevel sets", symbol,
        (("--r",), dict(type=float, required=True)),
        (("--deltas",), dict(type=float, nargs="+")),
        (("--epsilons",), dict(type=float, nargs="+")))
    sub("montel", "Joint almost periodicity vs uniform clustering",
        (("--family",), dict(required=True, help="FamilySpec manifest JSON")),
        epsilon, kappa, scan_T, step)
    sub("counterexample", "Separation of two exponentials",
        (("--lambda-n",), dict(type=float, required=True, dest="lambda_n")),
        (("--lambda",), dict(type=float, required=True, dest="lambda")),
        kappa)
    sub("separation", "Pairwise separation of exponentials",
        (("--lambdas",), dict(type=float, nargs="+", required=True)), kappa)
    return parser


def _load(path: str, expected: type, what: str):
    value = load_document(path)
    if not isinstance(value, expected):
        raise MalformedDocument(f"{path} is not a {what} document")
    return value


def _poly(cfg: RunConfig) -> GDPolynomial:
    return _load(cfg.inputs["poly"], GDPolynomial, "polynomial")


def _symbol(cfg: RunConfig) -> Symbol:
    return _load(cfg.inputs["symbol"], Symbol, "symbol")


def _family(cfg: RunConfig) -> list[GDPolynomial]:
    if "family" in cfg.inputs:
        spec = _load(cfg.inputs["family"], FamilySpec, "family spec")
        if cfg.seed is not None:
            spec = FamilySpec(spec.generator, spec.params, cfg.seed)
        return build_family(spec)
    if "poly" in cfg.inputs:
        return [_load(path, GDPolynomial, "polynomial") for path in cfg.inputs["poly"]]
    raise InputParse("Give --family or --poly")


def _result(name: str, **fields) -> dict:
    return {"result": name, **fields}


def cmd_eval(cfg):
    value = evaluate(_poly(cfg), cfg.controls["s"])
    return _result("eval", re=value.real, im=value.imag, abs=abs(value)), None


def cmd_norm(cfg):
    P, c = _poly(cfg), cfg.controls
    enclosure = certified_sup_norm(P, c["kappa"], c.get("window"), c.get("step"))
    t, values = line_scan(P, c["kappa"], enclosure.window, c.get("step", config.DEFAULT_COARSE_STEP))
    return enclosure, (LINE_SCAN_HEADER, line_scan_rows(t, values))


def cmd_translate_set(cfg):
    P, c = _poly(cfg), cfg.controls
    step = c.get("step", config.DEFAULT_SCAN_STEP)
    report = translation_set(P, c["epsilon"], c["kappa"], c["T"], step)
    taus, defects = defect_curve(P, c["kappa"], c["T"], step)
    return report, (DEFECT_HEADER, defect_rows(taus, defects))


def cmd_joint_set(cfg):
    c = cfg.controls
    report = joint_translation_set(
        _family(cfg), c["epsilon"], c["kappa"], c["T"],
        c.get("step", config.DEFAULT_SCAN_STEP), c.get("scales"),
    )
    return report, None


def cmd_bohr(cfg):
    c = cfg.controls
    return bohr_coefficient(_poly(cfg), c["lambda"], c["sigma"], c["T"]), None


def cmd_spectrum(cfg):
    c = cfg.controls
    report = bohr_spectrum(_poly(cfg), c["candidates"], c["sigma"], c["T"], c.get("threshold"))
    rows = [(x["lambda"], x["re"], x["im"], x["err"]) for x in spectrum_to_dict(report)["candidates"]]
    return report, (("lambda", "re", "im", "err"), rows)


def cmd_abscissa(cfg):
    c = cfg.controls
    lambdas = frequency_prefix(c["rule"], c["N"])
    estimate = abscissa_L(lambdas)
    infinite = math.isinf(estimate)
    fields = {"rule": c["rule"], "N": c["N"], "abscissa": None if infinite else estimate, "infinite": infinite}
    if "kappa" in c:
        cut = c.get("cut", c["N"])
        fields.update(kappa=c["kappa"], cut=cut, tail=tail_bound(lambdas, c["kappa"], cut))
    return _result("abscissa", **fields), None


def cmd_riesz(cfg):
    return riesz_mean(_poly(cfg), cfg.controls["omega"]), None


def cmd_riesz_sweep(cfg):
    c = cfg.controls
    sweep = riesz_error_sweep(_poly(cfg), c["kappa"], c["omegas"], c.get("window"), c.get("step"))
    return sweep, (SWEEP_HEADER, sweep.rows())


def cmd_poisson_check(cfg):
    c = cfg.controls
    check = poisson_smooth_check(_poly(cfg), c["kappa"], c["sigma"], c["t"])
    check.raise_for_budget()
    return _result(
        "poisson-check",
        convolution_re=check.convolution.real,
        convolution_im=check.convolution.imag,
        direct_re=check.direct.real,
        direct_im=check.direct.imag,
        discrepancy=check.discrepancy,
        remainder=check.remainder,
    ), None


def cmd_schottky(cfg):
    c = cfg.controls
    if "poly" not in cfg.inputs:
        if "abs_fc" not in c or "dist" not in c:
            raise InputParse("schottky needs --abs-fc and --dist, or --poly and --center")
        bound = schottky_bound(c["abs_fc"], c["radius"], c["dist"])
        return _result("schottky", bound=bound), None
    if "center" not in c:
        raise InputParse("schottky --poly needs --center")
    P, center, r = _poly(cfg), c["center"], c["radius"]
    points = ball_grid(center, r, c["samples"], c["samples"])
    check = verify_schottky(points, np.exp(evaluate(P, points)), center, np.exp(evaluate(P, center)), r)
    return _result(
        "schottky",
        holds=check.holds,
        samples=check.samples,
        violations=check.violations,
        min_slack=check.min_slack,
        max_slack=check.max_slack,
        center_slack=check.center_slack,
    ), None


def cmd_classify(cfg):
    return classify_bounded(_symbol(cfg), cfg.controls.get("window")), None


def cmd_compact(cfg):
    return check_compact(_symbol(cfg), cfg.controls.get("window")), None


def cmd_compact_subspace(cfg):
    return check_compact_subspace(_symbol(cfg), cfg.controls.get("window")), None


def cmd_algebra(cfg):
    c = cfg.controls
    report = sublevel_uniform_continuity(
        _symbol(cfg), c["r"],
        c.get("deltas", config.DEFAULT_DELTAS), c.get("epsilons", config.DEFAULT_EPSILONS),
    )
    return report.verdict, (("delta", "modulus"), list(zip(report.deltas, report.modulus)))


def cmd_montel(cfg):
    c = cfg.controls
    family = _family(cfg)
    report = joint_ap_dichotomy(
        family, c["epsilon"], c["kappa"], c["T"], c.get("step", config.DEFAULT_SCAN_STEP)
    )
    extraction = report.extraction
    document = _result(
        "montel",
        jointly_ap=report.jointly_ap,
        max_gap=report.max_gap,
        translation_count=report.translation_count,
        chain=list(extraction.indices),
        diameter=extraction.diameter,
        clustering_succeeds=report.clustering_succeeds,
        consistent=report.consistent,
        max_pair_lower=report.max_pair_lower,
        limit=to_dict(extraction.limit),
    )
    return document, matrix_rows(distance_matrix(family, c["kappa"]))


def cmd_counterexample(cfg):
    c = cfg.controls
    gap = counterexample_gap(c["lambda_n"], c["lambda"], c["kappa"])
    return _result(
        "counterexample",
        t_star=gap.t_star,
        measured=gap.measured,
        measured_squared=gap.measured_squared,
        closed_form_squared=gap.closed_form_squared,
        bound=gap.bound,
    ), None


def cmd_separation(cfg):
    c = cfg.controls
    matrix = exponential_separation(c["lambdas"], c["kappa"])
    return _result("separation", lambdas=list(c["lambdas"]), kappa=c["kappa"], matrix=matrix.tolist()), \
        matrix_rows(matrix)


HANDLERS: dict[str, Callable] = {
    "eval": cmd_eval,
    "norm": cmd_norm,
    "translate-set": cmd_translate_set,
    "joint-set": cmd_joint_set,
    "bohr": cmd_bohr,
    "spectrum": cmd_spectrum,
    "abscissa": cmd_abscissa,
    "riesz": cmd_riesz,
    "riesz-sweep": cmd_riesz_sweep,
    "poisson-check": cmd_poisson_check,
    "schottky": cmd_schottky,
    "classify": cmd_classify,
    "compact": cmd_compact,
    "compact-subspace": cmd_compact_subspace,
    "algebra": cmd_algebra,
    "montel": cmd_montel,
    "counterexample": cmd_counterexample,
    "separation": cmd_separation,
}


def _emit(cfg: RunConfig, document, table):
    if cfg.out is None:
        if cfg.output_format == "csv" and table is not None:
            header, rows = table
            writer = csv.writer(sys.stdout)
            writer.writerow(header)
            writer.writerows(rows)
        else:
            sys.stdout.write(serialize(document))
        return

    store = ArtifactStore(cfg.out)
    name = cfg.command
    store.save_json(f"{name}.json", document)
    if cfg.output_format == "csv" and table is not None:
        header, rows = table
        store.save_csv(f"{name}.csv", header, rows)
    for path in store.written:
        print(f"Wrote {path}")


def run(argv: list[str]) -> int:
    """Run one subcommand; return the process exit code."""
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr)
    try:
        if not argv or argv[0] not in SUBCOMMANDS:
            if argv and argv[0] in ("-h", "--help"):
                build_parser().print_help()
                return 0
            raise UnknownSubcommand(f"Unknown subcommand {argv[0] if argv else '(none)'!r}")
        cfg = RunConfig.from_args(build_parser().parse_args(argv))
        cfg.validate()
        logger.info("Running %s", cfg.command)
        document, table = HANDLERS[cfg.command](cfg)
        _emit(cfg, document, table)
        return 0
    except AplineError as e:
        sys.stderr.write(json.dumps(e.to_dict()) + "\n")
        return e.exit_code


def main():
    """Console entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

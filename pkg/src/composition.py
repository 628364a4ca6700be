"""Composition symbols phi(s) = a*s + psi(s) on the right half-plane.

Re psi is harmonic and tends to Re c_0 as Re s -> +inf, so its infimum over a
closed half-plane is the infimum over the boundary line. Lower bounds combine
the triangle bound Re c_0 - sum_{lambda>0} |c| e^{-lambda kappa} with a sampled
line minimum less its Lipschitz slack.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import BallEscape, InconsistentSamples, NegativeLinearPart, NumericPrecondition
from .polynomial import GDPolynomial, HalfPlaneGrid, evaluate, line_lipschitz, line_scan

logger = logging.getLogger(__name__)

SELF_MAP = "SelfMap"
BOUNDED_HINFTY_AP = "BoundedHinftyAp"
BOUNDED_AAP = "BoundedAap"
COMPACT_HINFTY_AP = "CompactHinftyAp"
COMPACT_SUBSPACE = "CompactSubspace"


@dataclass(frozen=True)
class Symbol:
    """Composition symbol phi(s) = a s + psi(s) with a >= 0."""
    a: float
    psi: GDPolynomial = field(default_factory=GDPolynomial)

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise NumericPrecondition(f"a must be finite, got {self.a}")
        if self.a < 0:
            raise NegativeLinearPart(f"Linear coefficient a={self.a} is negative")
        object.__setattr__(self, "a", float(self.a))

    def __call__(self, s):
        return self.a * np.asarray(s, dtype=complex) + evaluate(self.psi, s)


@dataclass(frozen=True)
class Verdict:
    kind: str
    answer: bool
    evidence: dict = field(default_factory=dict)
    reasons: tuple[str, ...] = ()


@dataclass(frozen=True)
class ImageBound:
    kappa: float
    nu: float
    status: Optional[str] = None


@dataclass(frozen=True)
class LinearCoefficientEstimate:
    a_est: float
    error: float
    slope: float
    slope_error: float


@dataclass(frozen=True)
class PsiRecovery:
    psi: np.ndarray = field(compare=False, repr=False)
    pairs: int
    violations: int
    max_ratio: float

    @property
    def certificate_holds(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class SublevelReport:
    verdict: Verdict
    deltas: tuple[float, ...]
    modulus: tuple[float, ...]
    certified_slope: float
    samples: int


def _positive_part(psi: GDPolynomial) -> GDPolynomial:
    return psi - psi.coefficient(0.0)


def _triangle_lower(psi: GDPolynomial, kappa: float) -> float:
    tail = _positive_part(psi)
    return psi.coefficient(0.0).real - float(np.sum(np.abs(tail.coeffs) * np.exp(-tail.lambdas * kappa)))


def _line_re_min(psi: GDPolynomial, sigma: float, t_window: Optional[float], step: float) -> float:
    _, values = line_scan(psi, sigma, t_window or config.DEFAULT_WINDOW, step)
    return float(values.real.min())


def _re_lower_bound(psi: GDPolynomial, kappa: float, t_window: Optional[float], step: float) -> float:
    """Lower bound for inf Re psi over the closed half-plane Re s >= kappa."""
    if psi.is_constant:
        return psi.coefficient(0.0).real
    grid = _line_re_min(psi, kappa, t_window, step) - line_lipschitz(psi, kappa) * step / 2
    return max(_triangle_lower(psi, kappa), grid)


def _boundary_re_inf(psi: GDPolynomial, t_window: Optional[float], step: float) -> float:
    """Lower bound for inf Re psi over C_0, probing lines close to Re s = 0."""
    if psi.is_constant:
        return psi.coefficient(0.0).real
    weights = np.abs(psi.coeffs) * psi.lambdas
    probes = []
    for sigma in config.BOUNDARY_PROBES:
        slack = line_lipschitz(psi, sigma) * step / 2 + float(weights.sum()) * sigma
        probes.append(_line_re_min(psi, sigma, t_window, step) - slack)
    return max(_triangle_lower(psi, 0.0), min(probes))


def validate_symbol(
    phi: Symbol,
    probes: Sequence[float] = config.BOUNDARY_PROBES,
    t_window: Optional[float] = None,
    step: float = config.RANGE_STEP,
) -> Verdict:
    """Decide whether phi maps C_0 into C_0.

    A constant psi = c needs Re c > 0, or a > 0 and Re c >= 0. Otherwise the
    sampled minimum of Re psi near the boundary must be nonnegative.
    """
    psi = phi.psi
    if psi.is_constant:
        c = psi.coefficient(0.0).real
        ok = c > 0 or (phi.a > 0 and c >= 0)
        evidence = {"a": phi.a, "min_re_psi": c}
    else:
        sampled = min(_line_re_min(psi, sigma, t_window, step) for sigma in probes)
        ok = sampled >= -config.SELF_MAP_TOLERANCE
        evidence = {"a": phi.a, "min_re_psi": sampled}
    return Verdict(SELF_MAP, ok, evidence, () if ok else ("NotSelfMap",))


def image_lower_bound(
    phi: Symbol,
    kappa: float,
    t_window: Optional[float] = None,
    step: float = config.RANGE_STEP,
) -> ImageBound:
    """nu with phi(C_kappa) inside C_nu: a*kappa plus a lower bound of inf Re psi on C_kappa."""
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    nu = phi.a * kappa + _re_lower_bound(phi.psi, kappa, t_window, step)
    return ImageBound(kappa, nu, None if nu > 0 else "NonpositiveLowerBound")


def image_lower_bounds(
    phi: Symbol,
    kappas: Sequence[float],
    t_window: Optional[float] = None,
    step: float = config.RANGE_STEP,
) -> list[ImageBound]:
    """image_lower_bound over increasing kappas, non-decreasing in kappa.

    A bound for C_kappa also holds on every C_kappa' with kappa' >= kappa, so each
    nu is the running maximum of the single-kappa bounds.
    """
    kappas = [float(k) for k in kappas]
    if any(b <= a for a, b in zip(kappas, kappas[1:])):
        raise NumericPrecondition("kappas must be strictly increasing")
    bounds, best = [], -math.inf
    for kappa in kappas:
        best = max(best, image_lower_bound(phi, kappa, t_window, step).nu)
        bounds.append(ImageBound(kappa, best, None if best > 0 else "NonpositiveLowerBound"))
    return bounds


def classify_bounded(phi: Symbol, t_window: Optional[float] = None) -> Verdict:
    """Boundedness of C_phi on H-infinity_ap: every valid symbol of this form qualifies."""
    validity = validate_symbol(phi, t_window=t_window)
    if not validity.answer:
        return Verdict(BOUNDED_HINFTY_AP, False, validity.evidence, validity.reasons)
    evidence = {"a": phi.a, "frequencies": len(phi.psi)}
    for bound in image_lower_bounds(phi, config.IMAGE_KAPPAS, t_window):
        evidence[f"nu_{bound.kappa:g}"] = bound.nu
    return Verdict(BOUNDED_HINFTY_AP, True, evidence)


def _witness_grid() -> HalfPlaneGrid:
    half = config.SUBLEVEL_T_WINDOW / 2
    return HalfPlaneGrid(
        kappa=config.BOUNDARY_PROBES[0],
        sigma_max=config.SUBLEVEL_SIGMA_MAX,
        t_min=-half,
        t_max=half,
        n_sigma=int(round(config.SUBLEVEL_SIGMA_MAX / config.SUBLEVEL_STEP)) + 1,
        n_t=int(round(config.SUBLEVEL_T_WINDOW / config.SUBLEVEL_STEP)) + 1,
    )


def _witness_norms(phi: Symbol, n: int) -> dict:
    """Sampled sup norms of f_n o phi and g_n o phi, f_n(w) = e^{-w/n} - 1, g_n(w) = e^{-nw}."""
    w = phi(_witness_grid().points())
    return {
        f"witness_f_{n}": float(np.abs(np.exp(-w / n) - 1).max()),
        f"witness_g_{n}": float(np.abs(np.exp(-n * w)).max()),
    }


def check_compact(
    phi: Symbol,
    t_window: Optional[float] = None,
    step: float = config.RANGE_STEP,
) -> Verdict:
    """Compactness of C_phi on H-infinity_ap: a = 0 and inf Re psi over C_0 > 0."""
    validity = validate_symbol(phi, t_window=t_window, step=step)
    if not validity.answer:
        return Verdict(COMPACT_HINFTY_AP, False, validity.evidence, validity.reasons)
    psi = phi.psi
    inf_re = _boundary_re_inf(psi, t_window, step)
    if psi.is_constant:
        sup_re, sup_abs_im = inf_re, abs(psi.coefficient(0.0).imag)
    else:
        _, values = line_scan(psi, config.BOUNDARY_PROBES[0], t_window or config.DEFAULT_WINDOW, step)
        slack = line_lipschitz(psi, 0.0) * step / 2
        sup_re = float(values.real.max()) + slack
        sup_abs_im = float(np.abs(values.imag).max()) + slack
    # sup_re and sup_abs_im are None when the linear part makes the image unbounded
    unbounded = phi.a > 0
    evidence = {
        "a": phi.a,
        "inf_re": inf_re,
        "sup_re": None if unbounded else sup_re,
        "sup_abs_im": None if unbounded else sup_abs_im,
        "unbounded": unbounded,
    }
    evidence.update(_witness_norms(phi, config.WITNESS_INDEX))

    reasons = []
    if unbounded:
        reasons += ["ReUnboundedAbove", "ImUnbounded"]
    if not inf_re > 0:
        reasons.append("ReNotBoundedAwayFromZero")
    return Verdict(COMPACT_HINFTY_AP, not reasons, evidence, tuple(reasons))


def check_compact_subspace(
    phi: Symbol,
    t_window: Optional[float] = None,
    step: float = config.RANGE_STEP,
) -> Verdict:
    """Compactness on the uniformly continuous subspace: inf Re phi over C_0 > 0.

    inf over C_0 of a*sigma + Re psi is the boundary infimum of Re psi; the
    witness kappa with phi(C_0) inside the closure of C_kappa is that infimum.
    """
    validity = validate_symbol(phi, t_window=t_window, step=step)
    if not validity.answer:
        return Verdict(COMPACT_SUBSPACE, False, validity.evidence, validity.reasons)
    inf_re = _boundary_re_inf(phi.psi, t_window, step)
    ok = inf_re > 0
    evidence = {"a": phi.a, "inf_re": inf_re, "kappa": max(inf_re, 0.0)}
    return Verdict(COMPACT_SUBSPACE, ok, evidence, () if ok else ("ReNotBoundedAwayFromZero",))


def estimate_linear_coefficient(
    sigmas: Sequence[float],
    phi_values: Sequence[complex],
    psi_norm_bound: float,
) -> LinearCoefficientEstimate:
    """Recover a from samples of phi on the real axis.

    Re phi(sigma)/sigma is within ||psi||/sigma of a; the secant slope between
    the first and last samples is within 2||psi||/(sigma_m - sigma_1).
    """
    sigmas = np.asarray(sigmas, dtype=float)
    values = np.asarray(phi_values, dtype=complex)
    if sigmas.size < 2 or sigmas.size != values.size:
        raise NumericPrecondition("Need at least two matching (sigma, phi) samples")
    if np.any(np.diff(sigmas) <= 0) or sigmas[0] <= 0:
        raise NumericPrecondition("sigmas must be positive and strictly increasing")
    if sigmas[-1] < 10:
        raise NumericPrecondition(f"largest sigma must be >= 10, got {sigmas[-1]}")
    if psi_norm_bound < 0:
        raise NumericPrecondition("psi norm bound must be nonnegative")

    a_est = values[-1].real / sigmas[-1]
    error = psi_norm_bound / sigmas[-1]
    span = sigmas[-1] - sigmas[0]
    slope = (values[-1] - values[0]).real / span
    slope_error = 2 * psi_norm_bound / span
    if abs(a_est - slope) > error + slope_error + config.ROUNDING_TOLERANCE:
        raise InconsistentSamples(
            f"Pointwise estimate {a_est:.6g} and slope {slope:.6g} disagree"
        )
    return LinearCoefficientEstimate(float(a_est), float(error), float(slope), float(slope_error))


def recover_psi_from_exponential(
    g_values: Sequence[complex],
    lambda_: float,
    r: float,
    center_value: complex,
    reference_index: int = 0,
    psi_ref: complex = 0j,
    pairs: int = config.PAIR_SAMPLES,
    seed: int = 0,
) -> PsiRecovery:
    """Recover psi from samples of g = e^{-lambda psi} lying in the ball B_r(center_value).

    psi(s) = psi_ref - (Log(g(s)/g_c) - Log(g_ref/g_c)) / lambda with the
    principal logarithm. Pairs of samples are checked against
    |psi(s1) - psi(s2)| <= |g(s1) - g(s2)| / (lambda r).
    """
    g = np.asarray(g_values, dtype=complex).ravel()
    if not lambda_ > 0:
        raise NumericPrecondition(f"lambda must be positive, got {lambda_}")
    if not r > 0:
        raise NumericPrecondition(f"r must be positive, got {r}")
    if g.size == 0:
        raise NumericPrecondition("No samples given")
    if 2 * r > abs(center_value):
        raise BallEscape(f"Ball radius {r} must not exceed |g_c|/2 = {abs(center_value) / 2}")
    escaped = np.abs(g - center_value) >= r
    if escaped.any():
        raise BallEscape(f"{int(escaped.sum())} samples lie outside B_r(g_c)")

    logs = np.log(g / center_value)
    psi = psi_ref - (logs - logs[reference_index]) / lambda_

    rng = np.random.default_rng(seed)
    i, j = rng.integers(g.size, size=(2, pairs))
    lhs = np.abs(psi[i] - psi[j])
    rhs = np.abs(g[i] - g[j]) / (lambda_ * r)
    violations = int(np.sum(lhs > rhs + config.ROUNDING_TOLERANCE))
    nonzero = rhs > 0
    max_ratio = float((lhs[nonzero] / rhs[nonzero]).max()) if nonzero.any() else 0.0
    return PsiRecovery(psi=psi, pairs=pairs, violations=violations, max_ratio=max_ratio)


def _empirical_modulus(values: np.ndarray, mask: np.ndarray, spacing, delta: float) -> float:
    h_sigma, h_t = spacing
    reach_sigma = int(delta / h_sigma + 1e-9)
    reach_t = int(delta / h_t + 1e-9)
    rows, cols = values.shape
    worst = 0.0
    for di in range(0, reach_sigma + 1):
        for dj in range(-reach_t, reach_t + 1):
            if di == 0 and dj <= 0:
                continue
            if (di * h_sigma) ** 2 + (dj * h_t) ** 2 > delta * delta * (1 + 1e-12):
                continue
            if di >= rows or abs(dj) >= cols:
                continue
            a = values[di:, max(dj, 0):cols + min(dj, 0)]
            b = values[:rows - di, max(-dj, 0):cols - max(dj, 0)]
            ok = mask[di:, max(dj, 0):cols + min(dj, 0)] & mask[:rows - di, max(-dj, 0):cols - max(dj, 0)]
            if ok.any():
                worst = max(worst, float(np.abs(a - b)[ok].max()))
    return worst


def sublevel_uniform_continuity(
    phi: Symbol,
    r: float,
    deltas: Sequence[float] = config.DEFAULT_DELTAS,
    epsilons: Sequence[float] = config.DEFAULT_EPSILONS,
) -> SublevelReport:
    """Empirical modulus of continuity of phi on the sampled sublevel set {Re phi < r}."""
    if not r > 0:
        raise NumericPrecondition(f"r must be positive, got {r}")
    deltas = tuple(sorted((float(d) for d in deltas), reverse=True))
    if not deltas or deltas[-1] <= 0:
        raise NumericPrecondition("deltas must be positive")
    slope = phi.a + line_lipschitz(phi.psi, 0.0)

    grid = HalfPlaneGrid(
        kappa=0.0,
        sigma_max=config.SUBLEVEL_SIGMA_MAX,
        t_min=-config.SUBLEVEL_T_WINDOW / 2,
        t_max=config.SUBLEVEL_T_WINDOW / 2,
        n_sigma=int(round(config.SUBLEVEL_SIGMA_MAX / config.SUBLEVEL_STEP)) + 1,
        n_t=int(round(config.SUBLEVEL_T_WINDOW / config.SUBLEVEL_STEP)) + 1,
    )
    values = phi(grid.points())
    mask = values.real < r
    samples = int(mask.sum())
    if samples == 0:
        verdict = Verdict(BOUNDED_AAP, True, {"certified_slope": slope}, ("EmptySublevel",))
        return SublevelReport(verdict, deltas, (0.0,) * len(deltas), slope, 0)

    modulus = tuple(_empirical_modulus(values, mask, grid.spacing, d) for d in deltas)
    decreasing = all(b < a or a == 0 for a, b in zip(modulus, modulus[1:]))
    small = modulus[-1] < min(epsilons)
    evidence = {"certified_slope": slope, "samples": samples, "final_modulus": modulus[-1]}
    reasons = ()
    if not decreasing:
        reasons += ("ModulusNotDecreasing",)
    if not small:
        reasons += ("ModulusAboveEpsilon",)
    verdict = Verdict(BOUNDED_AAP, decreasing and small, evidence, reasons)
    logger.debug("Sublevel modulus for r=%g: %s", r, modulus)
    return SublevelReport(verdict, deltas, modulus, slope, samples)

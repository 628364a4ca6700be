"""Translation numbers, relative density and Schottky-type bounds.

The defect of a vertical translation tau on C_kappa is

    sup_{Re s > kappa} |P(s + i tau) - P(s)| <= sum_n |c_n| e^{-lambda_n kappa} |e^{-i lambda_n tau} - 1|.

The right-hand side is exact for a single term and whenever the frequencies are
linearly independent over the rationals. When the frequencies are commensurable
the line values are periodic, and the defect is tightened to a certified sup
over one period, which is the sup over the whole line. Its tau-derivative is
bounded by L_tau = sum_n |c_n| lambda_n e^{-lambda_n kappa}.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import (
    DistanceOutOfRange,
    EmptyFamily,
    EmptyWindow,
    NumericPrecondition,
    OmissionViolated,
)
from .polynomial import (
    GDPolynomial,
    SupNormEnclosure,
    analytic_bound,
    certified_sup_norm,
    line_lipschitz,
    line_period,
    line_scan,
    vertical_translate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TranslationReport:
    """Grid epsilon-translation numbers in [0, window] with the largest gap."""
    epsilon: float
    kappa: float
    window: float
    step: float
    members: tuple[float, ...]
    max_gap: float

    def is_relatively_dense(self, fraction: float = config.JOINT_AP_GAP_FRACTION) -> bool:
        """Finite-window proxy for relative density: max_gap < fraction * window."""
        return bool(self.members) and self.max_gap < fraction * self.window


@dataclass(frozen=True)
class JointTranslationReport(TranslationReport):
    """Common translation numbers of a family, optionally with scaled sets."""
    family_size: int = 1
    scales: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class VerticalLimit:
    """Subsequence of vertical translates that are pairwise within tolerance."""
    indices: tuple[int, ...]
    diameter: float
    limit: GDPolynomial
    reachable: bool
    reason: Optional[str] = None
    t: np.ndarray = field(default=None, compare=False, repr=False)
    values: np.ndarray = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of checking log|f| against a Schottky-type bound on samples."""
    holds: bool
    samples: int
    violations: int
    min_slack: float
    max_slack: float
    center_slack: Optional[float] = None


def log_plus(x: float) -> float:
    """log+ x = max(log x, 0)."""
    return math.log(x) if x > 1 else 0.0


def _defect_weights(P: GDPolynomial, kappa: float) -> np.ndarray:
    return np.abs(P.coeffs) * np.exp(-P.lambdas * kappa)


def _defects(
    P: GDPolynomial,
    taus: np.ndarray,
    kappa: float,
    epsilon: Optional[float] = None,
    refine: bool = True,
) -> np.ndarray:
    """Certified defect for every tau in `taus` (vectorised, any shape).

    The analytic bound comes first. When the line values of P are periodic, every
    tau whose bound exceeds the threshold (epsilon, or DEFECT_SLACK without one)
    is rescanned over one period. With `epsilon` only the taus still undecided
    against epsilon are refined to DEFECT_SLACK.
    """
    taus = np.asarray(taus, dtype=float)
    if P.is_zero:
        return np.zeros(taus.shape)
    flat = taus.ravel()
    phases = 2.0 * np.abs(np.sin(0.5 * np.multiply.outer(flat, P.lambdas)))
    defects = phases @ _defect_weights(P, kappa)
    period = line_period(P)
    if period is not None:
        threshold = config.DEFECT_SLACK if epsilon is None else epsilon + config.ROUNDING_TOLERANCE
        rows = np.flatnonzero(defects > threshold)
        if rows.size:
            _tighten_periodic(P, kappa, flat, defects, rows, period, epsilon, refine)
    return defects.reshape(taus.shape)


def _tighten_periodic(P, kappa, taus, defects, rows, period, epsilon, refine):
    """Replace defects[rows] by sup |V_tau P - P| over one period where smaller.

    Cell [a, b] of width h satisfies sup |Q| <= (|Q(a)| + |Q(b)| + L h) / 2 with
    the grid wrapping around the period.
    """
    n = int(math.ceil(period / config.DEFAULT_COARSE_STEP))
    h = period / n
    lambdas = P.lambdas
    waves = np.exp(-1j * np.multiply.outer(lambdas, np.arange(n) * h))
    weights = P.coeffs * np.exp(-lambdas * kappa)
    amplitudes = (np.exp(-1j * np.multiply.outer(taus[rows], lambdas)) - 1.0) * weights
    lipschitz = np.abs(amplitudes) @ lambdas
    chunk = max(1, config.MAX_REFINEMENT_POINTS // n)
    refined = 0
    for start in range(0, rows.size, chunk):
        block = slice(start, start + chunk)
        mods = np.abs(amplitudes[block] @ waves)
        lower = mods.max(axis=1)
        cells = 0.5 * (mods + np.roll(mods, -1, axis=1)) + 0.5 * h * lipschitz[block, None]
        idx = rows[block]
        defects[idx] = np.minimum(defects[idx], np.maximum(cells.max(axis=1), lower))
        if not refine:
            continue
        if epsilon is None:
            undecided = defects[idx] - lower > config.DEFECT_SLACK
        else:
            level = epsilon + config.ROUNDING_TOLERANCE
            undecided = (lower <= level) & (defects[idx] > level)
        for k in np.flatnonzero(undecided):
            Q = GDPolynomial(tuple(zip(lambdas.tolist(), amplitudes[start + k].tolist())))
            enclosure = certified_sup_norm(
                Q, 0.0, period / 2, h, tolerance=config.DEFECT_SLACK, t_center=period / 2
            )
            defects[idx[k]] = min(defects[idx[k]], enclosure.upper)
            refined += 1
    logger.debug("Periodic defect rescan: %d taus, %d refined, period %.6g", rows.size, refined, period)


def translation_defect(P: GDPolynomial, tau: float, kappa: float) -> float:
    """Certified upper bound of sup over C_kappa of |V_tau P - P|."""
    return float(_defects(P, np.asarray(tau), kappa))


def defect_enclosure(
    P: GDPolynomial,
    tau: float,
    kappa: float,
    t_window: Optional[float] = None,
    step: Optional[float] = None,
) -> SupNormEnclosure:
    """Window enclosure of |V_tau P - P| on Re s = kappa."""
    return certified_sup_norm(vertical_translate(P, tau) - P, kappa, t_window, step)


def defect_curve(
    P: GDPolynomial, kappa: float, T_scan: float, step: float = config.DEFAULT_SCAN_STEP
) -> tuple[np.ndarray, np.ndarray]:
    """Defects on the scan grid for CSV export, without the per-tau refinement."""
    taus = _scan_grid(T_scan, step)
    return taus, _defects(P, taus, kappa, refine=False)


def _scan_grid(T_scan: float, step: float) -> np.ndarray:
    if T_scan <= 0:
        raise EmptyWindow(f"Scan window must be positive, got {T_scan}")
    if step <= 0:
        raise NumericPrecondition(f"step must be positive, got {step}")
    n = int(math.floor(T_scan / step + 1e-9))
    return np.arange(n + 1) * step


def _max_gap(members: np.ndarray, window: float) -> float:
    """Largest gap between consecutive members, the window ends included."""
    if members.size == 0:
        return float(window)
    points = np.concatenate([[0.0], members, [window]])
    return float(np.max(np.diff(points)))


def _check_epsilon(epsilon: float):
    if not epsilon > 0:
        raise NumericPrecondition(f"epsilon must be positive, got {epsilon}")


def translation_set(
    P: GDPolynomial,
    epsilon: float,
    kappa: float,
    T_scan: float,
    step: float = config.DEFAULT_SCAN_STEP,
) -> TranslationReport:
    """Scan tau in [0, T_scan] for epsilon-translation numbers of P on C_kappa.

    Every member is a genuine epsilon-translation number. Any tau* whose defect
    is at most epsilon - L_tau*step has a member within step.
    """
    _check_epsilon(epsilon)
    taus = _scan_grid(T_scan, step)
    defects = _defects(P, taus, kappa, epsilon)
    members = taus[defects <= epsilon + config.ROUNDING_TOLERANCE]
    logger.debug(
        "translation_set: %d/%d members, L_tau=%.3g",
        members.size, taus.size, line_lipschitz(P, kappa),
    )
    return TranslationReport(
        epsilon=epsilon,
        kappa=kappa,
        window=T_scan,
        step=step,
        members=tuple(members.tolist()),
        max_gap=_max_gap(members, T_scan),
    )


def joint_translation_set(
    family: Sequence[GDPolynomial],
    epsilon: float,
    kappa: float,
    T_scan: float,
    step: float = config.DEFAULT_SCAN_STEP,
    scales: Optional[Sequence[float]] = None,
) -> JointTranslationReport:
    """Common translation numbers: tau with defect(f_j, tau/scale_j) <= epsilon for all j."""
    if not family:
        raise EmptyFamily("Family must contain at least one polynomial")
    _check_epsilon(epsilon)
    if scales is not None:
        scales = tuple(float(a) for a in scales)
        if len(scales) != len(family):
            raise NumericPrecondition("scales must match the family size")
        if any(not a > 0 for a in scales):
            raise NumericPrecondition("scales must be positive")
    taus = _scan_grid(T_scan, step)
    factors = scales or (1.0,) * len(family)

    def member_ok(args) -> np.ndarray:
        poly, scale = args
        return _defects(poly, taus / scale, kappa, epsilon) <= epsilon + config.ROUNDING_TOLERANCE

    with ThreadPoolExecutor(max_workers=config.THREADS) as pool:
        masks = list(pool.map(member_ok, zip(family, factors)))
    common = np.logical_and.reduce(masks)
    members = taus[common]
    return JointTranslationReport(
        epsilon=epsilon,
        kappa=kappa,
        window=T_scan,
        step=step,
        members=tuple(members.tolist()),
        max_gap=_max_gap(members, T_scan),
        family_size=len(family),
        scales=scales,
    )


def limit_at_infinity(P: GDPolynomial) -> complex:
    """P(+infinity): the coefficient at frequency 0."""
    return P.coefficient(0.0)


def infinity_decay_bound(P: GDPolynomial, kappa_prime: float) -> float:
    """sup over C_kappa' of |P - P(+infinity)|, bounded by the positive-frequency terms."""
    return analytic_bound(P - limit_at_infinity(P), kappa_prime)


def extract_vertical_limit(
    P: GDPolynomial,
    taus: Sequence[float],
    kappa: float,
    grid_step: float,
    tolerance: float,
    t_window: Optional[float] = None,
) -> VerticalLimit:
    """Greedy selection of translates V_tau P that are pairwise within tolerance.

    Distances are certified sup distances on C_kappa. The longest chain over all
    starting indices wins; a chain of length one is reported as unreachable.
    """
    if len(taus) == 0:
        raise NumericPrecondition("taus must be nonempty")
    taus = np.asarray(taus, dtype=float)
    distances = _defects(P, np.subtract.outer(taus, taus), kappa, tolerance)
    n = taus.size
    best: list[int] = [0]
    for start in range(n):
        chain = [start]
        for j in range(start + 1, n):
            if np.all(distances[j, chain] <= tolerance):
                chain.append(j)
        if len(chain) > len(best):
            best = chain
    diameter = float(distances[np.ix_(best, best)].max())
    limit = vertical_translate(P, taus[best[-1]])
    t, values = line_scan(limit, kappa, t_window or config.DEFAULT_WINDOW, grid_step)
    reachable = len(best) >= 2
    return VerticalLimit(
        indices=tuple(best),
        diameter=diameter,
        limit=limit,
        reachable=reachable,
        reason=None if reachable else "ToleranceUnreachable",
        t=t,
        values=values,
    )


def schottky_bound(abs_fc: float, r: float, dist: float) -> float:
    """((r + dist) / (r - dist)) * (7 + log+ |f(c)|)."""
    if abs_fc < 0:
        raise NumericPrecondition("|f(c)| must be nonnegative")
    if r <= 0:
        raise NumericPrecondition(f"radius must be positive, got {r}")
    if dist < 0 or dist >= r:
        raise DistanceOutOfRange(f"distance {dist} outside [0, {r})")
    return (r + dist) / (r - dist) * (7.0 + log_plus(abs_fc))


def ball_grid(center: complex, r: float, n_radial: int = 100, n_angular: int = 100) -> np.ndarray:
    """Polar samples of the open ball B_r(center), center included."""
    radii = r * np.arange(n_radial) / n_radial
    angles = 2 * np.pi * np.arange(n_angular) / n_angular
    return (center + np.multiply.outer(radii, np.exp(1j * angles))).ravel()


def _check_omission(values: np.ndarray):
    near_zero = np.abs(values) <= config.OMISSION_TOLERANCE
    near_one = np.abs(values - 1) <= config.OMISSION_TOLERANCE
    if near_zero.any() or near_one.any():
        raise OmissionViolated(
            f"{int(near_zero.sum() + near_one.sum())} samples hit 0 or 1"
        )


def verify_schottky(
    points: np.ndarray,
    values: np.ndarray,
    center: complex,
    center_value: complex,
    r: float,
) -> BoundCheck:
    """Check log|f(s)| <= schottky_bound(|f(c)|, r, |s - c|) at every sample."""
    points = np.asarray(points, dtype=complex)
    values = np.asarray(values, dtype=complex)
    _check_omission(np.append(values, center_value))
    dist = np.abs(points - center)
    if dist.size and dist.max() >= r:
        raise DistanceOutOfRange("Sample outside the ball")
    if r <= 0:
        raise NumericPrecondition(f"radius must be positive, got {r}")
    base = 7.0 + log_plus(abs(center_value))
    bound = (r + dist) / (r - dist) * base
    slack = bound - np.log(np.abs(values))
    violations = int(np.sum(slack < -config.ROUNDING_TOLERANCE))
    return BoundCheck(
        holds=violations == 0,
        samples=int(slack.size),
        violations=violations,
        min_slack=float(slack.min()),
        max_slack=float(slack.max()),
        center_slack=base - math.log(abs(center_value)),
    )


def strong_bohr_bound(sup_abs: float, theta: float, kappa: float, nu: float) -> float:
    """Bound on log|f| over C_nu for f omitting two values on C_kappa, |f| <= sup_abs on C_theta."""
    if not kappa < nu <= theta:
        raise DistanceOutOfRange(f"need kappa < nu <= theta, got {kappa}, {nu}, {theta}")
    if sup_abs < 0:
        raise NumericPrecondition("sup |f| must be nonnegative")
    return 2 * (theta - kappa) / (nu - kappa) * (7.0 + log_plus(sup_abs))


def verify_strong_bohr(
    points: np.ndarray,
    values: np.ndarray,
    sup_abs: float,
    theta: float,
    kappa: float,
    nu: float,
) -> BoundCheck:
    """Check samples with Re s >= nu against strong_bohr_bound."""
    points = np.asarray(points, dtype=complex)
    values = np.asarray(values, dtype=complex)
    bound = strong_bohr_bound(sup_abs, theta, kappa, nu)
    inside = points.real >= nu
    _check_omission(values[inside])
    slack = bound - np.log(np.abs(values[inside]))
    violations = int(np.sum(slack < -config.ROUNDING_TOLERANCE))
    return BoundCheck(
        holds=violations == 0,
        samples=int(slack.size),
        violations=violations,
        min_slack=float(slack.min()) if slack.size else math.inf,
        max_slack=float(slack.max()) if slack.size else math.inf,
    )

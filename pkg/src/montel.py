"""Uniform subsequence extraction, joint almost periodicity and separation suites."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .almost_periodic import joint_translation_set
from .bohr import tail_bound
from .errors import DegenerateFrequencies, EmptyFamily, NumericPrecondition
from .polynomial import GDPolynomial, analytic_bound, certified_sup_norm
from .riesz import riesz_error_bound

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Extraction:
    indices: tuple[int, ...]
    limit: GDPolynomial
    diameter: float

    @property
    def length(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class DichotomyReport:
    jointly_ap: bool
    max_gap: float
    translation_count: int
    extraction: Extraction
    clustering_succeeds: bool
    max_pair_lower: float

    @property
    def consistent(self) -> bool:
        return self.jointly_ap == self.clustering_succeeds


@dataclass(frozen=True)
class CounterexampleGap:
    t_star: float
    measured: float
    measured_squared: float
    closed_form_squared: float
    bound: float


@dataclass(frozen=True)
class TruncationPlan:
    exponentials: int
    tolerance: float
    tail: float
    omega: float = field(default=math.nan)


def distance_matrix(family: Sequence[GDPolynomial], kappa: float) -> np.ndarray:
    """Certified upper bounds sum |c_i - c_j| e^{-lambda kappa} of sup over C_kappa of |f_i - f_j|."""
    n = len(family)

    def row(i: int) -> list[float]:
        return [analytic_bound(family[i] - family[j], kappa) for j in range(n)]

    with ThreadPoolExecutor(max_workers=config.THREADS) as pool:
        return np.array(list(pool.map(row, range(n))), dtype=float).reshape(n, n)


def _grow_ball(distances: np.ndarray, center: int, epsilon: float) -> list[int]:
    """Add members nearest-first while every pairwise distance stays within epsilon."""
    order = sorted(range(len(distances)), key=lambda j: (distances[center, j], j))
    chain = [center]
    for j in order:
        if j != center and np.all(distances[j, chain] <= epsilon):
            chain.append(j)
    return chain


def extract_uniform_subsequence(
    family: Sequence[GDPolynomial],
    kappa: float,
    epsilon: float,
) -> Extraction:
    """Longest set of members pairwise within epsilon on C_kappa.

    A ball is grown from every member; the longest wins, ties going to the
    smaller diameter. A result of length one means no two members cluster.
    """
    if not family:
        raise EmptyFamily("Family must contain at least one polynomial")
    if not epsilon > 0:
        raise NumericPrecondition(f"epsilon must be positive, got {epsilon}")
    distances = distance_matrix(family, kappa)

    best, best_diameter = None, math.inf
    for center in range(len(family)):
        chain = sorted(_grow_ball(distances, center, epsilon))
        diameter = float(distances[np.ix_(chain, chain)].max())
        if best is None or len(chain) > len(best) or (
            len(chain) == len(best) and diameter < best_diameter
        ):
            best, best_diameter = chain, diameter
    logger.debug("Extracted chain of length %d (diameter %.3g)", len(best), best_diameter)
    return Extraction(tuple(best), family[best[-1]], best_diameter)


def joint_ap_dichotomy(
    family: Sequence[GDPolynomial],
    epsilon: float,
    kappa: float,
    T_scan: float,
    step: float = config.DEFAULT_SCAN_STEP,
) -> DichotomyReport:
    """Run the joint translation scan and the extraction side by side."""
    joint = joint_translation_set(family, epsilon, kappa, T_scan, step)
    extraction = extract_uniform_subsequence(family, kappa, epsilon)
    clustering = extraction.length >= len(family) * config.CLUSTER_FRACTION

    max_pair_lower = 0.0
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            enclosure = certified_sup_norm(
                family[i] - family[j], kappa, step=config.DEFAULT_COARSE_STEP
            )
            max_pair_lower = max(max_pair_lower, enclosure.lower)

    return DichotomyReport(
        jointly_ap=joint.is_relatively_dense(),
        max_gap=joint.max_gap,
        translation_count=len(joint.members),
        extraction=extraction,
        clustering_succeeds=clustering,
        max_pair_lower=max_pair_lower,
    )


def counterexample_gap(lambda_n: float, lambda_: float, kappa: float) -> CounterexampleGap:
    """Distance of e^{-lambda_n s} and e^{-lambda s} at kappa + i t*, t* = pi / (lambda_n - lambda).

    At t* the two exponentials have opposite phases, so the squared distance is
    e^{-2 lambda_n kappa} + e^{-2 lambda kappa} + 2 e^{-(lambda_n + lambda) kappa}.
    """
    if lambda_n < 0 or lambda_ < 0:
        raise NumericPrecondition("frequencies must be >= 0")
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    if lambda_n == lambda_:
        raise DegenerateFrequencies(f"Frequencies coincide at {lambda_}")
    t_star = math.pi / (lambda_n - lambda_)
    s = complex(kappa, t_star)
    measured = abs(np.exp(-lambda_n * s) - np.exp(-lambda_ * s))
    closed_form = (
        math.exp(-2 * lambda_n * kappa)
        + math.exp(-2 * lambda_ * kappa)
        + 2 * math.exp(-(lambda_n + lambda_) * kappa)
    )
    return CounterexampleGap(
        t_star=t_star,
        measured=float(measured),
        measured_squared=float(measured) ** 2,
        closed_form_squared=closed_form,
        bound=2 * math.exp(-max(lambda_n, lambda_) * kappa),
    )


def exponential_separation(lambdas: Sequence[float], kappa: float) -> np.ndarray:
    """Pairwise lower bounds for sup over C_kappa of |e^{-lambda_i s} - e^{-lambda_j s}|."""
    lambdas = [float(lam) for lam in lambdas]
    if len(set(lambdas)) != len(lambdas):
        raise DegenerateFrequencies("Frequencies must be distinct")
    n = len(lambdas)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = counterexample_gap(lambdas[i], lambdas[j], kappa).measured
    return matrix


def series_truncation_plan(
    lambdas: Sequence[float], kappa: float, epsilon: float, bound: float
) -> TruncationPlan:
    """Fewest exponentials N whose joint translation numbers serve a whole bounded family.

    Picks the smallest N with tail_bound <= epsilon / (4M); a common translation
    number of e^{-lambda_1 s}..e^{-lambda_N s} at tolerance epsilon / (2MN) is then
    an epsilon-translation number of every member.
    """
    if not epsilon > 0 or not bound > 0:
        raise NumericPrecondition("epsilon and bound must be positive")
    target = epsilon / (4 * bound)
    for N in range(1, len(lambdas) + 1):
        tail = tail_bound(lambdas, kappa, N)
        if tail <= target:
            return TruncationPlan(N, epsilon / (2 * bound * N), tail)
    raise NumericPrecondition(f"No cut within {len(lambdas)} frequencies reaches tail {target:.3g}")


def riesz_truncation_plan(
    family: Sequence[GDPolynomial],
    kappa: float,
    epsilon: float,
    omegas: Sequence[float],
) -> TruncationPlan:
    """Smallest omega whose Riesz means are epsilon/3-close to every member on C_kappa."""
    if not family:
        raise EmptyFamily("Family must contain at least one polynomial")
    if not epsilon > 0:
        raise NumericPrecondition(f"epsilon must be positive, got {epsilon}")
    bound = max(member.coefficient_sum for member in family)
    for omega in sorted(float(w) for w in omegas):
        worst = max(riesz_error_bound(member, kappa, omega) for member in family)
        if worst <= epsilon / 3:
            frequencies = {lam for member in family for lam in member.lambdas.tolist() if lam < omega}
            count = len(frequencies)
            tolerance = epsilon / (3 * bound * count) if count and bound else math.inf
            return TruncationPlan(count, tolerance, worst, omega)
    raise NumericPrecondition("No swept omega brings the Riesz error below epsilon/3")

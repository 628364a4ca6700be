"""Bohr coefficients, spectra, coefficient bounds and frequency abscissae."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import DivergentTail, FrequencyTooShort, NumericPrecondition
from .polynomial import GDPolynomial, certified_sup_norm
from .quadrature import composite_gauss_legendre, uniform_breakpoints

logger = logging.getLogger(__name__)

FREQUENCY_RULES = ("log", "linear", "loglog", "sqrt")


@dataclass(frozen=True)
class BohrCoefficient:
    lambda_: float
    estimate: complex
    error_bound: float
    exact: complex

    @property
    def deviation(self) -> float:
        return abs(self.estimate - self.exact)


@dataclass(frozen=True)
class SpectrumReport:
    """Per-candidate mean values and the candidates above their threshold."""
    candidates: tuple[BohrCoefficient, ...]
    detected: tuple[BohrCoefficient, ...]
    thresholds: tuple[float, ...]

    @property
    def detected_lambdas(self) -> tuple[float, ...]:
        return tuple(c.lambda_ for c in self.detected)


@dataclass(frozen=True)
class CoefficientBoundCheck:
    holds: bool
    margin: float
    max_coefficient: float
    norm_upper: float


def _check_mean_controls(sigma: float, T: float):
    if not sigma > 0:
        raise NumericPrecondition(f"sigma must be positive, got {sigma}")
    if not T > 0:
        raise NumericPrecondition(f"T must be positive, got {T}")


def bohr_coefficient(
    P: GDPolynomial,
    lambda_: float,
    sigma: float = config.DEFAULT_BOHR_SIGMA,
    T: float = config.DEFAULT_BOHR_T,
) -> BohrCoefficient:
    """Mean value (1/2T) * integral over [-T, T] of P(sigma+it) e^{lambda (sigma+it)}.

    Each term of P contributes a pure phase e^{i(lambda - lambda_n) t} to the
    integrand, so panels no wider than 1 / max|lambda - lambda_n| keep the
    Gauss-Legendre error far below QUADRATURE_TOLERANCE.
    """
    _check_mean_controls(sigma, T)
    if lambda_ < 0:
        raise NumericPrecondition(f"lambda must be >= 0, got {lambda_}")
    exact = P.coefficient(lambda_)
    if P.is_zero:
        return BohrCoefficient(lambda_, 0j, 0.0, 0j)

    offsets = lambda_ - P.lambdas
    weights = P.coeffs * np.exp(offsets * sigma)

    def integrand(t: np.ndarray) -> np.ndarray:
        return np.exp(1j * np.multiply.outer(t, offsets)) @ weights

    omega_max = float(np.abs(offsets).max())
    if omega_max == 0:
        breakpoints = np.array([-T, T])
    else:
        breakpoints = uniform_breakpoints(-T, T, 1.0 / omega_max)
    estimate = composite_gauss_legendre(integrand, breakpoints, chunk=4096) / (2 * T)

    off = offsets != 0
    error_bound = float(
        np.sum(np.abs(weights[off]) / (np.abs(offsets[off]) * T))
    )
    return BohrCoefficient(lambda_, estimate, error_bound, exact)


def bohr_spectrum(
    P: GDPolynomial,
    candidate_lambdas: Sequence[float],
    sigma: float = config.DEFAULT_BOHR_SIGMA,
    T: float = config.DEFAULT_BOHR_T,
    threshold: Optional[float] = None,
) -> SpectrumReport:
    """Estimate the coefficient at every candidate and keep those above threshold.

    Without an explicit threshold each candidate uses
    SPECTRUM_THRESHOLD_FACTOR * (its error bound + QUADRATURE_TOLERANCE).
    """
    candidates = [float(lam) for lam in candidate_lambdas]
    if any(lam < 0 for lam in candidates):
        raise NumericPrecondition("candidate frequencies must be >= 0")
    if any(b < a for a, b in zip(candidates, candidates[1:])):
        raise NumericPrecondition("candidate frequencies must be sorted")
    _check_mean_controls(sigma, T)

    with ThreadPoolExecutor(max_workers=config.THREADS) as pool:
        coefficients = list(pool.map(lambda lam: bohr_coefficient(P, lam, sigma, T), candidates))

    if threshold is None:
        thresholds = [
            config.SPECTRUM_THRESHOLD_FACTOR * (c.error_bound + config.QUADRATURE_TOLERANCE)
            for c in coefficients
        ]
    else:
        thresholds = [float(threshold)] * len(coefficients)
    detected = tuple(
        c for c, level in zip(coefficients, thresholds) if abs(c.estimate) > level
    )
    logger.info("Spectrum: %d of %d candidates detected", len(detected), len(coefficients))
    return SpectrumReport(tuple(coefficients), detected, tuple(thresholds))


def coefficient_bound_check(
    P: GDPolynomial,
    kappa: float = 0.0,
    t_window: Optional[float] = None,
    step: Optional[float] = None,
) -> CoefficientBoundCheck:
    """Compare max |c_n| e^{-lambda_n kappa} with the certified sup norm on C_kappa.

    The coefficients of s -> P(s + kappa) are the ones bounded by the norm on
    C_kappa, so at kappa = 0 this is the plain bound |a_n| <= ||P||.
    """
    enclosure = certified_sup_norm(P, kappa, t_window, step)
    dilated = P.shift_right(kappa)
    max_coefficient = float(np.abs(dilated.coeffs).max()) if not P.is_zero else 0.0
    holds = max_coefficient <= enclosure.upper * (1 + 1e-6)
    return CoefficientBoundCheck(
        holds=bool(holds),
        margin=enclosure.upper - max_coefficient,
        max_coefficient=max_coefficient,
        norm_upper=enclosure.upper,
    )


def frequency_prefix(rule: str, N: int) -> np.ndarray:
    """First N frequencies of a named growth rule, n = 1..N."""
    if N < 1:
        raise NumericPrecondition(f"N must be positive, got {N}")
    n = np.arange(1, N + 1, dtype=float)
    if rule == "log":
        return np.log(n)
    if rule == "linear":
        return n
    if rule == "loglog":
        return np.log(np.log(n + 2))
    if rule == "sqrt":
        return np.sqrt(n)
    raise NumericPrecondition(f"Unknown frequency rule {rule!r}; expected one of {FREQUENCY_RULES}")


def _check_frequencies(lambdas: np.ndarray):
    if lambdas.ndim != 1:
        raise NumericPrecondition("frequencies must be one-dimensional")
    if lambdas.size and lambdas[0] < 0:
        raise NumericPrecondition("frequencies must be >= 0")
    if np.any(np.diff(lambdas) <= 0):
        raise NumericPrecondition("frequencies must be strictly increasing")


def abscissa_L(lambdas: Sequence[float]) -> float:
    """Estimate L(lambda) = limsup (log n) / lambda_n from a frequency prefix.

    The limsup is taken as the max over the trailing half of the prefix. A value
    above ABSCISSA_CAP that is still growing across that half is reported as +inf.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    _check_frequencies(lambdas)
    N = lambdas.size
    if N < config.MIN_FREQUENCY_PREFIX:
        raise FrequencyTooShort(
            f"Need at least {config.MIN_FREQUENCY_PREFIX} frequencies, got {N}"
        )
    start = N // 2 - 1
    n = np.arange(start + 1, N + 1, dtype=float)
    values = np.log(n) / lambdas[start:]
    estimate = float(values.max())
    if estimate > config.ABSCISSA_CAP and values[-1] > values[0] * (1 + 1e-6):
        return math.inf
    return estimate


def tail_bound(lambdas: Sequence[float], kappa: float, N_cut: int) -> float:
    """Upper bound for sum_{n > N_cut} e^{-lambda_n kappa}.

    The observed part of the prefix is summed directly; the unseen tail is
    majorised by a geometric series continuing with the last observed gap,
    which is an upper bound whenever the gaps never shrink.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    abscissa = abscissa_L(lambdas)
    if not kappa > abscissa:
        raise DivergentTail(f"kappa={kappa} is not beyond the abscissa estimate {abscissa}")
    N = lambdas.size
    if not 0 <= N_cut <= N:
        raise NumericPrecondition(f"N_cut must lie in [0, {N}], got {N_cut}")
    observed = float(np.exp(-lambdas[N_cut:] * kappa).sum())
    gap = float(lambdas[-1] - lambdas[-2])
    ratio = math.exp(-gap * kappa)
    majorant = math.exp(-lambdas[-1] * kappa) * ratio / (1 - ratio)
    return observed + majorant

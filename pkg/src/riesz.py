"""Riesz means, the half-plane Poisson kernel and the smoothing identity."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import config
from .errors import NumericPrecondition, QuadratureBudgetExceeded
from .polynomial import (
    GDPolynomial,
    SupNormEnclosure,
    analytic_bound,
    certified_sup_norm,
    evaluate,
)
from .quadrature import composite_gauss_legendre

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RieszSweep:
    """Certified errors of R_omega P - P on C_kappa next to their analytic bounds."""
    kappa: float
    omegas: tuple[float, ...]
    errors: tuple[SupNormEnclosure, ...]
    bounds: tuple[float, ...]

    def rows(self) -> list[tuple[float, float, float, float]]:
        """CSV rows (omega, err_lower, err_upper, bound)."""
        return [
            (omega, err.lower, err.upper, bound)
            for omega, err, bound in zip(self.omegas, self.errors, self.bounds)
        ]


@dataclass(frozen=True)
class PoissonCheck:
    """Poisson-integral value of P on Re s = sigma against P(kappa + sigma + it)."""
    convolution: complex
    direct: complex
    discrepancy: float
    remainder: float
    budget: float
    within_budget: bool

    def raise_for_budget(self):
        """Raise QuadratureBudgetExceeded when the discrepancy is over budget."""
        if not self.within_budget:
            raise QuadratureBudgetExceeded(
                f"Poisson discrepancy {self.discrepancy:.3e} exceeds budget {self.budget:.1e}",
                self.discrepancy,
            )


def _check_omega(omega: float):
    if not omega > 0:
        raise NumericPrecondition(f"omega must be positive, got {omega}")


def riesz_mean(P: GDPolynomial, omega: float) -> GDPolynomial:
    """R_omega P = sum over lambda_n < omega of c_n (1 - lambda_n/omega) e^{-lambda_n s}."""
    _check_omega(omega)
    return GDPolynomial(
        tuple((lam, c * (1 - lam / omega)) for lam, c in P.terms if lam < omega)
    )


def riesz_error_bound(P: GDPolynomial, kappa: float, omega: float) -> float:
    """sum_{lambda<omega} |c|(lambda/omega)e^{-lambda kappa} + sum_{lambda>=omega} |c|e^{-lambda kappa}."""
    return analytic_bound(riesz_mean(P, omega) - P, kappa)


def riesz_error_sweep(
    P: GDPolynomial,
    kappa: float,
    omegas: Sequence[float],
    t_window: Optional[float] = None,
    step: Optional[float] = None,
) -> RieszSweep:
    """Certified error ||R_omega P - P|| on C_kappa and its analytic bound per omega."""
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    omegas = tuple(float(w) for w in omegas)
    if not omegas:
        raise NumericPrecondition("omegas must be nonempty")
    for w in omegas:
        _check_omega(w)
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        raise NumericPrecondition("omegas must be strictly increasing")

    def entry(omega: float) -> tuple[SupNormEnclosure, float]:
        difference = riesz_mean(P, omega) - P
        return (
            certified_sup_norm(difference, kappa, t_window, step),
            analytic_bound(difference, kappa),
        )

    with ThreadPoolExecutor(max_workers=config.THREADS) as pool:
        results = list(pool.map(entry, omegas))
    return RieszSweep(
        kappa=kappa,
        omegas=omegas,
        errors=tuple(err for err, _ in results),
        bounds=tuple(bound for _, bound in results),
    )


def poisson_kernel(kappa: float, t):
    """kappa / (pi (kappa^2 + t^2)), the Poisson kernel of C_kappa at the line Re s = 0."""
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    t = np.asarray(t, dtype=float)
    values = kappa / (math.pi * (kappa * kappa + t * t))
    return float(values) if values.ndim == 0 else values


def poisson_mass(kappa: float, half_width: float) -> float:
    """Mass of the Poisson kernel on [-half_width, half_width]."""
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    return 2 / math.pi * math.atan(half_width / kappa)


def _poisson_breakpoints(kappa: float, half_width: float, max_width: float) -> np.ndarray:
    """Geometric refinement around the kernel peak merged with a uniform grid."""
    count = int(math.ceil(math.log(half_width / (kappa / 8)) / math.log(math.sqrt(2)))) + 1
    geometric = (kappa / 8) * np.sqrt(2) ** np.arange(count)
    geometric = geometric[geometric < half_width]
    panels = max(1, int(math.ceil(2 * half_width / max_width)))
    uniform = np.linspace(-half_width, half_width, panels + 1)
    return np.unique(np.concatenate([uniform, geometric, -geometric, [0.0]]))


def poisson_total_mass(kappa: float, half_width: float = config.POISSON_HALF_WIDTH) -> float:
    """Quadrature of the kernel over [-half_width, half_width] plus the exact arctan tail."""
    breakpoints = _poisson_breakpoints(kappa, half_width, half_width)
    inner = composite_gauss_legendre(lambda u: poisson_kernel(kappa, u), breakpoints)
    return inner.real + (1 - poisson_mass(kappa, half_width))


def poisson_smooth_check(
    P: GDPolynomial,
    kappa: float,
    sigma: float,
    t: float,
    half_width: float = config.POISSON_HALF_WIDTH,
    budget: float = config.POISSON_BUDGET,
) -> PoissonCheck:
    """Compare the Poisson integral of u -> P(sigma + i(t - u)) with P(kappa + sigma + it).

    The constant term is integrated exactly; oscillating terms are integrated on
    [-half_width, half_width] and their tails bounded by
    sum |c_n| e^{-lambda_n sigma} * 4 p(half_width) / lambda_n.
    """
    if not kappa > 0:
        raise NumericPrecondition(f"kappa must be positive, got {kappa}")
    if not sigma > 0:
        raise NumericPrecondition(f"sigma must be positive, got {sigma}")
    constant = P.coefficient(0.0)
    oscillating = P - constant
    direct = evaluate(P, complex(kappa + sigma, t))

    if oscillating.is_zero:
        convolution = constant
        remainder = 0.0
    else:
        lambdas = oscillating.lambdas

        def integrand(u: np.ndarray) -> np.ndarray:
            return evaluate(oscillating, sigma + 1j * (t - u)) * poisson_kernel(kappa, u)

        breakpoints = _poisson_breakpoints(kappa, half_width, 1.0 / float(lambdas.max()))
        convolution = constant + composite_gauss_legendre(integrand, breakpoints, chunk=4096)
        edge = poisson_kernel(kappa, half_width)
        remainder = float(
            np.sum(np.abs(oscillating.coeffs) * np.exp(-lambdas * sigma) * 4 * edge / lambdas)
        )

    discrepancy = abs(convolution - direct)
    logger.debug("Poisson check: discrepancy=%.3e remainder=%.3e", discrepancy, remainder)
    return PoissonCheck(
        convolution=complex(convolution),
        direct=direct,
        discrepancy=discrepancy,
        remainder=remainder,
        budget=budget,
        within_budget=discrepancy <= budget,
    )

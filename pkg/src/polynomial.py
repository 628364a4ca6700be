"""General Dirichlet polynomials on right half-planes.

A general Dirichlet polynomial is a finite sum

    P(s) = sum_n c_n exp(-lambda_n s),    0 <= lambda_1 < ... < lambda_N,

and serves as the model for every bounded analytic almost periodic function
handled by this package. Sup norms over a half-plane Re s > kappa are reduced to
the boundary line Re s = kappa by the maximum modulus principle.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Optional

import numpy as np

from . import config
from .errors import NegativeFrequency, NumericPrecondition

logger = logging.getLogger(__name__)


def _canonical_terms(terms: Iterable) -> tuple[tuple[float, complex], ...]:
    """Sort by frequency, merge duplicates by summing, drop zero coefficients."""
    merged: dict[float, complex] = {}
    for lam, coeff in terms:
        lam = float(lam)
        coeff = complex(coeff)
        if not math.isfinite(lam) or not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
            raise NumericPrecondition(f"Non-finite term ({lam}, {coeff})")
        if lam < 0:
            raise NegativeFrequency(f"Frequency {lam} is negative")
        lam = lam + 0.0  # normalise -0.0
        merged[lam] = merged.get(lam, 0j) + coeff
    return tuple(
        (lam, merged[lam]) for lam in sorted(merged) if merged[lam] != 0
    )


@dataclass(frozen=True)
class GDPolynomial:
    """Finite general Dirichlet polynomial in canonical form."""
    terms: tuple[tuple[float, complex], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _canonical_terms(self.terms))

    @classmethod
    def constant(cls, value: complex) -> "GDPolynomial":
        """The constant polynomial `value`."""
        return cls(((0.0, value),))

    @classmethod
    def monomial(cls, lam: float, coeff: complex = 1.0) -> "GDPolynomial":
        """The single term coeff * exp(-lam s)."""
        return cls(((lam, coeff),))

    @property
    def lambdas(self) -> np.ndarray:
        """Frequencies in increasing order."""
        return np.array([lam for lam, _ in self.terms], dtype=float)

    @property
    def coeffs(self) -> np.ndarray:
        """Coefficients aligned with `lambdas`."""
        return np.array([c for _, c in self.terms], dtype=complex)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        """True when no positive frequency is present."""
        return all(lam == 0 for lam, _ in self.terms)

    @property
    def coefficient_sum(self) -> float:
        """Sum of |c_n|, the sup norm bound on the closed right half-plane."""
        return float(np.abs(self.coeffs).sum()) if self.terms else 0.0

    def coefficient(self, lam: float) -> complex:
        """Coefficient at frequency `lam`, zero if `lam` is not a frequency."""
        for freq, coeff in self.terms:
            if freq == lam:
                return coeff
        return 0j

    def scale(self, factor: complex) -> "GDPolynomial":
        """Every coefficient multiplied by `factor`."""
        return GDPolynomial(tuple((lam, c * factor) for lam, c in self.terms))

    def shift_right(self, kappa: float) -> "GDPolynomial":
        """The polynomial s -> P(s + kappa)."""
        return GDPolynomial(
            tuple((lam, c * math.exp(-lam * kappa)) for lam, c in self.terms)
        )

    def __add__(self, other: "GDPolynomial") -> "GDPolynomial":
        """Termwise sum; numbers are read as constants."""
        if isinstance(other, Number):
            other = GDPolynomial.constant(other)
        if not isinstance(other, GDPolynomial):
            return NotImplemented
        return GDPolynomial(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "GDPolynomial":
        return self.scale(-1)

    def __sub__(self, other: "GDPolynomial") -> "GDPolynomial":
        if isinstance(other, Number):
            other = GDPolynomial.constant(other)
        if not isinstance(other, GDPolynomial):
            return NotImplemented
        return self + (-other)

    def __call__(self, s):
        return evaluate(self, s)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class HalfPlaneGrid:
    """Sampled rectangle [kappa, sigma_max] x [t_min, t_max] inside C_kappa."""
    kappa: float
    sigma_max: float
    t_min: float
    t_max: float
    n_sigma: int
    n_t: int

    def __post_init__(self):
        if self.kappa < 0:
            raise NumericPrecondition(f"kappa must be >= 0, got {self.kappa}")
        if self.sigma_max <= self.kappa:
            raise NumericPrecondition("sigma_max must exceed kappa")
        if self.t_min >= self.t_max:
            raise NumericPrecondition("t_min must be below t_max")
        if self.n_sigma < 2 or self.n_t < 2:
            raise NumericPrecondition("Grid needs at least two samples per axis")

    @property
    def sigmas(self) -> np.ndarray:
        return np.linspace(self.kappa, self.sigma_max, self.n_sigma)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_t)

    @property
    def spacing(self) -> tuple[float, float]:
        """(d sigma, d t) between neighbouring samples."""
        return (
            (self.sigma_max - self.kappa) / (self.n_sigma - 1),
            (self.t_max - self.t_min) / (self.n_t - 1),
        )

    def points(self) -> np.ndarray:
        """Complex sample points, shape (n_sigma, n_t); corners included."""
        return self.sigmas[:, None] + 1j * self.ts[None, :]


@dataclass(frozen=True)
class SupNormEnclosure:
    """Enclosure of sup |P| over the window |t - center| <= window on Re s = sigma.

    The true window supremum lies in [lower, upper]; the supremum over the
    whole half-plane lies below `bound`.
    """
    lower: float
    upper: float
    sigma: float
    window: float
    step: float
    bound: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


def evaluate(P: GDPolynomial, s):
    """Evaluate P at a point or an array of points with Re s >= 0."""
    s_arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(s_arr)):
        raise NumericPrecondition("Evaluation point must be finite")
    if np.any(s_arr.real < 0):
        raise NumericPrecondition("Evaluation point must satisfy Re s >= 0")
    if P.is_zero:
        values = np.zeros(s_arr.shape, dtype=complex)
    else:
        values = np.exp(-np.multiply.outer(s_arr, P.lambdas)) @ P.coeffs
    if s_arr.ndim == 0:
        return complex(values)
    return values


def vertical_translate(P: GDPolynomial, tau: float) -> GDPolynomial:
    """V_tau P(s) = P(s + i tau)."""
    lambdas = P.lambdas
    coeffs = P.coeffs * np.exp(-1j * lambdas * tau)
    return GDPolynomial(tuple(zip(lambdas.tolist(), coeffs.tolist())))


def analytic_bound(P: GDPolynomial, kappa: float) -> float:
    """sum |c_n| exp(-lambda_n kappa), a bound for sup |P| on C_kappa."""
    if P.is_zero:
        return 0.0
    return float(np.sum(np.abs(P.coeffs) * np.exp(-P.lambdas * kappa)))


def line_lipschitz(P: GDPolynomial, kappa: float) -> float:
    """sum |c_n| lambda_n exp(-lambda_n kappa), bounds |d/dt P(kappa + it)|."""
    if P.is_zero:
        return 0.0
    lambdas = P.lambdas
    return float(np.sum(np.abs(P.coeffs) * lambdas * np.exp(-lambdas * kappa)))


def line_period(P: GDPolynomial, max_points: int = config.MAX_PERIOD_POINTS) -> Optional[float]:
    """Exact period of t -> P(kappa + it), or None.

    Frequencies are read as exact binary fractions, so the period is exact: every
    positive frequency is an integer multiple of 2 pi / period. None when there is
    no positive frequency or one period needs more than `max_points` coarse grid
    points.
    """
    positive = [Fraction(lam) for lam in P.lambdas.tolist() if lam > 0]
    if not positive:
        return None
    denominator = math.lcm(*(f.denominator for f in positive))
    base = Fraction(math.gcd(*(int(f * denominator) for f in positive)), denominator)
    period = 2 * math.pi / float(base)
    if not math.isfinite(period) or period / config.DEFAULT_COARSE_STEP > max_points:
        return None
    return period


def line_scan(
    P: GDPolynomial,
    kappa: float,
    t_window: float,
    step: float,
    t_center: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample P on kappa + i t for t = t_center + k*step, |k*step| <= t_window.

    The grid always contains t_center itself.
    """
    if step <= 0:
        raise NumericPrecondition(f"step must be positive, got {step}")
    if t_window <= 0:
        raise NumericPrecondition(f"window must be positive, got {t_window}")
    n = int(math.ceil(t_window / step - 1e-9))
    t = t_center + np.arange(-n, n + 1) * step
    return t, evaluate(P, kappa + 1j * t)


def _refine_cells(P, kappa, t, mods, step, lipschitz, tolerance, bound):
    """Bisect grid cells whose Lipschitz bound may still exceed the running max.

    Cell [a, b] of width h satisfies sup |P| <= (|P(a)| + |P(b)| + L h) / 2.
    Returns (lower, upper, finest width).
    """
    lower = float(mods.max())
    left, va, vb = t[:-1], mods[:-1], mods[1:]
    width = step
    upper = lower
    for _ in range(64):
        cell_bound = 0.5 * (va + vb + lipschitz * width)
        is_open = cell_bound > lower + tolerance
        if not is_open.all():
            upper = max(upper, float(cell_bound[~is_open].max()))
        if not is_open.any():
            break
        open_bound = float(cell_bound[is_open].max())
        left, va, vb = left[is_open], va[is_open], vb[is_open]
        if bound - lower <= tolerance or 2 * left.size > config.MAX_REFINEMENT_POINTS:
            upper = max(upper, open_bound)
            break
        mid = left + width / 2
        vm = np.abs(evaluate(P, kappa + 1j * mid))
        lower = max(lower, float(vm.max()))
        left = np.concatenate([left, mid])
        va, vb = np.concatenate([va, vm]), np.concatenate([vm, vb])
        width /= 2
    else:
        upper = max(upper, float(0.5 * (va + vb + lipschitz * width).max()))
    logger.debug("Refined sup norm to width %.3g (lower=%.12g upper=%.12g)", width, lower, upper)
    return lower, max(upper, lower), width


def certified_sup_norm(
    P: GDPolynomial,
    kappa: float,
    t_window: Optional[float] = None,
    step: Optional[float] = None,
    tolerance: Optional[float] = None,
    t_center: float = 0.0,
) -> SupNormEnclosure:
    """Certified enclosure of sup |P| on the line Re s = kappa.

    With an explicit `step` and no `tolerance` the plain grid rule applies:
    lower is the grid maximum and upper = lower + L*step/2. Without a step the
    default coarse grid is refined until the slack is below `tolerance`
    (default DEFAULT_SLACK). Upper never exceeds the analytic bound.
    """
    if kappa < 0:
        raise NumericPrecondition(f"kappa must be >= 0, got {kappa}")
    if t_window is None:
        t_window = config.DEFAULT_WINDOW
    if step is None:
        step = config.DEFAULT_COARSE_STEP
        if tolerance is None:
            tolerance = config.DEFAULT_SLACK
    if step <= 0:
        raise NumericPrecondition(f"step must be positive, got {step}")

    bound = analytic_bound(P, kappa)
    if P.is_zero:
        return SupNormEnclosure(0.0, 0.0, kappa, t_window, step, 0.0)

    lipschitz = line_lipschitz(P, kappa)
    t, values = line_scan(P, kappa, t_window, step, t_center)
    mods = np.abs(values)
    lower = float(mods.max())
    upper = lower + lipschitz * step / 2
    final_step = step
    if tolerance is not None and upper - lower > tolerance and bound - lower > tolerance:
        lower, upper, final_step = _refine_cells(
            P, kappa, t, mods, step, lipschitz, tolerance, bound
        )
    upper = max(lower, min(upper, bound))
    return SupNormEnclosure(lower, upper, kappa, t_window, final_step, bound)

"""Random families sharing a finite frequency set."""

import logging
from typing import Sequence

import numpy as np

from ..polynomial import GDPolynomial

logger = logging.getLogger(__name__)


class SharedFrequencyFamily:
    """Perturbations of one random base polynomial over fixed frequencies.

    Each member multiplies the base coefficients by (1 + spread * xi) with
    |xi| <= 1, and the base is normalised so that sum |c| <= bound holds for
    every member.
    """

    def __init__(
        self,
        frequencies: Sequence[float] = (0.0, 1.0, 2.0, 3.0),
        size: int = 20,
        bound: float = 1.0,
        spread: float = 0.1,
        seed: int = 0,
    ):
        self.frequencies = tuple(float(lam) for lam in frequencies)
        self.size = size
        self.bound = bound
        self.spread = spread
        self.seed = seed

    def generate(self) -> list[GDPolynomial]:
        rng = np.random.default_rng(self.seed)
        k = len(self.frequencies)
        base = rng.normal(size=k) + 1j * rng.normal(size=k)
        base *= self.bound / ((1 + self.spread) * np.abs(base).sum())

        members = []
        for _ in range(self.size):
            xi = rng.uniform(0, 1, size=k) * np.exp(2j * np.pi * rng.uniform(0, 1, size=k))
            coeffs = base * (1 + self.spread * xi)
            members.append(GDPolynomial(tuple(zip(self.frequencies, coeffs.tolist()))))
        logger.debug("Generated %d shared-frequency members (seed=%d)", len(members), self.seed)
        return members

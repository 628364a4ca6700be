"""Families of vertical translates of one polynomial."""

import math
from typing import Optional

import numpy as np

from ..polynomial import GDPolynomial, vertical_translate


class VerticalTranslateFamily:
    """V_tau P for random tau uniform in [0, window]."""

    def __init__(
        self,
        base: Optional[GDPolynomial] = None,
        size: int = 50,
        window: float = 1000.0,
        seed: int = 0,
    ):
        self.base = base or GDPolynomial(((1.0, 1.0), (math.sqrt(2), 1.0)))
        self.size = size
        self.window = window
        self.seed = seed

    @property
    def bound(self) -> float:
        return self.base.coefficient_sum

    def taus(self) -> np.ndarray:
        return np.random.default_rng(self.seed).uniform(0, self.window, size=self.size)

    def generate(self) -> list[GDPolynomial]:
        return [vertical_translate(self.base, tau) for tau in self.taus()]

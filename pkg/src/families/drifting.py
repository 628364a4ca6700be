"""Exponentials whose frequencies drift towards a limit frequency."""

from ..polynomial import GDPolynomial


class DriftingFrequencyFamily:
    """Members c * e^{-(lambda + 1/n) s} for n = 1..size."""

    def __init__(self, limit_frequency: float = 1.0, size: int = 30, coefficient: complex = 1.0):
        self.limit_frequency = limit_frequency
        self.size = size
        self.coefficient = coefficient

    @property
    def bound(self) -> float:
        return abs(self.coefficient)

    def frequencies(self) -> list[float]:
        return [self.limit_frequency + 1.0 / n for n in range(1, self.size + 1)]

    def generate(self) -> list[GDPolynomial]:
        return [GDPolynomial.monomial(lam, self.coefficient) for lam in self.frequencies()]

"""Composite Gauss-Legendre quadrature on explicit breakpoints."""

from functools import lru_cache
from typing import Callable

import numpy as np

from . import config


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def composite_gauss_legendre(
    func: Callable[[np.ndarray], np.ndarray],
    breakpoints: np.ndarray,
    order: int = config.QUADRATURE_ORDER,
    chunk: int = 50_000,
) -> complex:
    """Integrate `func` over [breakpoints[0], breakpoints[-1]] panel by panel.

    `func` must accept an array of abscissae and return values of the same shape.
    Panels are processed in chunks to bound memory.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    nodes, weights = _gauss_legendre(order)
    total = 0j
    for start in range(0, breakpoints.size - 1, chunk):
        edges = breakpoints[start:start + chunk + 1]
        left, right = edges[:-1], edges[1:]
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        values = func(x)
        total += complex(np.sum((values * weights[None, :]) * half[:, None]))
    return total


def uniform_breakpoints(a: float, b: float, max_width: float) -> np.ndarray:
    """Breakpoints splitting [a, b] into equal panels no wider than max_width."""
    panels = max(1, int(np.ceil((b - a) / max_width)))
    return np.linspace(a, b, panels + 1)

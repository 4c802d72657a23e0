"""Gauss-Legendre rules and the change-of-variable maps for unbounded supports.

Half-infinite supports (0, inf) are mapped through x = t/(1-t) with
t in (0, 1); the full real line through x = t/(1-t^2) with t in (-1, 1).
Both maps are smooth and push the integrand's tail decay onto the
interval endpoints, so plain Gauss-Legendre nodes converge quickly for
the exponential-tailed densities used here.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

HALFLINE = "halfline"
REALLINE = "real"


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(int(n))


def gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [lo, hi]."""
    t, w = _leggauss(int(n))
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), half * w


def halfline_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating f over (0, inf) via x = t/(1-t)."""
    t, w = gauss_legendre(n, 0.0, 1.0)
    x = t / (1.0 - t)
    jac = 1.0 / (1.0 - t) ** 2
    return x, w * jac


def realline_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating f over (-inf, inf) via x = t/(1-t^2)."""
    t, w = gauss_legendre(n, -1.0, 1.0)
    x = t / (1.0 - t * t)
    jac = (1.0 + t * t) / (1.0 - t * t) ** 2
    return x, w * jac


def support_rule(kind: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Dispatch on a support label: ``halfline`` or ``real``."""
    if kind == HALFLINE:
        return halfline_rule(n)
    if kind == REALLINE:
        return realline_rule(n)
    raise ValueError(f"unknown support kind {kind!r}")


def integrate(f, kind: str, n: int) -> float:
    """Integrate a vectorized scalar function over the given support."""
    x, w = support_rule(kind, n)
    return float(np.dot(w, f(x)))

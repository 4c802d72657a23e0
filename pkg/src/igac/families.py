"""Probability families for level-spacing statistics and their composites.

Three atomic families appear: the exponential law (mean-parametrized,
the spacing law of uncorrelated levels), the Wigner-Dyson surmise
(mean-parametrized, the level-repulsion law), and the one-dimensional
Gaussian.  Composites are independent products of atomic factors; the
two named ones pair a spacing law with a field-energy "bath" factor:

* ``composite_integrable``: exponential(mu_A) x exponential(mu_B)
* ``composite_chaotic``:    wigner_dyson(mu_A) x gaussian(mu_B, sigma_B)

``poisson_spacing`` is accepted as an alias of ``exponential``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError, UnsupportedFamilyError
from .quadrature import HALFLINE, REALLINE

EXPONENTIAL = "exponential"
GAUSSIAN = "gaussian"
WIGNER_DYSON = "wigner_dyson"
COMPOSITE = "composite"

_POS = (0.0, math.inf)
_REAL = (-math.inf, math.inf)


@dataclass(frozen=True)
class FamilySpec:
    """A named probability family over one or more microvariables.

    ``kind`` is one of the atomic kinds or ``composite``; composites
    carry their atomic factors in order.  ``param_domain`` entries are
    open intervals; scale parameters have strictly positive lower
    bounds.  ``supports`` labels each microvariable's support
    (``halfline`` or ``real``).
    """

    name: str
    kind: str
    param_names: tuple[str, ...]
    param_domain: tuple[tuple[float, float], ...]
    supports: tuple[str, ...]
    factors: tuple["FamilySpec", ...] = field(default=())

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    @property
    def n_micro(self) -> int:
        return len(self.supports)

    def atomic_factors(self) -> tuple["FamilySpec", ...]:
        """The atomic factors (the family itself when already atomic)."""
        return self.factors if self.kind == COMPOSITE else (self,)


@dataclass(frozen=True)
class ParamPoint:
    """An ordered macrostate vector tied to a family's parameter list."""

    values: tuple[float, ...]

    @classmethod
    def for_family(cls, family: FamilySpec, values) -> "ParamPoint":
        arr = check_params(family, values)
        return cls(tuple(float(v) for v in arr))

    def __len__(self) -> int:
        return len(self.values)


def exponential_family(param: str = "mu", name: str = EXPONENTIAL) -> FamilySpec:
    return FamilySpec(name, EXPONENTIAL, (param,), (_POS,), (HALFLINE,))


def wigner_dyson_family(param: str = "mu", name: str = WIGNER_DYSON) -> FamilySpec:
    return FamilySpec(name, WIGNER_DYSON, (param,), (_POS,), (HALFLINE,))


def gaussian_family(params: tuple[str, str] = ("mu", "sigma"),
                    name: str = GAUSSIAN) -> FamilySpec:
    return FamilySpec(name, GAUSSIAN, params, (_REAL, _POS), (REALLINE,))


def product_family(factors, name: str = COMPOSITE) -> FamilySpec:
    """Independent product of atomic families, parameters concatenated."""
    factors = tuple(factors)
    if not factors:
        raise ShapeError("a product family needs at least one factor")
    names: list[str] = []
    domains: list[tuple[float, float]] = []
    supports: list[str] = []
    for fac in factors:
        if fac.kind == COMPOSITE:
            raise UnsupportedFamilyError("product factors must be atomic families")
        names.extend(fac.param_names)
        domains.extend(fac.param_domain)
        supports.extend(fac.supports)
    if len(set(names)) != len(names):
        raise ShapeError(f"duplicate parameter names in product family: {names}")
    return FamilySpec(name, COMPOSITE, tuple(names), tuple(domains),
                      tuple(supports), factors)


def composite_integrable() -> FamilySpec:
    return product_family(
        (exponential_family("mu_A"), exponential_family("mu_B")),
        name="composite_integrable")


def composite_chaotic() -> FamilySpec:
    return product_family(
        (wigner_dyson_family("mu_A"), gaussian_family(("mu_B", "sigma_B"))),
        name="composite_chaotic")


_REGISTRY = {
    EXPONENTIAL: exponential_family,
    "poisson_spacing": exponential_family,
    GAUSSIAN: gaussian_family,
    WIGNER_DYSON: wigner_dyson_family,
    "composite_integrable": composite_integrable,
    "composite_chaotic": composite_chaotic,
}

FAMILY_NAMES = tuple(_REGISTRY)


def family(name: str) -> FamilySpec:
    """Look up a family by name; ``poisson_spacing`` aliases ``exponential``."""
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise UnsupportedFamilyError(
            f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}") from None


def check_params(fam: FamilySpec, theta) -> np.ndarray:
    """Validate a parameter point, naming the offending parameter on failure."""
    if isinstance(theta, ParamPoint):
        theta = theta.values
    arr = np.asarray(theta, dtype=float).reshape(-1)
    if arr.size != fam.n_params:
        raise ShapeError(
            f"family {fam.name!r} takes {fam.n_params} parameters "
            f"({', '.join(fam.param_names)}), got {arr.size}")
    for i, (val, (lo, hi)) in enumerate(zip(arr, fam.param_domain)):
        if not (lo < val < hi) or not np.isfinite(val):
            raise DomainError(
                f"parameter {fam.param_names[i]}={val!r} outside open interval "
                f"({lo}, {hi}) for family {fam.name!r}",
                parameter=fam.param_names[i])
    return arr


def _split_params(fam: FamilySpec, theta: np.ndarray):
    """Yield (atomic factor, its parameter slice) pairs."""
    off = 0
    for fac in fam.atomic_factors():
        yield fac, theta[off:off + fac.n_params]
        off += fac.n_params


def _atomic_log_density(kind: str, params: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorized log density of one atomic factor; -inf outside support."""
    x = np.asarray(x, dtype=float)
    if kind == EXPONENTIAL:
        mu = params[0]
        out = np.where(x >= 0.0, -x / mu - math.log(mu), -math.inf)
    elif kind == WIGNER_DYSON:
        mu = params[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            body = (np.log(np.pi * x / (2.0 * mu * mu))
                    - np.pi * x * x / (4.0 * mu * mu))
        out = np.where(x > 0.0, body, -math.inf)
        out = np.where(x == 0.0, -math.inf, out)
    elif kind == GAUSSIAN:
        mu, sigma = params
        out = (-0.5 * math.log(2.0 * math.pi * sigma * sigma)
               - (x - mu) ** 2 / (2.0 * sigma * sigma))
    else:  # pragma: no cover - registry guards this
        raise UnsupportedFamilyError(f"no density registered for kind {kind!r}")
    return out


def log_density(fam: FamilySpec, theta, x) -> np.ndarray | float:
    """Log density; supports x of shape () / (n_micro,) / (m, n_micro)."""
    th = check_params(fam, theta)
    xs = np.asarray(x, dtype=float)
    scalar_in = xs.ndim == 0
    if fam.n_micro == 1:
        cols = xs.reshape(-1, 1) if xs.ndim <= 1 else xs
    else:
        cols = xs.reshape(1, -1) if xs.ndim == 1 else xs
    if cols.ndim != 2 or cols.shape[1] != fam.n_micro:
        raise ShapeError(
            f"family {fam.name!r} has {fam.n_micro} microvariables, "
            f"got x of shape {xs.shape}")
    total = np.zeros(cols.shape[0])
    col = 0
    for fac, p in _split_params(fam, th):
        total = total + _atomic_log_density(fac.kind, p, cols[:, col])
        col += 1
    if scalar_in or (xs.ndim == 1 and fam.n_micro > 1):
        return float(total[0])
    return total


def density(fam: FamilySpec, theta, x) -> np.ndarray | float:
    """Density value; zero (not an error) outside the microvariable support."""
    out = np.exp(log_density(fam, theta, x))
    return float(out) if np.ndim(out) == 0 else out


def moments(fam: FamilySpec, theta) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form per-microvariable means and variances."""
    th = check_params(fam, theta)
    means, variances = [], []
    for fac, p in _split_params(fam, th):
        if fac.kind == EXPONENTIAL:
            means.append(p[0])
            variances.append(p[0] ** 2)
        elif fac.kind == WIGNER_DYSON:
            means.append(p[0])
            variances.append((4.0 / math.pi - 1.0) * p[0] ** 2)
        else:  # GAUSSIAN
            means.append(p[0])
            variances.append(p[1] ** 2)
    return np.array(means), np.array(variances)


def _atomic_sample(kind: str, params: np.ndarray, count: int,
                   rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF sampling (Box-Muller for the Gaussian factor)."""
    u = rng.random(count)
    if kind == EXPONENTIAL:
        return -params[0] * np.log1p(-u)
    if kind == WIGNER_DYSON:
        return params[0] * np.sqrt(-(4.0 / math.pi) * np.log1p(-u))
    # Gaussian: Box-Muller on (u, u2); 1-u keeps the log argument in (0, 1].
    u2 = rng.random(count)
    z = np.sqrt(-2.0 * np.log1p(-u)) * np.cos(2.0 * math.pi * u2)
    return params[0] + params[1] * z


def sample(fam: FamilySpec, theta, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` microstates; deterministic for a fixed seed.

    Returns shape (count,) for univariate families and (count, n_micro)
    for composites.
    """
    th = check_params(fam, theta)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    rng = np.random.Generator(np.random.PCG64(seed))
    cols = [_atomic_sample(fac.kind, p, count, rng)
            for fac, p in _split_params(fam, th)]
    if fam.n_micro == 1:
        return cols[0]
    return np.stack(cols, axis=1)


def cdf(fam: FamilySpec, theta, x) -> np.ndarray | float:
    """Closed-form CDF for univariate families (used by sampling checks)."""
    th = check_params(fam, theta)
    if fam.n_micro != 1:
        raise ShapeError(f"cdf is defined for univariate families, not {fam.name!r}")
    xs = np.asarray(x, dtype=float)
    kind = fam.atomic_factors()[0].kind
    if kind == EXPONENTIAL:
        out = np.where(xs >= 0.0, -np.expm1(-xs / th[0]), 0.0)
    elif kind == WIGNER_DYSON:
        out = np.where(xs >= 0.0,
                       -np.expm1(-np.pi * xs * xs / (4.0 * th[0] ** 2)), 0.0)
    else:  # GAUSSIAN
        mu, sigma = th
        out = 0.5 * (1.0 + np.vectorize(math.erf)((xs - mu) / (sigma * math.sqrt(2.0))))
    return float(out) if np.ndim(x) == 0 else np.asarray(out)

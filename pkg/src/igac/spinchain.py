"""Open Ising chain in a tilted field and its level-spacing statistics.

The Hamiltonian is

    H = sum_{j=0}^{n-2} sx_j sx_{j+1} + sum_{j=0}^{n-1} (h_x sx_j + h_y sy_j)

with open boundaries and the coupling fixed to +1 (antiferromagnetic).
With both field components on, the only generic symmetry is the site
reflection j <-> n-1-j; level-spacing analysis must stay inside a
single reflection-parity sector, otherwise superposed sectors fake
Poisson statistics.  Spectra are unfolded by a polynomial fit of the
spectral staircase and compared against the unit-mean exponential and
Wigner-Dyson spacing laws by Kolmogorov-Smirnov distance.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import (FitError, InsufficientDataError, ResourceError,
                     ValidationError)

SECTORS = ("full", "reflection_even", "reflection_odd")
DEFAULT_MAX_SPINS = 14
MAX_SPINS_ENV = "IGAC_MAX_N"


def max_spins() -> int:
    """Configured ceiling on the chain length (env-overridable)."""
    raw = os.environ.get(MAX_SPINS_ENV)
    if raw is None:
        return DEFAULT_MAX_SPINS
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(
            f"{MAX_SPINS_ENV}={raw!r} is not an integer", field=MAX_SPINS_ENV)


@dataclass(frozen=True)
class ChainSpec:
    """Chain length, field components and symmetry sector."""

    n: int
    h_x: float
    h_y: float
    sector: str = "reflection_even"
    boundary: str = "open"

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}", field="n")
        if self.sector not in SECTORS:
            raise ValidationError(
                f"sector {self.sector!r} not in {SECTORS}", field="sector")
        if self.boundary != "open":
            raise ValidationError(
                f"only open boundaries are supported, got {self.boundary!r}",
                field="boundary")


def _reverse_bits(states: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(states)
    for k in range(n):
        out |= ((states >> k) & 1) << (n - 1 - k)
    return out


def reflection_basis(n: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Orthonormal bases of the site-reflection parity sectors.

    Returns (even, odd) matrices of shape (2^n, d_sector) whose columns
    are parity eigenvectors built from orbit representatives.
    """
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    partner = _reverse_bits(states, n)
    reps = states[states <= partner]
    rows_e, cols_e, data_e = [], [], []
    rows_o, cols_o, data_o = [], [], []
    col_e = col_o = 0
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for b in reps:
        rb = int(partner[b])
        if rb == b:
            rows_e.append(b)
            cols_e.append(col_e)
            data_e.append(1.0)
            col_e += 1
        else:
            rows_e.extend([b, rb])
            cols_e.extend([col_e, col_e])
            data_e.extend([inv_sqrt2, inv_sqrt2])
            col_e += 1
            rows_o.extend([b, rb])
            cols_o.extend([col_o, col_o])
            data_o.extend([inv_sqrt2, -inv_sqrt2])
            col_o += 1
    even = sp.csr_matrix((data_e, (rows_e, cols_e)), shape=(dim, col_e))
    odd = sp.csr_matrix((data_o, (rows_o, cols_o)), shape=(dim, col_o))
    return even, odd


def _full_hamiltonian_sparse(n: int, h_x: float, h_y: float) -> sp.csr_matrix:
    dim = 1 << n
    cols = np.arange(dim, dtype=np.int64)
    rows_all, cols_all, data_all = [], [], []
    for j in range(n - 1):
        flip = (1 << j) | (1 << (j + 1))
        rows_all.append(cols ^ flip)
        cols_all.append(cols)
        data_all.append(np.ones(dim, dtype=complex))
    if h_x != 0.0:
        for j in range(n):
            rows_all.append(cols ^ (1 << j))
            cols_all.append(cols)
            data_all.append(np.full(dim, h_x, dtype=complex))
    if h_y != 0.0:
        for j in range(n):
            bit = (cols >> j) & 1
            rows_all.append(cols ^ (1 << j))
            cols_all.append(cols)
            data_all.append(1j * h_y * np.where(bit == 0, 1.0, -1.0))
    if not rows_all:
        return sp.csr_matrix((dim, dim), dtype=complex)
    return sp.csr_matrix(
        (np.concatenate(data_all),
         (np.concatenate(rows_all), np.concatenate(cols_all))),
        shape=(dim, dim))


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense Hamiltonian in the requested symmetry-sector basis."""
    ceiling = max_spins()
    if spec.n > ceiling:
        raise ResourceError(
            f"n={spec.n} exceeds the configured maximum {ceiling} "
            f"(set {MAX_SPINS_ENV} to override)")
    h = _full_hamiltonian_sparse(spec.n, spec.h_x, spec.h_y)
    if spec.sector == "full":
        return h.toarray()
    even, odd = reflection_basis(spec.n)
    basis = even if spec.sector == "reflection_even" else odd
    return (basis.conj().T @ h @ basis).toarray()


def diagonalize(h: np.ndarray) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {h.shape}")
    if h.size and float(np.max(np.abs(h - h.conj().T))) > 1e-12:
        raise ValidationError("matrix is not Hermitian within 1e-12")
    if h.size == 0:
        return np.array([])
    return np.linalg.eigvalsh(h)


def unfold(eigenvalues: np.ndarray, poly_degree: int = 7,
           trim_fraction: float = 0.1) -> np.ndarray:
    """Unit-mean spacings from a spectrum via staircase unfolding.

    Fits the cumulative staircase N(E) with a polynomial on a scaled
    abscissa, maps levels through the fit, trims both spectral edges and
    normalizes the mean spacing to one.  Near-degenerate levels keep
    their (near-zero) spacings.
    """
    ev = np.sort(np.asarray(eigenvalues, dtype=float))
    count = len(ev)
    if count < 100:
        raise InsufficientDataError(
            f"unfolding needs >= 100 eigenvalues, got {count}")
    if not 0.0 <= trim_fraction < 0.3:
        raise ValidationError(
            f"trim_fraction must be in [0, 0.3), got {trim_fraction}",
            field="trim_fraction")
    if poly_degree < 1:
        raise ValidationError(
            f"poly_degree must be >= 1, got {poly_degree}", field="poly_degree")
    spread = ev[-1] - ev[0]
    t = 2.0 * (ev - ev[0]) / spread - 1.0 if spread > 0 else np.zeros_like(ev)
    vander = np.polynomial.polynomial.polyvander(t, poly_degree)
    cond = float(np.linalg.cond(vander))
    if cond > 1e8:
        raise FitError(
            f"staircase fit is ill-conditioned (cond ~{cond:.2e}); "
            f"try a lower poly_degree than {poly_degree}")
    staircase = np.arange(count) + 0.5
    coeff, *_ = np.linalg.lstsq(vander, staircase, rcond=None)
    unfolded = vander @ coeff
    k = int(math.floor(trim_fraction * count))
    kept = unfolded[k:count - k] if k > 0 else unfolded
    spacings = np.diff(kept)
    mean = float(spacings.mean())
    if mean <= 0.0:
        raise FitError("unfolded spacings have nonpositive mean; fit unusable")
    return spacings / mean


def poisson_spacing_cdf(s: np.ndarray) -> np.ndarray:
    """Unit-mean exponential spacing law, 1 - exp(-s)."""
    s = np.asarray(s, dtype=float)
    return np.where(s > 0.0, -np.expm1(-s), 0.0)


def wigner_spacing_cdf(s: np.ndarray) -> np.ndarray:
    """Unit-mean Wigner-Dyson spacing law, 1 - exp(-pi s^2 / 4)."""
    s = np.asarray(s, dtype=float)
    return np.where(s > 0.0, -np.expm1(-math.pi * s * s / 4.0), 0.0)


def poisson_spacing_pdf(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0.0, np.exp(-s), 0.0)


def wigner_spacing_pdf(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0.0,
                    (math.pi / 2.0) * s * np.exp(-math.pi * s * s / 4.0), 0.0)


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance of a sample to a reference CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    ref = cdf(x)
    upper = np.max(np.arange(1, n + 1) / n - ref)
    lower = np.max(ref - np.arange(0, n) / n)
    return float(max(upper, lower))


@dataclass(frozen=True)
class LsdResult:
    ks_poisson: float
    ks_wigner: float
    verdict: str  # "poisson_like" | "wigner_like" | "inconclusive"


def lsd_verdict(spacings: np.ndarray, margin: float = 0.01,
                fit_cap: float = 0.3) -> LsdResult:
    """Classify unfolded spacings against the two reference laws.

    A verdict needs the winning law to beat the other by ``margin`` and
    to be a tenable fit at all (distance below ``fit_cap``); degenerate
    samples far from both laws come back inconclusive.
    """
    spacings = np.asarray(spacings, dtype=float)
    if len(spacings) < 200:
        raise InsufficientDataError(
            f"verdict needs >= 200 spacings, got {len(spacings)}")
    ks_p = ks_distance(spacings, poisson_spacing_cdf)
    ks_w = ks_distance(spacings, wigner_spacing_cdf)
    if min(ks_p, ks_w) > fit_cap:
        verdict = "inconclusive"
    elif ks_p < ks_w - margin:
        verdict = "poisson_like"
    elif ks_w < ks_p - margin:
        verdict = "wigner_like"
    else:
        verdict = "inconclusive"
    return LsdResult(ks_p, ks_w, verdict)


@dataclass(frozen=True)
class HistogramData:
    edges: np.ndarray
    densities: np.ndarray
    centers: np.ndarray
    poisson_ref: np.ndarray
    wigner_ref: np.ndarray


def spacing_histogram(spacings: np.ndarray, bin_count: int) -> HistogramData:
    """Normalized spacing histogram plus both reference densities."""
    if bin_count < 5:
        raise ValidationError(
            f"bin_count must be >= 5, got {bin_count}", field="bin_count")
    spacings = np.asarray(spacings, dtype=float)
    lo, hi = float(spacings.min()), float(spacings.max())
    if hi - lo <= 0.0:
        lo, hi = lo - 0.5, hi + 0.5  # all equal: one occupied bin mid-range
    densities, edges = np.histogram(spacings, bins=bin_count, range=(lo, hi),
                                    density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return HistogramData(edges, densities, centers,
                         poisson_spacing_pdf(centers),
                         wigner_spacing_pdf(centers))


@dataclass(frozen=True)
class SpectrumRecord:
    """Spectrum of one chain with its unfolded-spacing classification."""

    spec: ChainSpec
    eigenvalues: np.ndarray
    unfolded_spacings: np.ndarray
    ks_poisson: float
    ks_wigner: float
    verdict: str


def analyze_chain(spec: ChainSpec, poly_degree: int = 7,
                  trim_fraction: float = 0.1,
                  margin: float = 0.01) -> SpectrumRecord:
    """Build, diagonalize, unfold and classify a chain in one pass."""
    h = build_hamiltonian(spec)
    ev = diagonalize(h)
    spacings = unfold(ev, poly_degree=poly_degree, trim_fraction=trim_fraction)
    result = lsd_verdict(spacings, margin=margin)
    return SpectrumRecord(spec, ev, spacings, result.ks_poisson,
                          result.ks_wigner, result.verdict)

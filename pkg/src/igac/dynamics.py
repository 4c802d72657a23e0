"""Geodesic flow and geodesic-deviation dynamics on a manifold.

Trajectories solve d^2 theta/dtau^2 + Gamma(theta)(v, v) = 0 with an
explicit embedded Runge-Kutta 4(5) pair (Dormand-Prince coefficients)
under mixed absolute/relative error control.  Deviation vectors are
co-integrated in first-order covariant form,

    dJ/dtau = K - Gamma(v, J),      dK/dtau = -Gamma(v, K) - R(J, v)v,

with K the covariant rate of J, so flat manifolds give exactly affine
growth and constant negative curvature gives sinh growth.  Integration
halts with a boundary event when a coordinate comes within a small
margin of its open-domain edge; scale coordinates must stay positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, InsufficientDataError, ShapeError,
                     SingularityError)
from .geometry import christoffel, riemann
from .manifold import ManifoldModel

BOUNDARY_MARGIN = 1e-9

# Dormand-Prince 5(4) tableau; the fifth-order row propagates.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                187 / 2100, 1 / 40])
_ERR = _B5 - _B4


@dataclass(frozen=True)
class BoundaryEvent:
    """Domain-edge hit that truncated an integration."""

    tau: float
    coordinate: int
    coordinate_name: str
    value: float


@dataclass(frozen=True)
class LambdaEstimate:
    """Least-squares growth rate of log ||J|| over a window."""

    lambda_j: float
    fit_r2: float
    window: tuple[float, float]
    n_samples: int


@dataclass
class GeodesicTrajectory:
    """A geodesic sampled on a tau grid, optionally with a deviation field.

    ``speed`` is the g-norm of the velocity (constant along geodesics up
    to integrator tolerance).  When filled, ``jacobi``/``jacobi_rate``
    hold coordinate components of J and of its covariant rate, and
    ``jacobi_norm`` the pointwise g-norm of J.
    """

    model_name: str
    tau_grid: np.ndarray
    coords: np.ndarray
    velocity: np.ndarray
    speed: np.ndarray
    jacobi: np.ndarray | None = None
    jacobi_rate: np.ndarray | None = None
    jacobi_norm: np.ndarray | None = None
    boundary_event: BoundaryEvent | None = None

    @property
    def n_samples(self) -> int:
        return len(self.tau_grid)


def _domain_guard(model: ManifoldModel, tau: float, theta: np.ndarray
                  ) -> BoundaryEvent | None:
    for i, (lo, hi) in enumerate(model.domain):
        if theta[i] <= lo + BOUNDARY_MARGIN or theta[i] >= hi - BOUNDARY_MARGIN:
            return BoundaryEvent(tau, i, model.coord_names[i], float(theta[i]))
    return None


def _integrate_on_grid(rhs, y0: np.ndarray, grid: np.ndarray, tol: float,
                       guard=None, min_step: float | None = None):
    """Adaptive RK45 walk recording the state at every grid node.

    Steps are capped so each grid node is hit exactly.  Returns the
    recorded states (truncated at a guard event) and the event, if any.
    """
    atol = rtol = float(tol)
    y = np.asarray(y0, dtype=float).copy()
    tau = float(grid[0])
    states = [y.copy()]
    event = None
    k1 = rhs(tau, y)
    span = float(grid[-1] - grid[0])
    h = min(1e-2 * max(span, 1e-12), span or 1e-12)
    floor = min_step if min_step is not None else 1e-14 * max(1.0, span)
    ks = np.empty((7, y.size))
    for target in grid[1:]:
        while tau < target - 1e-15 * max(1.0, abs(target)):
            h = min(h, target - tau)
            ks[0] = k1
            for s in range(1, 7):
                ys = y + h * (_A[s] @ ks[:s])
                ks[s] = rhs(tau + _C[s] * h, ys)
            y5 = y + h * (_B5 @ ks)
            err_vec = h * (_ERR @ ks)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if err <= 1.0:
                tau = tau + h
                y = y5
                k1 = ks[6]  # first-same-as-last stage
                if guard is not None:
                    event = guard(tau, y)
                    if event is not None:
                        return np.array(states), event
            factor = 0.9 * (err ** -0.2) if err > 0.0 else 5.0
            h = h * min(5.0, max(0.2, factor))
            if h < floor:
                raise SingularityError(
                    f"step size underflowed ({h:.3e} < {floor:.3e}) at tau={tau:.6g}",
                    last_state=(tau, y.copy()))
        states.append(y.copy())
    return np.array(states), event


def _g_norms(model: ManifoldModel, coords: np.ndarray,
             vectors: np.ndarray) -> np.ndarray:
    out = np.empty(len(coords))
    for i, (th, vec) in enumerate(zip(coords, vectors)):
        g = model.metric(th)
        out[i] = np.sqrt(max(0.0, float(vec @ g @ vec)))
    return out


def integrate_geodesic(model: ManifoldModel, theta0, v0, tau_max: float,
                       tol: float = 1e-8, samples: int = 512,
                       use_closed_form: bool = True,
                       min_step: float | None = None) -> GeodesicTrajectory:
    """Integrate the geodesic equation from (theta0, v0) up to tau_max.

    The trajectory is recorded on a uniform grid of ``samples`` points;
    a boundary event truncates the grid and is reported on the result.
    A step-size underflow (below ``min_step``) raises SingularityError
    carrying the last valid state.
    """
    th0 = model.check_point(theta0)
    v0 = np.asarray(v0, dtype=float).reshape(-1)
    if v0.size != model.dim:
        raise ShapeError(f"velocity of size {v0.size} does not match dim {model.dim}")
    if not tau_max > 0.0:
        raise DomainError(f"tau_max must be positive, got {tau_max}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    dim = model.dim

    def rhs(tau, y):
        th, vel = y[:dim], y[dim:]
        gam = christoffel(model, th, use_closed_form=use_closed_form)
        acc = -np.einsum("abc,b,c->a", gam, vel, vel)
        return np.concatenate([vel, acc])

    grid = np.linspace(0.0, float(tau_max), int(samples))
    states, event = _integrate_on_grid(
        rhs, np.concatenate([th0, v0]), grid, tol,
        guard=lambda tau, y: _domain_guard(model, tau, y[:dim]),
        min_step=min_step)
    n = len(states)
    coords, velocity = states[:, :dim], states[:, dim:]
    return GeodesicTrajectory(
        model_name=model.name,
        tau_grid=grid[:n],
        coords=coords,
        velocity=velocity,
        speed=_g_norms(model, coords, velocity),
        boundary_event=event,
    )


def integrate_jacobi(model: ManifoldModel, traj: GeodesicTrajectory, J0, dJ0,
                     tol: float = 1e-8,
                     use_closed_form: bool = True) -> GeodesicTrajectory:
    """Co-integrate the deviation equation along a geodesic.

    ``dJ0`` is the initial covariant rate of the deviation vector.  The
    geodesic is re-integrated jointly with (J, K) on the trajectory's
    own grid; the returned copy carries the deviation components and
    the pointwise g-norm of J.
    """
    if traj.model_name != model.name:
        raise ShapeError(
            f"trajectory belongs to model {traj.model_name!r}, not {model.name!r}")
    dim = model.dim
    J0 = np.asarray(J0, dtype=float).reshape(-1)
    dJ0 = np.asarray(dJ0, dtype=float).reshape(-1)
    if J0.size != dim or dJ0.size != dim:
        raise ShapeError(f"deviation vectors must have size {dim}")

    def rhs(tau, y):
        th, vel, jac, rate = (y[:dim], y[dim:2 * dim],
                              y[2 * dim:3 * dim], y[3 * dim:])
        gam = christoffel(model, th, use_closed_form=use_closed_form)
        riem = riemann(model, th, use_closed_form=use_closed_form)
        acc = -np.einsum("abc,b,c->a", gam, vel, vel)
        dj = rate - np.einsum("abc,b,c->a", gam, vel, jac)
        curv = np.einsum("mnrs,n,r,s->m", riem, vel, jac, vel)
        dk = -np.einsum("abc,b,c->a", gam, vel, rate) - curv
        return np.concatenate([vel, acc, dj, dk])

    y0 = np.concatenate([traj.coords[0], traj.velocity[0], J0, dJ0])
    states, event = _integrate_on_grid(
        rhs, y0, traj.tau_grid, tol,
        guard=lambda tau, y: _domain_guard(model, tau, y[:dim]))
    n = len(states)
    coords, velocity = states[:, :dim], states[:, dim:2 * dim]
    jac, rate = states[:, 2 * dim:3 * dim], states[:, 3 * dim:]
    return GeodesicTrajectory(
        model_name=model.name,
        tau_grid=traj.tau_grid[:n],
        coords=coords,
        velocity=velocity,
        speed=_g_norms(model, coords, velocity),
        jacobi=jac,
        jacobi_rate=rate,
        jacobi_norm=_g_norms(model, coords, jac),
        boundary_event=event or traj.boundary_event,
    )


def estimate_lambda_j(traj: GeodesicTrajectory,
                      window: tuple[float, float]) -> LambdaEstimate:
    """Exponential growth rate of the deviation norm over a tau window.

    Least-squares slope of log ||J(tau)/J(w0)|| against tau, the
    finite-window version of the limit rate (1/tau) log ||J(tau)/J(0)||.
    """
    if traj.jacobi_norm is None:
        raise InsufficientDataError("trajectory carries no deviation field")
    w0, w1 = float(window[0]), float(window[1])
    mask = (traj.tau_grid >= w0) & (traj.tau_grid <= w1)
    if int(mask.sum()) < 10:
        raise InsufficientDataError(
            f"window [{w0:g}, {w1:g}] holds {int(mask.sum())} samples; need >= 10")
    norms = traj.jacobi_norm[mask]
    if np.any(norms <= 0.0):
        raise InsufficientDataError("deviation norm vanishes inside the window")
    taus = traj.tau_grid[mask]
    y = np.log(norms / norms[0])
    slope, intercept = np.polyfit(taus, y, 1)
    resid = y - (slope * taus + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return LambdaEstimate(float(slope), r2, (w0, w1), int(mask.sum()))


def reverse_initial_conditions(traj: GeodesicTrajectory
                               ) -> tuple[np.ndarray, np.ndarray]:
    """Final state with negated velocity, for round-trip checks."""
    return traj.coords[-1].copy(), -traj.velocity[-1].copy()

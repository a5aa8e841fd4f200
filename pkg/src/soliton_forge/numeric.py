"""Shared numerical kernels: quadrature, a shooting oracle, eigensolves, root finding.

The heavy lifting is delegated to scipy (QUADPACK, DOP853, ARPACK/LAPACK,
Brent); this module fixes tolerances and maps failures onto package errors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy import linalg as _linalg
from scipy import optimize as _optimize
from scipy.sparse import issparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import NoBracket, NoConvergence, StepUnderflow, ToleranceNotMet


@dataclass(frozen=True)
class GridSpec:
    """Symmetric uniform grid ``[-half_width, half_width]`` containing 0."""

    half_width: float
    n_points: int = 2001

    def __post_init__(self):
        if not (np.isfinite(self.half_width) and self.half_width > 0):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(f"n_points must be odd and >= 3, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n_points)

    def refined(self) -> GridSpec:
        """Same interval with the spacing halved."""
        return GridSpec(self.half_width, 2 * self.n_points - 1)


def integrate(fn: Callable[[float], float], interval, tol: float = 1e-10,
              points=None, limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature with absolute error estimate <= ``tol``."""
    a, b = map(float, interval)
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        val, err = _integrate.quad(fn, a, b, epsabs=tol, epsrel=0.0, limit=limit, points=points)
    if not np.isfinite(val) or err > tol:
        raise ToleranceNotMet(f"quadrature error estimate {err:.3e} exceeds tol {tol:.3e}")
    return float(val)


@dataclass(frozen=True)
class Trajectory:
    x: np.ndarray
    u: np.ndarray   # (N, len(x))
    du: np.ndarray  # (N, len(x))


def nls_rhs(mu: np.ndarray):
    """First-order form of ``u'' = -mu u - 2 (sum u^2) u``."""
    mu = np.asarray(mu, dtype=float)
    n = len(mu)

    def rhs(_x, y):
        u, v = y[:n], y[n:]
        return np.concatenate([v, -(mu + 2.0 * np.dot(u, u)) * u])

    return rhs


def shoot(rep, x0: float, x1: float, rtol: float = 1e-12, atol: float = 1e-14,
          n_samples: int = 401, y0=None) -> Trajectory:
    """Integrate the ODE from the rep's data at ``x0`` (or ``y0``) to ``x1``.

    Only the initial data come from the closed form; the dynamics use the
    equation alone, which is what makes this an independent oracle.
    """
    n = rep.n
    if y0 is None:
        prof = rep.profiles([x0])[:, :, 0]
        y0 = np.concatenate([prof[0], prof[1]])
    y0 = np.asarray(y0, dtype=float)
    blow = 1e6 * (1.0 + np.abs(y0).max())

    def escape(_x, y):
        return blow - np.abs(y).max()

    escape.terminal = True
    xs = np.linspace(x0, x1, n_samples)
    sol = _integrate.solve_ivp(nls_rhs(rep.spectrum.mu), (x0, x1), y0, method="DOP853",
                               t_eval=xs, rtol=rtol, atol=atol, events=escape)
    if sol.status == -1:
        raise StepUnderflow(sol.message)
    if sol.status == 1:
        raise StepUnderflow(f"trajectory left the bounded region near x={sol.t_events[0][0]:.4g}")
    return Trajectory(sol.t, sol.y[:n], sol.y[n:])


def eigs_smallest(A, k: int, shift: float = 0.0, dense_max: int = 600):
    """``k`` eigenpairs of symmetric ``A`` nearest ``shift``, ordered by distance.

    Small problems use a dense LAPACK solve; larger sparse ones use ARPACK in
    shift-invert mode (a sparse LU of ``A - shift I`` under the hood).
    """
    n = A.shape[0]
    k = min(k, n)
    if n <= dense_max or k >= n - 1:
        M = A.toarray() if issparse(A) else np.asarray(A)
        w, v = _linalg.eigh(M)
    else:
        try:
            w, v = eigsh(A, k=k, sigma=shift, which="LM", tol=1e-13, maxiter=20 * n)
        except ArpackNoConvergence as exc:
            raise NoConvergence(str(exc)) from exc
    order = np.argsort(np.abs(w - shift))[:k]
    w, v = w[order], v[:, order]
    scale = max(1.0, float(abs(A).max()))
    res = np.linalg.norm(A @ v - v * w, axis=0)
    if np.any(res > 1e-8 * scale):
        raise NoConvergence(f"eigenpair residual {res.max():.3e} too large")
    return w, v


def find_root(fn: Callable[[float], float], bracket, tol: float = 1e-12) -> float:
    """Brent's method on a sign-changing bracket."""
    a, b = map(float, bracket)
    fa, fb = fn(a), fn(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise NoBracket(f"f({a})={fa:.3e} and f({b})={fb:.3e} have the same sign")
    return float(_optimize.brentq(fn, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))


def sign_changes(values) -> np.ndarray:
    """Indices ``k`` with a strict sign change between ``values[k]`` and ``values[k+1]``."""
    s = np.sign(np.asarray(values, dtype=float))
    return np.flatnonzero(s[:-1] * s[1:] < 0)

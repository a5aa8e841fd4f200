"""Identities obeyed by closed-form solutions, and the integrals built from them.

The k-th constant of motion (k = 1..N) is written with elementary symmetric
polynomials ``e_m`` of the chemical potentials over complementary index sets:

    sum_{a<b} e_{k-2}(mu \\ {a,b}) W_ab^2
      + (sum u^2) sum_j e_{k-1}(mu \\ j) u_j^2
      + sum_j e_{k-1}(mu \\ j) u_j'^2
      + sum_j mu_j e_{k-1}(mu \\ j) u_j^2            = 0,

with ``W_ab = u_a' u_b - u_a u_b'`` and ``e_{-1} = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import IndexOutOfRange, OrderOutOfRange
from .exppoly import ExpPoly, differentiate
from .hirota import Ratio, SolutionRep, tau_f
from .numeric import GridSpec, integrate


def esym(values, m: int) -> float:
    """Elementary symmetric polynomial ``e_m``; ``e_0 = 1`` and ``e_m = 0`` for m < 0."""
    if m < 0:
        return 0.0
    c = np.zeros(m + 1)
    c[0] = 1.0
    for v in values:
        c[1:] = c[1:] + v * c[:-1]
    return float(c[m])


def default_grid(rep: SolutionRep, n_points: int = 2001) -> GridSpec:
    return GridSpec(rep.half_width(), n_points)


def residual(rep: SolutionRep, x) -> np.ndarray:
    """``u_i'' + 2 (sum u^2) u_i + mu_i u_i`` as an ``(N, len(x))`` array."""
    u, _, d2 = rep.profiles(x)
    mu = np.asarray(rep.spectrum.mu)[:, None]
    return d2 + 2.0 * np.sum(u * u, axis=0) * u + mu * u


def _weights(mu, k: int):
    n = len(mu)
    single = np.array([esym(np.delete(mu, j), k - 1) for j in range(n)])
    pair = {(a, b): esym(np.delete(mu, [a, b]), k - 2) for a, b in combinations(range(n), 2)}
    return single, pair


def motion_terms(rep: SolutionRep, k: int, x) -> np.ndarray:
    """The four groups (Wronskian, quartic, kinetic, potential) of identity ``k``."""
    n = rep.n
    if not 1 <= k <= n:
        raise OrderOutOfRange(f"order k={k} outside 1..{n}")
    mu = np.asarray(rep.spectrum.mu)
    u, du, _ = rep.profiles(x)
    single, pair = _weights(mu, k)
    wr = np.zeros(u.shape[1])
    for (a, b), w in pair.items():
        if w != 0.0:
            wr += w * (du[a] * u[b] - u[a] * du[b]) ** 2
    u2 = u * u
    quart = np.sum(u2, axis=0) * (single @ u2)
    kin = single @ (du * du)
    pot = (mu * single) @ u2
    return np.stack([wr, quart, kin, pot])


def motion_constant(rep: SolutionRep, k: int, x) -> np.ndarray:
    return motion_terms(rep, k, x).sum(axis=0)


@dataclass(frozen=True)
class MotionReport:
    order: int
    sup_abs: float
    scale: float
    grid: GridSpec

    @property
    def relative(self) -> float:
        return self.sup_abs / self.scale if self.scale > 0 else 0.0


def motion_report(rep: SolutionRep, k: int, grid: GridSpec | None = None) -> MotionReport:
    """Sup of identity ``k`` over the grid, with the largest group magnitude as scale."""
    grid = grid or default_grid(rep)
    t = motion_terms(rep, k, grid.points())
    return MotionReport(k, float(np.abs(t.sum(axis=0)).max()), float(np.abs(t).max()), grid)


# -- masses --------------------------------------------------------------------------

def _group(rep: SolutionRep, i: int) -> list[int]:
    """Indices sharing ``eta_i``; their components are proportional to one profile."""
    eta = rep.spectrum.eta
    return [j for j in range(rep.n) if eta[j] == eta[i]]


def antiderivative(rep: SolutionRep, i: int) -> Ratio:
    """``F / f`` where ``F`` keeps the terms of ``f`` free of the group of ``i``.

    The group is every index with ``eta_j = eta_i``.  The derivative is
    ``-(sum_group u_j^2) / (2 eta_i)``.
    """
    _check_index(rep, i)
    a = list(rep.params.a)
    for j in _group(rep, i):
        a[j] = 0.0
    return Ratio(tau_f(rep.spectrum, a), rep.f)


def antiderivative_defect(rep: SolutionRep, i: int) -> Ratio:
    """``-2 eta_i (F/f)' - sum_group u_j^2`` as one exact ExpPoly ratio over ``f^2``."""
    F = antiderivative(rep, i).num
    f = rep.f
    eta = rep.spectrum.eta[i]
    num = (differentiate(F) * f - F * differentiate(f)) * (-2.0 * eta)
    for j in _group(rep, i):
        num = num - rep.g[j] * rep.g[j]
    return Ratio(num, f * f)


def _limit_at_inf(num: ExpPoly, den: ExpPoly) -> float:
    if not num:
        return 0.0
    if num.top.rate > den.top.rate:
        return float(np.sign(num.top.coeff)) * np.inf
    return num.top.coeff / den.top.coeff if num.top.rate == den.top.rate else 0.0


def _check_index(rep: SolutionRep, i: int):
    if not 0 <= i < rep.n:
        raise IndexOutOfRange(f"component {i} out of range for N={rep.n}")


def mass(rep: SolutionRep, i: int, method: str = "analytic", tol: float = 1e-10) -> float:
    """``int u_i^2`` by the antiderivative limits or by adaptive quadrature."""
    _check_index(rep, i)
    if rep.params.a[i] == 0.0:
        return 0.0
    if method == "analytic":
        r = antiderivative(rep, i)
        grouped = -2.0 * rep.spectrum.eta[i] * (_limit_at_inf(r.num, r.den) - 1.0)
        a = rep.params.a
        return grouped * a[i] ** 2 / sum(a[j] ** 2 for j in _group(rep, i))
    if method == "quadrature":
        comp = rep.components[i]
        return _quad(rep, lambda x: comp(x) ** 2, tol)
    raise ValueError(f"unknown method {method!r}")


def _quad(rep: SolutionRep, fn, tol: float) -> float:
    L = rep.half_width()
    return integrate(fn, (-L, L), tol=tol, points=np.linspace(-L, L, 33)[1:-1])


def lieb_thirring_gap(rep: SolutionRep, tol: float = 1e-10) -> float:
    """``sum_n sqrt|mu_n| - (1/4) int V_+`` with ``V = 2 sum u^2``."""

    def v(x):
        u = rep.profiles([x])[0, :, 0]
        return 2.0 * float(u @ u)

    return float(np.sum(rep.spectrum.eta)) - 0.25 * _quad(rep, v, tol)


@dataclass(frozen=True)
class Energy:
    kinetic: float
    quartic: float

    @property
    def total(self) -> float:
        return self.kinetic - self.quartic


def energy(rep: SolutionRep, tol: float = 1e-10) -> Energy:
    """``sum int u_k'^2 - int (sum u_k^2)^2``, returned piecewise."""

    def kin(x):
        d = rep.profiles([x])[1, :, 0]
        return float(d @ d)

    def quart(x):
        u = rep.profiles([x])[0, :, 0]
        return float(u @ u) ** 2

    return Energy(_quad(rep, kin, tol), _quad(rep, quart, tol))

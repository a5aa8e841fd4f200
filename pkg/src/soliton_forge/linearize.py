"""Linearization around a solution: analytic kernel vectors and a discrete kernel count.

The linearized system is ``H phi = 0`` with

    H = -d^2/dx^2 - 2 (sum u^2) - 4 u u^T - diag(mu),

a symmetric block operator.  Analytic kernel elements are exact ExpPoly
ratios; the discrete kernel is counted from the eigenvalues of a fourth-order
finite-difference version of ``H`` with Dirichlet ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sps
from scipy.linalg import eig_banded, subspace_angles

from .errors import EigenFailure, NoConvergence, OrderOutOfRange, UnequalMu, ZeroParameter
from .exppoly import ExpPoly, differentiate
from .hirota import Ratio, SolutionRep, tau_f, tau_g
from .invariants import _weights
from .numeric import GridSpec, eigs_smallest


@dataclass(frozen=True, eq=False)
class TangentVector:
    """``phi_i = num_i / den`` with exact derivatives through :class:`Ratio`."""

    components: tuple[Ratio, ...]
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.components)

    def profiles(self, x) -> np.ndarray:
        """``(3, N, len(x))`` array of ``phi``, ``phi'``, ``phi''``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.stack([c.derivatives(x) for c in self.components], axis=1)


def tangent_vectors(rep: SolutionRep) -> list[TangentVector]:
    """``d u / d a_j`` for ``j = 1..N`` as exact quotients over ``f^2``."""
    a = rep.params.a
    if any(v == 0.0 for v in a):
        raise ZeroParameter("tangent vectors need every a_j != 0")
    f, f2 = rep.f, rep.f * rep.f
    out = []
    for j in range(rep.n):
        df = tau_f(rep.spectrum, a, da=j)
        comps = tuple(
            Ratio(tau_g(rep.spectrum, a, i, da=j) * f - rep.g[i] * df, f2) for i in range(rep.n)
        )
        out.append(TangentVector(comps, f"d/da{j + 1}"))
    return out


def translation_vector(rep: SolutionRep) -> TangentVector:
    f = rep.f
    comps = tuple(Ratio(differentiate(g) * f - g * differentiate(f), f * f) for g in rep.g)
    return TangentVector(comps, "translation")


def vector_from(rep: SolutionRep, coeffs: dict[int, tuple[int, float]], label: str = "") -> TangentVector:
    """``phi_i = c * u_k`` for ``coeffs[i] = (k, c)``, zero in the other slots."""
    comps = []
    for i in range(rep.n):
        if i in coeffs:
            k, c = coeffs[i]
            comps.append(Ratio(rep.g[k] * c, rep.f))
        else:
            comps.append(Ratio(ExpPoly(), rep.f))
    return TangentVector(tuple(comps), label)


def rotation_kernel(rep: SolutionRep, i: int, j: int) -> TangentVector:
    """``-u_j`` in slot ``i`` and ``u_i`` in slot ``j`` (0-based), for ``mu_i = mu_j``."""
    mu = rep.spectrum.mu
    if i == j or mu[i] != mu[j]:
        raise UnequalMu(f"rotation needs mu_{i + 1} = mu_{j + 1} with i != j")
    return vector_from(rep, {i: (j, -1.0), j: (i, 1.0)}, f"rotation({i + 1},{j + 1})")


def linearized_residual(rep: SolutionRep, phi: TangentVector, x) -> np.ndarray:
    """``phi_i'' + 2 (sum u^2) phi_i + 4 (u . phi) u_i + mu_i phi_i`` at ``x``."""
    u = rep.profiles(x)[0]
    p, _, p2 = phi.profiles(x)
    mu = np.asarray(rep.spectrum.mu)[:, None]
    return p2 + 2.0 * np.sum(u * u, axis=0) * p + 4.0 * np.sum(u * p, axis=0) * u + mu * p


def linearized_motion_constant(rep: SolutionRep, phi: TangentVector, k: int, x) -> np.ndarray:
    """Half the directional derivative of identity ``k`` along ``phi``."""
    n = rep.n
    if not 1 <= k <= n:
        raise OrderOutOfRange(f"order k={k} outside 1..{n}")
    mu = np.asarray(rep.spectrum.mu)
    u, du, _ = rep.profiles(x)
    p, dp, _ = phi.profiles(x)
    single, pair = _weights(mu, k)
    out = np.zeros(u.shape[1])
    for (a, b), w in pair.items():
        if w != 0.0:
            W = du[a] * u[b] - u[a] * du[b]
            dW = dp[a] * u[b] + du[a] * p[b] - p[a] * du[b] - u[a] * dp[b]
            out += w * W * dW
    up = u * p
    out += np.sum(u * u, axis=0) * (single @ up) + np.sum(up, axis=0) * (single @ (u * u))
    out += single @ (du * dp)
    out += (mu * single) @ up
    return out


def analytic_kernel(rep: SolutionRep) -> list[TangentVector]:
    """Every analytic kernel candidate available for ``rep``.

    The translation vector is always included.  Tangent vectors are added when
    every weight is nonzero, plus one rotation per pair of equal potentials.
    """
    vecs = [translation_vector(rep)]
    a = rep.params.a
    if all(v != 0.0 for v in a):
        vecs += tangent_vectors(rep)
    mu = rep.spectrum.mu
    for i, j in combinations(range(rep.n), 2):
        if mu[i] == mu[j]:
            vecs.append(rotation_kernel(rep, i, j))
    return vecs


# -- discrete operator ---------------------------------------------------------------

_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def _interior(grid: GridSpec) -> np.ndarray:
    return grid.points()[1:-1]


def block_operator(rep: SolutionRep, grid: GridSpec) -> sps.csr_matrix:
    """Sparse ``H`` on the interior nodes, components interleaved per node."""
    x = _interior(grid)
    m, n, h2 = len(x), rep.n, grid.spacing ** 2
    u = rep.profiles(x)[0]
    mu = np.asarray(rep.spectrum.mu)
    lap = sps.diags([-_D2[k] * np.ones(m - abs(k - 2)) for k in range(5)], [-2, -1, 0, 1, 2],
                    shape=(m, m)) / h2
    H = sps.kron(lap, sps.identity(n), format="csr")
    V = 2.0 * np.sum(u * u, axis=0)
    blocks = -(V[:, None, None] * np.eye(n) + 4.0 * np.einsum("im,jm->mij", u, u) + np.diag(mu))
    return (H + sps.block_diag(list(blocks), format="csr")).tocsr()


def sample(phi: TangentVector, grid: GridSpec) -> np.ndarray:
    """Interleaved nodal values of ``phi`` on the interior nodes."""
    return phi.profiles(_interior(grid))[0].T.reshape(-1)


@dataclass
class KernelReport:
    analytic_residual_sup: float
    discrete_kernel_dim: int
    eigenvalues_near_zero: list[float]
    threshold: float
    analytic_rank: int = 0
    max_subspace_angle: float = float("nan")
    gap_ratio: float = float("nan")
    grid: GridSpec | None = None
    labels: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "grid"}
        if self.grid is not None:
            d["grid"] = {"half_width": self.grid.half_width, "n_points": self.grid.n_points}
        return d


def _rank_basis(vectors: np.ndarray, rtol: float = 1e-6) -> np.ndarray:
    U, s, _ = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.sum(s > rtol * s[0])) if len(s) and s[0] > 0 else 0
    return U[:, :r]


def kernel_dimension(rep: SolutionRep, grid: GridSpec | None = None, n_eigs: int | None = None,
                     factor: float = 10.0, floor: float = 1e-9) -> KernelReport:
    """Count eigenvalues of the discrete ``H`` below a residual-based threshold.

    With ``Q`` an orthonormal basis of the sampled analytic kernel vectors
    (rank ``r``), min-max applied to ``H^2`` guarantees at least ``r``
    eigenvalues with ``|lambda| <= delta = ||H Q||_2``.  The threshold is
    ``max(factor * delta, floor)``; the margin absorbs nothing else, so
    a count above ``r`` means a genuine extra small eigenvalue.
    """
    grid = grid or GridSpec(rep.half_width(), 2001)
    H = block_operator(rep, grid)
    n_eigs = n_eigs or rep.n + 3
    try:
        w, v = eigs_smallest(H, n_eigs, 0.0)
    except NoConvergence as exc:
        raise EigenFailure(str(exc)) from exc
    cands = analytic_kernel(rep)
    xs = grid.points()
    res = max(float(np.abs(linearized_residual(rep, c, xs)).max()) for c in cands)
    basis = _rank_basis(np.column_stack([sample(c, grid) for c in cands]))
    delta = float(np.linalg.norm(H @ basis, 2)) if basis.shape[1] else 0.0
    tau = max(factor * delta, floor)
    absw = np.abs(w)
    dim = int(np.sum(absw < tau))
    angle = float(np.max(subspace_angles(basis, v[:, :dim]))) if dim and basis.shape[1] else float("nan")
    gap = float(absw[dim] / absw[dim - 1]) if 0 < dim < len(w) and absw[dim - 1] > 0 else float("inf")
    return KernelReport(res, dim, [float(t) for t in w], tau, basis.shape[1], angle, gap, grid,
                        [c.label for c in cands])


def scalar_spectrum(rep: SolutionRep, n_eigs: int, grid: GridSpec | None = None) -> np.ndarray:
    """Lowest ``n_eigs`` eigenvalues of ``-d^2/dx^2 - 2 sum u^2`` with Dirichlet ends."""
    grid = grid or GridSpec(rep.half_width(), 2001)
    x = _interior(grid)
    u = rep.profiles(x)[0]
    h2 = grid.spacing ** 2
    m = len(x)
    ab = np.zeros((3, m))  # upper banded storage
    ab[2] = -_D2[2] / h2 - 2.0 * np.sum(u * u, axis=0)
    ab[1, 1:] = -_D2[1] / h2
    ab[0, 2:] = -_D2[0] / h2
    try:
        w = eig_banded(ab, eigvals_only=True, select="i", select_range=(0, n_eigs - 1))
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    return np.sort(w)

"""Classification of three-component solutions.

Covers the closed forms for coincident chemical potentials, the two spectra
that admit normalized solutions, the admissibility function ``f(p)`` of the
initial slope ratio ``p = u2'(0)/u1'(0)`` and the parameter curve ``S`` of
scaled weights ``(X, Y, Z) = (a1/eta1, a2/eta2, a3/eta3)`` compatible with
``u3(0) = 0`` and ``u2(0)/u1(0) = q``.

On ``u3(0) = 0`` the ratio ``q`` turns out not to depend on ``Z``: the curve
is a finite set of ``(X, Y)`` points times a free ``Z`` line, and ``p`` sweeps
the admissible set as ``Z`` runs over ``(0, inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (CaseMismatch, EmptyBranch, InvalidSpectrum, PoleAtP,
                     RootBracketFailure, ZeroRatio)
from .exppoly import ExpPoly
from .hirota import SolitonParams, SolutionRep, Spectrum, build_solution
from .numeric import find_root, sign_changes


# -- degenerate closed forms ---------------------------------------------------

class DegenerateCase(str, Enum):
    EQ12 = "eq12"
    EQ23 = "eq23"
    EQ123 = "eq123"


def _case_of(spectrum: Spectrum) -> DegenerateCase | None:
    if spectrum.n != 3:
        return None
    m1, m2, m3 = spectrum.mu
    if m1 == m2 == m3:
        return DegenerateCase.EQ123
    if m1 == m2:
        return DegenerateCase.EQ12
    if m2 == m3:
        return DegenerateCase.EQ23
    return None


def degenerate_build(case, spectrum: Spectrum, params: SolitonParams) -> SolutionRep:
    """Three-component solution from the coincident-potential closed forms.

    Independent of the subset enumeration in :mod:`hirota`; used to
    cross-check it.
    """
    case = DegenerateCase(case)
    if _case_of(spectrum) is not case:
        raise CaseMismatch(f"spectrum {spectrum.mu} does not match case {case.value}")
    a1, a2, a3 = params.a
    e1, e2, e3 = spectrum.eta
    if case is DegenerateCase.EQ123:
        s = (a1 * a1 + a2 * a2 + a3 * a3) / (4 * e1 * e1)
        f = ExpPoly([(1.0, 0), (s, 2 * e1)])
        g = tuple(ExpPoly.exp(e1, ai) for ai in (a1, a2, a3))
        return SolutionRep(spectrum, params, g, f)
    if case is DegenerateCase.EQ12:
        s12 = a1 * a1 + a2 * a2
        c3 = a3 * a3 * (e1 - e3) / (4 * e3 * e3 * (e1 + e3))
        c_grp12 = s12 * (e3 - e1) / (4 * e1 * e1 * (e1 + e3))
        f = ExpPoly([
            (1.0, 0),
            (a3 * a3 / (4 * e3 * e3), 2 * e3),
            (s12 / (4 * e1 * e1), 2 * e1),
            (s12 * a3 * a3 * (e3 - e1) ** 2 / (16 * e1 * e1 * e3 * e3 * (e1 + e3) ** 2), 2 * e1 + 2 * e3),
        ])
        g = (
            ExpPoly([(a1, e1), (a1 * c3, e1 + 2 * e3)]),
            ExpPoly([(a2, e1), (a2 * c3, e1 + 2 * e3)]),
            ExpPoly([(a3, e3), (a3 * c_grp12, e3 + 2 * e1)]),
        )
        return SolutionRep(spectrum, params, g, f)
    s23 = a2 * a2 + a3 * a3
    c1 = s23 * (e1 - e3) / (4 * e3 * e3 * (e1 + e3))
    c_grp = a1 * a1 * (e2 - e1) / (4 * e1 * e1 * (e1 + e2))
    f = ExpPoly([
        (1.0, 0),
        (a1 * a1 / (4 * e1 * e1), 2 * e1),
        (s23 / (4 * e3 * e3), 2 * e3),
        (a1 * a1 * s23 * (e1 - e3) ** 2 / (16 * e1 * e1 * e3 * e3 * (e1 + e3) ** 2), 2 * e1 + 2 * e3),
    ])
    g = (
        ExpPoly([(a1, e1), (a1 * c1, e1 + 2 * e3)]),
        ExpPoly([(a2, e2), (a2 * c_grp, e2 + 2 * e1)]),
        ExpPoly([(a3, e2), (a3 * c_grp, e2 + 2 * e1)]),
    )
    return SolutionRep(spectrum, params, g, f)


# -- normalized solutions ----------------------------------------------------------

UNIQUE_MU = (-2.25, -2.25, -2.25)
FAMILY_MU = (-1.0, -1.0, -0.25)


@dataclass(frozen=True)
class Unique:
    """Single normalized solution up to translation and component signs."""

    params: SolitonParams


@dataclass(frozen=True)
class Family:
    """Two-parameter family ``a = (A, +-A, B)``, ``A, B != 0``."""

    spectrum: Spectrum

    def params(self, A: float, B: float, sign: int = 1) -> SolitonParams:
        if A == 0 or B == 0:
            raise ValueError("family generators A and B must be nonzero")
        return SolitonParams((A, float(np.sign(sign)) * A, B))


def _matches(mu: Sequence[float], target: Sequence[float], tol: float) -> bool:
    return all(abs(m - t) <= tol * max(1.0, abs(t)) for m, t in zip(mu, target))


def normalized_solutions(spectrum: Spectrum, tol: float = 1e-12):
    """``Unique``, ``Family`` or ``None`` for a three-component spectrum."""
    if spectrum.n != 3:
        raise CaseMismatch("normalized-solution classification is for N=3")
    if _matches(spectrum.mu, UNIQUE_MU, tol):
        r3 = float(np.sqrt(3.0))
        return Unique(SolitonParams((r3, r3, r3)))
    if _matches(spectrum.mu, FAMILY_MU, tol):
        return Family(spectrum)
    return None


# -- f(p) --------------------------------------------------------------------------

def _strict3(spectrum: Spectrum):
    if spectrum.n != 3:
        raise CaseMismatch("f(p) and the curve S are defined for N=3")
    m1, m2, m3 = spectrum.mu
    if not m1 < m2 < m3:
        raise InvalidSpectrum(f"need mu1 < mu2 < mu3 < 0, got {spectrum.mu}")
    return m1, m2, m3


@dataclass(frozen=True)
class _FParts:
    """``f = C - K (1 + p^2) / (S w^2)``, ``w = alpha p - beta``."""

    C: float
    K: float
    S: float
    alpha: float
    beta: float

    @classmethod
    def of(cls, spectrum: Spectrum, q: float) -> _FParts:
        m1, m2, m3 = _strict3(spectrum)
        if q == 0:
            raise ZeroRatio("q = 0 belongs to the degenerate configurations")
        q2 = q * q
        S = (m3 - m2) + q2 * (m3 - m1)
        C = -((1 + q2) ** 2 * (m3 - m1) * (m3 - m2) / S + m1 + q2 * m2)
        K = q2 * (m1 - m2) ** 2 * (m1 * m1 * q2 - m1 * m3 * q2 + m2 * m2 - m2 * m3)
        return cls(C, K, S, m3 - m2, (m3 - m1) * q)

    def at_angle(self, psi):
        w = self.alpha * np.sin(psi) - self.beta * np.cos(psi)
        with np.errstate(divide="ignore"):
            return self.C - self.K / (self.S * w * w)


def f_of_p(spectrum: Spectrum, q: float, p: float) -> float:
    """``u3'(0)^2 / u1(0)^2`` as a function of ``p`` for fixed ``q``."""
    fp = _FParts.of(spectrum, q)
    w = fp.alpha * p - fp.beta
    if w == 0:
        raise PoleAtP(f"p = {p} is the pole (mu3-mu1) q / (mu3-mu2)")
    return float(fp.C - fp.K * (1 + p * p) / (fp.S * w * w))


def f_of_angle(spectrum: Spectrum, q: float, psi):
    """``f(tan psi)``; finite at ``psi = pi/2`` where it equals ``f(inf)``."""
    return _FParts.of(spectrum, q).at_angle(psi)


def p_max_arg(spectrum: Spectrum, q: float) -> float:
    m1, m2, m3 = _strict3(spectrum)
    return -(m3 - m2) / ((m3 - m1) * q)


def f_max_closed(spectrum: Spectrum, q: float) -> float:
    m1, m2, m3 = _strict3(spectrum)
    q2 = q * q
    return -m3 * (q2 * (m1 - m3) + (m2 - m3)) ** 2 / ((m3 - m1) ** 2 * q2 + (m3 - m2) ** 2)


def pole_of(spectrum: Spectrum, q: float) -> float:
    m1, m2, m3 = _strict3(spectrum)
    return (m3 - m1) * q / (m3 - m2)


@dataclass(frozen=True)
class PBounds:
    """Zeros of ``f`` and the admissible set ``{p : f(p) > 0}``.

    ``p_low < p_high`` always.  When ``wraps`` is false the admissible set is
    the interval ``(p_low, p_high)``; when true the positive arc passes
    through ``p = inf`` and the admissible set is ``p > p_high`` or
    ``p < p_low`` instead.
    """

    p_low: float
    p_high: float
    p_max_arg: float
    f_max: float
    wraps: bool = False

    def contains(self, p: float) -> bool:
        if self.wraps:
            return p > self.p_high or p < self.p_low
        return self.p_low < p < self.p_high

    def interior(self, t) -> np.ndarray:
        """Admissible points parameterised by ``t`` in ``(0, 1)`` along the arc."""
        a, b = self.arc()
        return np.tan(a + np.asarray(t, dtype=float) * (b - a))

    def arc(self) -> tuple[float, float]:
        """Angles ``psi_a < psi_b`` with ``p = tan psi`` spanning the admissible arc."""
        lo, hi = np.arctan(self.p_low), np.arctan(self.p_high)
        return (hi, lo + np.pi) if self.wraps else (lo, hi)


def p_bounds(spectrum: Spectrum, q: float, n_scan: int = 256, tol: float = 1e-14) -> PBounds:
    """Both zeros of ``f`` by a sign scan in the angle ``psi = arctan p`` and Brent.

    Working on the projective line keeps the scan finite and lets the
    positive arc pass through ``p = inf`` without special cases.
    """
    fp = _FParts.of(spectrum, q)
    pstar = p_max_arg(spectrum, q)
    psi0 = float(np.arctan(pstar))
    fmax = float(fp.at_angle(psi0))
    if not fmax > 0:
        raise RootBracketFailure(f"f is not positive at its maximiser (f = {fmax})")
    # the pole sits at psi0 +- pi/2; scan strictly inside each half-turn
    t = np.linspace(0.0, np.pi / 2, n_scan + 1)[1:-1]
    roots = []
    for side in (-1.0, 1.0):
        psi = psi0 + side * t
        k = sign_changes(fp.at_angle(psi))
        if len(k) != 1:
            raise RootBracketFailure(f"expected one sign change on each side, found {len(k)}")
        j = int(k[0])
        roots.append(find_root(lambda s: float(fp.at_angle(s)), (psi[j], psi[j + 1]), tol))
    psi_a, psi_b = sorted(roots)
    wraps = bool(np.floor((psi_a + np.pi / 2) / np.pi) != np.floor((psi_b + np.pi / 2) / np.pi))
    lo, hi = sorted((float(np.tan(psi_a)), float(np.tan(psi_b))))
    return PBounds(lo, hi, pstar, fmax, wraps)


def u1_sq_at_zero(spectrum: Spectrum, q: float) -> float:
    """``u1(0)^2`` forced by the motion constants when ``u3(0) = 0``."""
    m1, m2, m3 = _strict3(spectrum)
    return (m3 - m1) * (m3 - m2) / ((m3 - m2) + q * q * (m3 - m1))


def u1p_sq_at_zero(spectrum: Spectrum, q: float, p: float) -> float:
    """``u1'(0)^2`` forced by the motion constants when ``u3(0) = 0``."""
    m1, m2, m3 = _strict3(spectrum)
    q2 = q * q
    S = (m3 - m2) + q2 * (m3 - m1)
    w = (m3 - m2) * p - (m3 - m1) * q
    if w == 0:
        raise PoleAtP(f"p = {p} is the pole")
    num = q2 * (m1 - m2) ** 2 * (m3 - m1) * (m3 - m2) * (m1 * m1 * q2 - m1 * m3 * q2 + m2 * m2 - m2 * m3)
    return num / (S * S * w * w)


# -- curve S -------------------------------------------------------------------------

def coupling(spectrum: Spectrum) -> tuple[float, float, float]:
    """``(A12, A13, A23)`` with ``Ajk = (eta_j - eta_k)/(eta_j + eta_k)``."""
    e1, e2, e3 = spectrum.eta
    return (e1 - e2) / (e1 + e2), (e1 - e3) / (e1 + e3), (e2 - e3) / (e2 + e3)


def curve_y2(spectrum: Spectrum, X):
    """``Y^2`` on the zero set of ``u3(0)`` as a function of ``X``."""
    A12, A13, A23 = coupling(spectrum)
    X2 = np.asarray(X, dtype=float) ** 2
    return (4.0 / A23) * (1 - A13 * X2 / 4) / (1 - A12 * A12 * A13 * X2 / 4)


def curve_residual(spectrum: Spectrum, X, Y):
    A12, A13, A23 = coupling(spectrum)
    X2, Y2 = np.square(X), np.square(Y)
    return 1 - (A13 * X2 + A23 * Y2) / 4 + A12 * A12 * A13 * A23 * X2 * Y2 / 16


def q_of(spectrum: Spectrum, X, Y, Z=0.0):
    """``u2(0)/u1(0)`` for scaled weights ``(X, Y, Z)``."""
    A12, A13, A23 = coupling(spectrum)
    e1, e2, _ = spectrum.eta
    X2, Y2, Z2 = np.square(X), np.square(Y), np.square(Z)
    top = e2 * Y * (1 + (-A12 * X2 + A23 * Z2) / 4 - A13 * A13 * A12 * A23 * X2 * Z2 / 16)
    bot = e1 * X * (1 + (A12 * Y2 + A13 * Z2) / 4 + A23 * A23 * A12 * A13 * Y2 * Z2 / 16)
    return top / bot


def ratio_residual(spectrum: Spectrum, X, Y, Z, q):
    return q_of(spectrum, X, Y, Z) - q


def _q_reduced(spectrum: Spectrum, X, Y):
    # q on the zero set of u3(0), where the Z dependence cancels
    A12 = coupling(spectrum)[0]
    e1, e2, _ = spectrum.eta
    return e2 * Y * (4 - A12 * X * X) / (e1 * X * (4 + A12 * Y * Y))


def curve_points(spectrum: Spectrum, q: float) -> dict[str, tuple[float, float]]:
    """The ``(X, Y)`` points with ``X > 0`` solving ``u3(0) = 0``, ``u2(0)/u1(0) = q``.

    ``inner`` lies on the hyperbola branch ``X^2 < 4/A13`` and ``outer`` on
    ``X^2 > 4/(A12^2 A13)``.  The outer solution is the mirror image
    ``x -> -x`` of the inner one.
    """
    _strict3(spectrum)
    if q == 0:
        raise ZeroRatio("q = 0 belongs to the degenerate configurations")
    A12, A13, _ = coupling(spectrum)
    sq = float(np.sign(q))
    target = np.log(abs(q))
    out = {}
    for name, lx_edge, sy, span in (
        ("inner", np.log(2 / np.sqrt(A13)), sq, -1.0),
        ("outer", np.log(2 / (A12 * np.sqrt(A13))), -sq, 1.0),
    ):
        def h(lx, sy=sy):
            X = np.exp(lx)
            Y = sy * np.sqrt(curve_y2(spectrum, X))
            return float(np.log(abs(_q_reduced(spectrum, X, Y))) - target)

        edge = lx_edge + span * 1e-10
        far = lx_edge + span * 40.0
        lx = find_root(h, sorted((edge, far)), tol=1e-15)
        X = float(np.exp(lx))
        out[name] = (X, float(sy * np.sqrt(curve_y2(spectrum, X))))
    return out


def slopes_at_zero(spectrum: Spectrum, X: float, Y: float, Z: float) -> np.ndarray:
    """``(u1'(0), u2'(0), u3'(0))`` of the solution with weights ``eta * (X, Y, Z)``."""
    a = np.asarray(spectrum.eta) * (X, Y, Z)
    rep = build_solution(spectrum, SolitonParams(tuple(a)))
    return rep.profiles([0.0])[1, :, 0]


@dataclass(frozen=True)
class BranchPoint:
    X: float
    Y: float
    Z: float
    p: float


BRANCH_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))  # (sign of X,Y ; sign of Z)


def trace_branch(spectrum: Spectrum, q: float, n_points: int = 201,
                 family: str = "inner", z2_range=(1e-12, 1e12)) -> list[list[BranchPoint]]:
    """Four branches of ``S`` through one curve point, each parameterised by ``Z``.

    Branch order: ``(X,Y,Z)``, ``(X,Y,-Z)``, ``(-X,-Y,Z)``, ``(-X,-Y,-Z)``;
    points within a branch are sorted by ``|Z|`` ascending.
    """
    pts = curve_points(spectrum, q)
    if family not in pts:
        raise ValueError(f"family must be one of {sorted(pts)}")
    X, Y = pts[family]
    zs = np.sqrt(np.geomspace(z2_range[0], z2_range[1], n_points))
    branches = []
    for sxy, sz in BRANCH_SIGNS:
        branch = []
        for z in zs:
            d = slopes_at_zero(spectrum, sxy * X, sxy * Y, sz * z)
            p = d[1] / d[0] if d[0] != 0 else np.inf
            branch.append(BranchPoint(sxy * X, sxy * Y, sz * float(z), float(p)))
        if not branch:
            raise EmptyBranch("no admissible Z found")
        branches.append(branch)
    return branches


@dataclass(frozen=True)
class Preimages:
    """Weights ``(a1, a2, a3)`` realising given ``(q, p)`` with ``u3(0) = 0``.

    ``triples`` is the reference orbit under the sign pattern
    ``(u1, u2, u1', u2') -> -(...)``, ``u3' -> -u3'``; ``mirror_triples`` are
    the reflections ``x -> -x`` of those solutions.
    """

    triples: tuple[tuple[float, float, float], ...]
    mirror_triples: tuple[tuple[float, float, float], ...]

    @property
    def count(self) -> int:
        return len(self.triples)


def _z_roots(spectrum, X, Y, p, z_log_range, n_scan, tol):
    psi = np.arctan(p)
    c, s = np.cos(psi), np.sin(psi)

    def h(lz):
        d = slopes_at_zero(spectrum, X, Y, float(np.exp(lz)))
        return float((d[1] * c - d[0] * s) / np.hypot(d[0], d[1]))

    grid = np.linspace(*z_log_range, n_scan)
    vals = np.array([h(v) for v in grid])
    return [float(np.exp(find_root(h, (grid[k], grid[k + 1]), tol))) for k in sign_changes(vals)]


def _orbit(spectrum, X, Y, zs):
    eta = np.asarray(spectrum.eta)
    out = []
    for z in zs:
        for sxy, sz in BRANCH_SIGNS:
            out.append(tuple(float(v) for v in eta * (sxy * X, sxy * Y, sz * z)))
    return tuple(out)


def count_preimages(spectrum: Spectrum, q: float, p: float, tol: float = 1e-12,
                    z_log_range=(-14.0, 14.0), n_scan: int = 57) -> Preimages:
    """Root-find ``p(Z) = p`` on every branch through both curve points."""
    pts = curve_points(spectrum, q)
    found = {}
    for name, (X, Y) in pts.items():
        zs = _z_roots(spectrum, X, Y, p, z_log_range, n_scan, tol)
        found[name] = _orbit(spectrum, X, Y, zs)
    return Preimages(found["inner"], found["outer"])


def initial_data(rep: SolutionRep) -> np.ndarray:
    """``(u1, u2, u3, u1', u2', u3')`` at ``x = 0``."""
    prof = rep.profiles([0.0])[:, :, 0]
    return np.concatenate([prof[0], prof[1]])


def sign_orbit(data: np.ndarray) -> list[np.ndarray]:
    """The four initial-data vectors related by the admissible sign flips."""
    u1, u2, u3, d1, d2, d3 = data
    return [np.array(v) for v in (
        (u1, u2, u3, d1, d2, d3),
        (-u1, -u2, u3, -d1, -d2, d3),
        (u1, u2, u3, d1, d2, -d3),
        (-u1, -u2, u3, -d1, -d2, -d3),
    )]

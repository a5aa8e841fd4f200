"""Closed-form N-soliton profiles ``u_i = g_i / f`` of the cubic NLS system

    u_i'' + 2 (sum_k u_k^2) u_i = -mu_i u_i,     i = 1..N.

With ``eta_i = sqrt(-mu_i)`` and weights ``a_i`` the tau functions are sums
over subsets ``J`` of component indices:

    f   = sum_J  prod_{j in J} a_j^2 / (4 eta_j^2)
               * prod_{j<k in J} ((eta_j - eta_k)/(eta_j + eta_k))^2 * e^{2 eta_J x}
    g_i = a_i e^{eta_i x} sum_{J not containing i}
               prod_{j in J} a_j^2 (eta_i - eta_j) / (4 eta_j^2 (eta_i + eta_j))
               * prod_{j<k in J} ((eta_j - eta_k)/(eta_j + eta_k))^2 * e^{2 eta_J x}

where ``eta_J = sum_{j in J} eta_j``.  Coincident ``eta`` values need no
special handling: the vanishing pair factors drop the corresponding terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, InvalidSpectrum, NTooLarge, SizeMismatch
from .exppoly import ExpPoly, differentiate, shift_exponent

N_MAX = 16


@dataclass(frozen=True)
class Spectrum:
    """Chemical potentials ``mu_1 <= ... <= mu_N < 0`` and rates ``eta_i = sqrt(-mu_i)``."""

    mu: tuple[float, ...]

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) < 1:
            raise InvalidSpectrum("need at least one component")
        if not all(np.isfinite(m) and m < 0 for m in mu):
            raise InvalidSpectrum(f"every mu_i must be finite and negative, got {mu}")
        if any(b < a for a, b in zip(mu, mu[1:])):
            raise InvalidSpectrum(f"mu must be sorted ascending, got {mu}")

    @cached_property
    def eta(self) -> tuple[float, ...]:
        return tuple(float(np.sqrt(-m)) for m in self.mu)

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def eta_min(self) -> float:
        return self.eta[-1]

    @property
    def eta_max(self) -> float:
        return self.eta[0]


@dataclass(frozen=True)
class SolitonParams:
    a: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if not all(np.isfinite(v) for v in a):
            raise ValueError(f"soliton parameters must be finite, got {a}")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.a)


def _subset_sums(weights: Sequence[float], pair: np.ndarray, rates: Sequence[Fraction]):
    """Coefficient and rate of every subset of ``range(len(weights))``.

    ``coef[mask] = prod_{j in mask} weights[j] * prod_{j<k in mask} pair[j, k]``
    and ``rate[mask] = sum_{j in mask} rates[j]``, filled by peeling off the
    lowest set bit so each entry costs O(n) multiplications and no divisions.
    """
    n = len(weights)
    coef = [0.0] * (1 << n)
    rate = [Fraction(0)] * (1 << n)
    coef[0] = 1.0
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        c = coef[rest]
        if c != 0.0:
            c *= weights[low]
            r = rest
            while r and c != 0.0:
                k = (r & -r).bit_length() - 1
                c *= pair[low, k]
                r &= r - 1
        coef[mask] = c
        rate[mask] = rate[rest] + rates[low]
    return coef, rate


def _pair_factors(eta: Sequence[float]) -> np.ndarray:
    e = np.asarray(eta)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = ((e[:, None] - e[None, :]) / (e[:, None] + e[None, :])) ** 2
    return p


def _check(spectrum: Spectrum, params: SolitonParams):
    if spectrum.n != params.n:
        raise SizeMismatch(f"spectrum has {spectrum.n} components, params has {params.n}")
    if spectrum.n > N_MAX:
        raise NTooLarge(f"N={spectrum.n} exceeds the 2^N enumeration cap N_MAX={N_MAX}")


def tau_f(spectrum: Spectrum, a: Sequence[float], da: int | None = None) -> ExpPoly:
    """The denominator ``f``; with ``da=j`` its partial derivative in ``a_j``."""
    eta = spectrum.eta
    n = len(eta)
    w = [a[j] ** 2 / (4.0 * eta[j] ** 2) for j in range(n)]
    if da is not None:
        w[da] = 2.0 * a[da] / (4.0 * eta[da] ** 2)
    coef, rate = _subset_sums(w, _pair_factors(eta), [2 * Fraction(e) for e in eta])
    if da is not None:
        coef = [c if m >> da & 1 else 0.0 for m, c in enumerate(coef)]
    return ExpPoly(zip(coef, rate))


def tau_g(spectrum: Spectrum, a: Sequence[float], i: int, da: int | None = None) -> ExpPoly:
    """The numerator ``g_i``; with ``da=j`` its partial derivative in ``a_j``."""
    eta = spectrum.eta
    n = len(eta)
    others = [j for j in range(n) if j != i]
    w = [a[j] ** 2 * (eta[i] - eta[j]) / (4.0 * eta[j] ** 2 * (eta[i] + eta[j])) for j in others]
    lead = a[i]
    if da is not None and da != i:
        pos = others.index(da)
        w[pos] = 2.0 * a[da] * (eta[i] - eta[da]) / (4.0 * eta[da] ** 2 * (eta[i] + eta[da]))
    elif da == i:
        lead = 1.0
    pair = _pair_factors(eta)[np.ix_(others, others)]
    coef, rate = _subset_sums(w, pair, [2 * Fraction(eta[j]) for j in others])
    if da is not None and da != i:
        pos = others.index(da)
        coef = [c if m >> pos & 1 else 0.0 for m, c in enumerate(coef)]
    base = Fraction(eta[i])
    return ExpPoly((lead * c, base + r) for c, r in zip(coef, rate))


class Ratio:
    """A quotient ``num/den`` of exponential polynomials with exact derivatives.

    ``value``, first and second derivatives are evaluated through the
    quotient rule from exactly differentiated numerator and denominator,
    all rescaled by one common dominant exponent per point.
    """

    def __init__(self, num: ExpPoly, den: ExpPoly):
        self.num = num
        self.den = den
        self._n = (num, differentiate(num), differentiate(num, 2))
        self._d = (den, differentiate(den), differentiate(den, 2))

    def derivatives(self, x, order: int = 2):
        """Stack of ``(r, r', r'')[:order+1]`` evaluated at ``x``."""
        x = np.asarray(x, dtype=float)
        m = shift_exponent(x, self.num, self.den)
        n0, n1, n2 = (p.eval_shifted(x, m) for p in self._n)
        d0, d1, d2 = (p.eval_shifted(x, m) for p in self._d)
        r0 = n0 / d0
        out = [r0]
        if order >= 1:
            r1 = (n1 - r0 * d1) / d0
            out.append(r1)
        if order >= 2:
            out.append((n2 - 2.0 * r1 * d1 - r0 * d2) / d0)
        return np.stack(out)

    def __call__(self, x, order: int = 0):
        v = self.derivatives(x, order)[order]
        return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True, eq=False)
class SolutionRep:
    spectrum: Spectrum
    params: SolitonParams
    g: tuple[ExpPoly, ...]
    f: ExpPoly

    @property
    def n(self) -> int:
        return self.spectrum.n

    @cached_property
    def components(self) -> tuple[Ratio, ...]:
        return tuple(Ratio(gi, self.f) for gi in self.g)

    def profiles(self, x):
        """Array ``(3, N, len(x))`` of ``u``, ``u'``, ``u''`` on the points ``x``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.stack([c.derivatives(x) for c in self.components], axis=1)

    def centres(self) -> np.ndarray:
        """Points where the dominant term of ``f`` changes, i.e. the soliton cores.

        The dominant term at ``x`` maximises ``log c_k + r_k x``; its changes
        are the slopes between consecutive vertices of the upper hull of the
        points ``(r_k, log c_k)``.
        """
        pts = [(float(t.rate), float(np.log(t.coeff))) for t in self.f if t.coeff > 0]
        hull: list[tuple[float, float]] = []
        for r, l in pts:
            while len(hull) >= 2:
                (r0, l0), (r1, l1) = hull[-2], hull[-1]
                if (l1 - l0) * (r - r0) <= (l - l0) * (r1 - r0):
                    hull.pop()
                else:
                    break
            hull.append((r, l))
        return np.array([-(l1 - l0) / (r1 - r0) for (r0, l0), (r1, l1) in zip(hull, hull[1:])])

    def half_width(self, decay: float = 25.0) -> float:
        """``max |centre| + decay/eta_min``: every profile is below ``~e^-decay`` outside."""
        c = self.centres()
        return float(np.abs(c).max() if len(c) else 0.0) + decay / self.spectrum.eta_min

    def grid(self, half_width: float | None = None, n_points: int = 2001) -> np.ndarray:
        """Symmetric grid ``[-L, L]``, by default ``L = half_width()``."""
        L = self.half_width() if half_width is None else half_width
        return np.linspace(-L, L, n_points)


def build_solution(spectrum: Spectrum, params: SolitonParams) -> SolutionRep:
    _check(spectrum, params)
    a = params.a
    g = tuple(tau_g(spectrum, a, i) for i in range(spectrum.n))
    return SolutionRep(spectrum, params, g, tau_f(spectrum, a))


def build(mu: Sequence[float], a: Sequence[float]) -> SolutionRep:
    return build_solution(Spectrum(tuple(mu)), SolitonParams(tuple(a)))


def eval_component(rep: SolutionRep, i: int, x, deriv: int = 0):
    """``u_i`` (or its first/second derivative) at ``x``; ``i`` is 0-based."""
    if not 0 <= i < rep.n:
        raise IndexOutOfRange(f"component {i} out of range for N={rep.n}")
    if deriv not in (0, 1, 2):
        raise ValueError("deriv must be 0, 1 or 2")
    return rep.components[i](x, deriv)


def translate_params(spectrum: Spectrum, params: SolitonParams, c: float) -> SolitonParams:
    """Weights of the same solution shifted left by ``c``: ``u(x; a') = u(x + c; a)``."""
    return SolitonParams(tuple(a * np.exp(e * c) for a, e in zip(params.a, spectrum.eta)))

"""Finite sums of real exponentials, ``sum_k c_k exp(r_k x)``.

Rates are stored as :class:`fractions.Fraction` built from the exact binary
value of the input float, so sums of rates are associative and equal rates
merge exactly.  Coefficients are ordinary floats.

Evaluation always factors out the dominant exponent ``max_k r_k x`` first;
ratios of two polynomials share that shift, which keeps them finite long
after either polynomial on its own has overflowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

import numpy as np

from .errors import DenominatorZero

Rate = Union[Fraction, float, int]


def as_rate(r: Rate) -> Fraction:
    if isinstance(r, Fraction):
        return r
    r = float(r)
    if not np.isfinite(r):
        raise ValueError(f"rate must be finite, got {r}")
    return Fraction(r)


@dataclass(frozen=True)
class ExpTerm:
    coeff: float
    rate: Fraction

    def __post_init__(self):
        if not np.isfinite(self.coeff):
            raise ValueError(f"coefficient must be finite, got {self.coeff}")


class ExpPoly:
    """Immutable exponential polynomial kept in canonical form.

    Canonical form: rates strictly increasing, one term per rate, no exact
    zero coefficients.  The empty polynomial is the zero function.
    """

    def __init__(self, terms: Iterable[tuple[float, Rate]] = ()):
        acc: dict[Fraction, float] = {}
        for c, r in terms:
            r = as_rate(r)
            acc[r] = acc.get(r, 0.0) + float(c)
        self.terms: tuple[ExpTerm, ...] = tuple(
            ExpTerm(c, r) for r, c in sorted(acc.items()) if c != 0.0
        )

    @classmethod
    def constant(cls, c: float) -> ExpPoly:
        return cls([(c, 0)])

    @classmethod
    def exp(cls, rate: Rate, coeff: float = 1.0) -> ExpPoly:
        return cls([(coeff, rate)])

    # -- structure ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "ExpPoly(0)"
        body = " + ".join(f"{t.coeff:.6g}*e^({float(t.rate):.6g}x)" for t in self.terms)
        return f"ExpPoly({body})"

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms], dtype=float)

    @cached_property
    def rates(self) -> np.ndarray:
        return np.array([float(t.rate) for t in self.terms], dtype=float)

    def coefficient(self, rate: Rate) -> float:
        """Coefficient of ``exp(rate x)`` (0 if absent)."""
        r = as_rate(rate)
        for t in self.terms:
            if t.rate == r:
                return t.coeff
        return 0.0

    @property
    def top(self) -> ExpTerm | None:
        return self.terms[-1] if self.terms else None

    @property
    def bottom(self) -> ExpTerm | None:
        return self.terms[0] if self.terms else None

    def canonical(self) -> ExpPoly:
        return ExpPoly((t.coeff, t.rate) for t in self.terms)

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: ExpPoly) -> ExpPoly:
        return add(self, other)

    def __neg__(self) -> ExpPoly:
        return scale(self, -1.0)

    def __sub__(self, other: ExpPoly) -> ExpPoly:
        return add(self, scale(other, -1.0))

    def __mul__(self, other) -> ExpPoly:
        if isinstance(other, ExpPoly):
            return mul(self, other)
        return scale(self, float(other))

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------------

    def eval(self, x):
        return evaluate(self, x)

    __call__ = eval

    def eval_shifted(self, x, shift):
        """``sum_k c_k exp(r_k x - shift)``, vectorised over ``x``/``shift``."""
        x = np.asarray(x, dtype=float)
        if not self.terms:
            return np.zeros_like(x + np.asarray(shift, dtype=float))
        e = np.multiply.outer(self.rates, x) - shift
        return np.tensordot(self.coeffs, np.exp(e), axes=1)

    def max_exponent(self, x):
        """``max_k r_k x`` over this polynomial's rates (``-inf`` when empty)."""
        x = np.asarray(x, dtype=float)
        if not self.terms:
            return np.full_like(x, -np.inf)
        return np.max(np.multiply.outer(self.rates, x), axis=0)


def add(p: ExpPoly, q: ExpPoly) -> ExpPoly:
    return ExpPoly([(t.coeff, t.rate) for t in p.terms] + [(t.coeff, t.rate) for t in q.terms])


def scale(p: ExpPoly, c: float) -> ExpPoly:
    return ExpPoly((c * t.coeff, t.rate) for t in p.terms)


def mul(p: ExpPoly, q: ExpPoly) -> ExpPoly:
    return ExpPoly(
        (s.coeff * t.coeff, s.rate + t.rate) for s in p.terms for t in q.terms
    )


def differentiate(p: ExpPoly, order: int = 1) -> ExpPoly:
    out = p
    for _ in range(order):
        out = ExpPoly((float(t.rate) * t.coeff, t.rate) for t in out.terms)
    return out


def shift_exponent(x, *polys: ExpPoly):
    """Common shift ``max r x`` over the union of rates of ``polys``."""
    x = np.asarray(x, dtype=float)
    m = np.full_like(x, -np.inf)
    for p in polys:
        m = np.maximum(m, p.max_exponent(x))
    return np.where(np.isfinite(m), m, 0.0)


def evaluate(p: ExpPoly, x):
    """Value of ``p`` at ``x`` (scalar or array); may be ``inf`` if it truly overflows."""
    m = shift_exponent(x, p)
    with np.errstate(over="ignore"):
        out = p.eval_shifted(x, m) * np.exp(m)
    return float(out) if np.ndim(out) == 0 else out


def eval_ratio(num: ExpPoly, den: ExpPoly, x):
    """``num(x)/den(x)`` with both rescaled by the same dominant exponent."""
    if not den.terms:
        raise DenominatorZero("denominator is the zero polynomial")
    m = shift_exponent(x, num, den)
    d = den.eval_shifted(x, m)
    if np.any(d == 0.0):
        raise DenominatorZero("denominator vanishes at the evaluation point")
    out = num.eval_shifted(x, m) / d
    return float(out) if np.ndim(out) == 0 else out

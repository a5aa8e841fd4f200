"""Exception types raised across the package."""


class SolitonForgeError(Exception):
    """Base class for every error raised by soliton_forge."""


class DenominatorZero(SolitonForgeError, ZeroDivisionError):
    pass


class SizeMismatch(SolitonForgeError, ValueError):
    pass


class NTooLarge(SolitonForgeError, ValueError):
    pass


class InvalidSpectrum(SolitonForgeError, ValueError):
    pass


class IndexOutOfRange(SolitonForgeError, IndexError):
    pass


class OrderOutOfRange(SolitonForgeError, ValueError):
    pass


class CaseMismatch(SolitonForgeError, ValueError):
    pass


class PoleAtP(SolitonForgeError, ZeroDivisionError):
    pass


class RootBracketFailure(SolitonForgeError, RuntimeError):
    pass


class EmptyBranch(SolitonForgeError, RuntimeError):
    pass


class ZeroRatio(SolitonForgeError, ValueError):
    """q = u2(0)/u1(0) was exactly zero; those configurations are the degenerate ones."""


class ZeroParameter(SolitonForgeError, ValueError):
    pass


class UnequalMu(SolitonForgeError, ValueError):
    pass


class EigenFailure(SolitonForgeError, RuntimeError):
    pass


class ToleranceNotMet(SolitonForgeError, RuntimeError):
    pass


class StepUnderflow(SolitonForgeError, RuntimeError):
    pass


class NoBracket(SolitonForgeError, ValueError):
    pass


class NoConvergence(SolitonForgeError, RuntimeError):
    pass

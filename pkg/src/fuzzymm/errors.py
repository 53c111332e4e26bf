"""Exception hierarchy shared across the package.

CLI exit codes map onto these: ``InputError`` -> 2, ``ConvergenceError`` -> 3.
"""


class FuzzymmError(Exception):
    """Base class for all package-specific errors."""


class InputError(FuzzymmError, ValueError):
    """Malformed or inconsistent caller input (bad shapes, ranges, files)."""


class NumericError(FuzzymmError, ArithmeticError):
    """A linear-algebra step failed (singular factorization, overflow)."""


class ConvergenceError(FuzzymmError, RuntimeError):
    """An iterative procedure did not reach its stopping criterion."""


class BackendError(FuzzymmError, RuntimeError):
    """Encrypted-bit backend misuse (wrong key, mixed backends)."""


class ProtocolError(FuzzymmError, RuntimeError):
    """Secure-session failure (bad frame, timeout, missing score)."""


class FrameError(ProtocolError):
    """A wire frame could not be decoded."""

"""Exception types shared across the package."""


class QLadderError(Exception):
    """Base class for qladder errors."""


class PoleError(QLadderError, ValueError):
    """Evaluation requested too close to a pole of the spectral functions."""


class BracketError(QLadderError, ValueError):
    """Interval endpoints do not bracket a sign change."""


class DegenerateParameterError(QLadderError, ValueError):
    """Parameters hit a degenerate configuration (vanishing denominator)."""


class ConvergenceError(QLadderError, RuntimeError):
    """An iterative routine exhausted its budget without converging."""

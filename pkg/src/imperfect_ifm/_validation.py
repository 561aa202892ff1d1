"""Argument checks, probability clamping and the package exception types."""

import math
import numbers

import numpy as np

#: Round-off allowance when a probability lands just outside [0, 1].
PROBABILITY_SLACK = 1e-12


class DegenerateDecomposition(ArithmeticError):
    """The triangularizing transform is singular for these parameters."""


class NotReachable(RuntimeError):
    """No admissible number of beam splitters reaches the target."""

    def __init__(self, message, best_n=None, best_p=None):
        super().__init__(message)
        self.best_n = best_n
        self.best_p = best_p


class NoSolution(ValueError):
    """The target cannot be met for any leakage value."""


class NonMonotoneBracket(RuntimeError):
    """P(eta) failed the monotonicity pre-check on the bisection bracket."""


class ProbabilityRangeError(ArithmeticError):
    """A computed probability is outside [0, 1] by more than round-off."""


def check_n(n, name="n_splitters", minimum=1):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    return int(n)


def check_eta(eta, *, allow_one=True):
    eta = float(eta)
    if not math.isfinite(eta) or eta < 0.0 or eta > 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    if not allow_one and eta == 1.0:
        raise ValueError("eta = 1 is a pole of the asymptotic formula")
    return eta


def check_theta(theta):
    theta = float(theta)
    if not math.isfinite(theta) or theta <= 0.0 or theta > math.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2], got {theta!r}")
    return theta


def check_probability_target(p, name="target_p"):
    p = float(p)
    if not (0.0 < p < 1.0):
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {p!r}")
    return p


def check_finite_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise FloatingPointError("matrix has non-finite entries")
    return m


def clamp_probability(p):
    """Snap round-off excursions back into [0, 1]; larger excursions raise."""
    p = float(p)
    if 0.0 <= p <= 1.0:
        return p
    if -PROBABILITY_SLACK <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + PROBABILITY_SLACK:
        return 1.0
    raise ProbabilityRangeError(f"probability {p!r} outside [0, 1]")

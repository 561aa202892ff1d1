"""Analytic evaluation of the success probability.

BA is brought to upper-triangular form D = U^T (BA) U, D^(N-1) is written
down in closed form, and P follows from |<1bar| U D^(N-1) U^T B |1bar>|^2.

For real r the matrix U is real orthogonal, so U^T is its adjoint.  When
the discriminant under r goes negative, r is taken as the principal complex
root and U becomes complex orthogonal (U^T U = I with the bilinear product,
not the Hermitian one); the transpose is then still the inverse, which is
all the similarity transform needs.  The adjoint would be wrong there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import (
    DegenerateDecomposition,
    check_eta,
    check_n,
    check_theta,
    clamp_probability,
)
from .core import (
    InterferometerConfig,
    absorber_matrix,
    beam_splitter_matrix,
    exact_success_probability_product,
)

__all__ = [
    "DEGENERACY_TOL",
    "CONDITION_LIMIT",
    "TriangularDecomposition",
    "ChainPower",
    "ClosedFormResult",
    "ExpansionRecord",
    "triangularize",
    "chain_power",
    "closed_form_evaluation",
    "closed_form_success_probability",
    "approx_success_probability",
    "asymptotic_slope",
    "expanded_components",
    "exact_components",
]

DEGENERACY_TOL = 1e-9

# As eta -> 1 the eigenvectors of BA approach isotropic vectors (v^T v = 0),
# so a complex-orthogonal U grows without bound and the transform loses about
# eps * max|U|^4 in P.  Past this entry size the product is used instead.
CONDITION_LIMIT = 8.0

# Below this relative eigenvalue gap the divided difference is summed term
# by term instead of formed as a quotient (avoids cancellation).
_QUOTIENT_GAP = 1e-2


@dataclass(frozen=True)
class TriangularDecomposition:
    r: complex
    s: complex
    t: complex
    x: complex
    y: complex
    z: complex
    u: np.ndarray
    theta: float
    eta: float

    @property
    def d(self) -> np.ndarray:
        return np.array([[self.x, self.y], [0.0, self.z]], dtype=complex)

    def similarity(self) -> np.ndarray:
        """U^T (BA) U computed numerically, for checking against ``d``."""
        ba = beam_splitter_matrix(self.theta) @ absorber_matrix(self.eta)
        return self.u.T @ ba @ self.u


@dataclass(frozen=True)
class ChainPower:
    X: complex
    Y: complex
    Z: complex
    n: int

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.X, self.Y], [0.0, self.Z]], dtype=complex)


class ClosedFormResult(NamedTuple):
    p_success: float
    fallback_used: bool


def triangularize(eta, theta) -> TriangularDecomposition:
    """Schur-type triangularization of BA for leakage ``eta`` and angle ``theta``.

    Raises
    ------
    DegenerateDecomposition
        If |s| or |t| falls below ``DEGENERACY_TOL`` (eta = 1 is the typical
        case: t vanishes identically).
    """
    eta = check_eta(eta)
    theta = check_theta(theta)
    q = math.sqrt(eta)
    one_minus_q = (1.0 - eta) / (1.0 + q)
    c, sn = math.cos(theta), math.sin(theta)
    w = one_minus_q * c

    r = cmath.sqrt(complex(w * w - 4.0 * q * sn * sn))
    w_plus_r = w + r
    # (w - r)(w + r) = 4 q sn^2; the product form keeps w - r accurate when r ~ w
    w_minus_r = 4.0 * q * sn * sn / w_plus_r if w_plus_r != 0 else w - r
    s = 4.0 * eta * sn * sn + w_plus_r**2
    # == 4 sn^2 + (w - r)^2, rearranged so nothing cancels as eta -> 1
    t = 2.0 * w * w_minus_r + 4.0 * one_minus_q * sn * sn
    if abs(s) < DEGENERACY_TOL or abs(t) < DEGENERACY_TOL:
        raise DegenerateDecomposition(
            f"|s|={abs(s):.3g}, |t|={abs(t):.3g} at eta={eta}, theta={theta}"
        )
    root_s, root_t = cmath.sqrt(s), cmath.sqrt(t)
    u = np.array(
        [[w_plus_r / root_s, w_minus_r / root_t],
         [2.0 * q * sn / root_s, -2.0 * sn / root_t]],
        dtype=complex,
    )

    x = 0.5 * ((1.0 + q) * c - r)
    z = 0.5 * ((1.0 + q) * c + r)
    # sqrt(1 - 6q + eta + (1+q)^2 cos 2theta) == sqrt(2) r, so no second branch
    # cut is needed.  The prefactor is (1 - eta) = (1 - q)(1 + q): with (1 - q)
    # alone, U^T (BA) U does not reproduce y (the Frobenius norm forces
    # |y| = (1 + q) sin(theta) in the real-r regime).
    y = -(1.0 - eta) * sn * sn * (2.0 * (1.0 + q) * c + 2.0 * r) / (root_s * root_t)
    return TriangularDecomposition(r, s, t, x, y, z, u, theta, eta)


def _power_divided_difference(x, z, m):
    """(x^m - z^m) / (x - z), including the removable x == z case."""
    if m <= 0:
        return 0j
    gap = abs(x - z)
    if gap < DEGENERACY_TOL:
        return m * x ** (m - 1)
    if gap >= _QUOTIENT_GAP * max(abs(x), abs(z)):
        return (x**m - z**m) / (x - z)
    total = 0j
    for k in range(m):
        total += x**k * z ** (m - 1 - k)
    return total


def chain_power(decomp: TriangularDecomposition, n_minus_1) -> ChainPower:
    """Entries of D^(N-1) for D = [[x, y], [0, z]].

    For N >= 3 the off-diagonal entry is
    Y = y (x^(N-2) + z^(N-2)) + x y z (x^(N-3) - z^(N-3)) / (x - z);
    the zeroth and first powers are written out directly.
    """
    n = check_n(n_minus_1, "n_minus_1", minimum=0)
    x, y, z = decomp.x, decomp.y, decomp.z
    if n == 0:
        return ChainPower(1 + 0j, 0j, 1 + 0j, 0)
    if n == 1:
        return ChainPower(x, y, z, 1)
    big_y = y * (x ** (n - 1) + z ** (n - 1)) + x * y * z * _power_divided_difference(x, z, n - 2)
    return ChainPower(x**n, big_y, z**n, n)


def closed_form_evaluation(config: InterferometerConfig) -> ClosedFormResult:
    """Closed-form P plus a flag telling whether the product fallback ran."""
    v = beam_splitter_matrix(config.theta)[:, 1]
    if config.n_splitters == 1:
        # U D^0 U^T = I whatever U is; no decomposition needed.
        return ClosedFormResult(clamp_probability(abs(v[1]) ** 2), False)
    try:
        decomp = triangularize(config.eta, config.theta)
    except DegenerateDecomposition:
        return ClosedFormResult(exact_success_probability_product(config), True)
    if np.abs(decomp.u).max() > CONDITION_LIMIT:
        return ClosedFormResult(exact_success_probability_product(config), True)

    power = chain_power(decomp, config.n_splitters - 1)
    u = decomp.u
    out = u @ (power.as_matrix() @ (u.T @ v))
    return ClosedFormResult(clamp_probability(abs(out[1]) ** 2), False)


def closed_form_success_probability(config: InterferometerConfig) -> float:
    return closed_form_evaluation(config).p_success


def asymptotic_slope(eta) -> float:
    """Coefficient of 1/N in 1 - P for large N: (pi^2/4)(1+sqrt eta)/(1-sqrt eta)."""
    eta = check_eta(eta, allow_one=False)
    q = math.sqrt(eta)
    return math.pi**2 / 4.0 * (1.0 + q) / (1.0 - q)


def approx_success_probability(n, eta) -> float:
    """First-order large-N approximation 1 - slope/N, floored at zero.

    Only meaningful when N is large enough that sqrt(eta)^N << 1/N; for small
    N the raw value goes negative and is clipped.
    """
    n = check_n(n, "n")
    return max(0.0, 1.0 - asymptotic_slope(eta) / n)


@dataclass(frozen=True)
class ExpansionRecord:
    """Truncated 1/N expansions of every intermediate quantity at theta = pi/2N.

    ``X`` is stored divided by sqrt(eta)^(N-1), i.e. it is the bracketed
    factor of the expansion, so that it can be compared at O(1) scale.
    """

    n: int
    eta: float
    cos: float
    sin: float
    u00: float
    u01: float
    u10: float
    u11: float
    x: float
    y: float
    z: float
    X: float
    Y: float
    Z: float
    p: float

    def as_dict(self):
        return {k: getattr(self, k) for k in _COMPONENTS}


_COMPONENTS = ("cos", "sin", "u00", "u01", "u10", "u11", "x", "y", "z", "X", "Y", "Z", "p")


def expanded_components(n, eta) -> ExpansionRecord:
    """Truncated large-N expansions at theta = pi/2N.

    Remainders are O(1/N^4) for cos, u00, u11, x, z; O(1/N^5) for sin, u01,
    u10, y; O(1/N^3) for Y; O(1/N^2) for X, Z and p.  Terms of order
    sqrt(eta)^N are treated as negligible against 1/N.  y and Y carry the
    (1 + sqrt eta) factor that the triangular form requires.
    """
    n = check_n(n, "n", minimum=4)
    eta = check_eta(eta, allow_one=False)
    q = math.sqrt(eta)
    w = 1.0 - q
    pi2 = math.pi**2
    eps = math.pi / (2 * n)
    a2 = pi2 / (8 * n * n)
    b2 = pi2 / (24 * n * n)
    a1 = pi2 / (8 * n)
    zeta = (1.0 - eta) / w**2

    return ExpansionRecord(
        n=n,
        eta=eta,
        cos=1.0 - a2,
        sin=eps * (1.0 - b2),
        u00=1.0 - a2 * eta / w**2,
        u01=eps * q / w * (1.0 + b2 * (2.0 + 2.0 * q - eta) / w**2),
        u10=eps * q / w * (1.0 + b2 * (2.0 - 3.0 * eta + eta**1.5) / w**3),
        u11=-1.0 + a2 * eta / w**2,
        x=q * (1.0 + a2 * zeta),
        y=-(1.0 + q) * eps * (1.0 - b2),
        z=1.0 - a2 * zeta,
        X=1.0 + a1 * zeta,
        Y=-(1.0 + q) * eps * (1.0 - q ** (n - 1)) / w * (1.0 - a1 * (1.0 + q) / w),
        Z=1.0 - a1 * zeta,
        p=1.0 - asymptotic_slope(eta) / n,
    )


def exact_components(n, eta) -> ExpansionRecord:
    """Exact counterparts of ``expanded_components`` in double precision."""
    n = check_n(n, "n", minimum=4)
    eta = check_eta(eta, allow_one=False)
    theta = math.pi / (2 * n)
    decomp = triangularize(eta, theta)
    power = chain_power(decomp, n - 1)
    u = decomp.u
    config = InterferometerConfig(n, eta, theta)
    return ExpansionRecord(
        n=n,
        eta=eta,
        cos=math.cos(theta),
        sin=math.sin(theta),
        u00=u[0, 0].real,
        u01=u[0, 1].real,
        u10=u[1, 0].real,
        u11=u[1, 1].real,
        x=decomp.x.real,
        y=decomp.y.real,
        z=decomp.z.real,
        # X / sqrt(eta)^(N-1) = (x / sqrt(eta))^(N-1); dividing first avoids underflow
        X=((decomp.x / math.sqrt(eta)) ** (n - 1)).real if eta > 0 else math.nan,
        Y=power.Y.real,
        Z=power.Z.real,
        p=exact_success_probability_product(config),
    )

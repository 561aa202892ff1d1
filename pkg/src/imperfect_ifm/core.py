"""Optical elements and the direct matrix-product evaluator.

Basis convention: index 0 is |0bar> = |1>_a|0>_b (photon on the upper paths,
where the object sits), index 1 is |1bar> = |0>_a|1>_b.  The photon enters
in |1bar> and success means it leaves the last splitter still in |1bar>.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._validation import (
    check_eta,
    check_finite_matrix,
    check_n,
    check_theta,
    clamp_probability,
)

__all__ = [
    "InterferometerConfig",
    "PhotonState",
    "beam_splitter_matrix",
    "absorber_matrix",
    "propagate_no_object",
    "evolve_state",
    "exact_success_probability_product",
    "perfect_absorber_probability",
]

# Above this many splitters the product evaluator switches from stepping the
# state to binary powering of BA.
SEQUENTIAL_LIMIT = 10_000


@dataclass(frozen=True)
class InterferometerConfig:
    """One chained interferometer: N splitters, leakage eta, splitter angle theta.

    ``theta`` defaults to pi / (2N), the tuning that routes the photon to the
    upper output with certainty when no object is present.
    """

    n_splitters: int
    eta: float
    theta: float | None = None

    def __post_init__(self):
        n = check_n(self.n_splitters)
        object.__setattr__(self, "n_splitters", n)
        object.__setattr__(self, "eta", check_eta(self.eta))
        theta = math.pi / (2 * n) if self.theta is None else self.theta
        object.__setattr__(self, "theta", check_theta(theta))

    @property
    def sqrt_eta(self) -> float:
        return math.sqrt(self.eta)


@dataclass(frozen=True)
class PhotonState:
    """Amplitudes on (|0bar>, |1bar>) plus the weight already absorbed."""

    amp_a: complex
    amp_b: complex
    p_absorbed: float = 0.0

    @classmethod
    def input_port(cls) -> "PhotonState":
        """The photon injected into the lower-left port, |1bar>."""
        return cls(0j, 1 + 0j, 0.0)

    @property
    def norm_defect(self) -> float:
        return abs(self.amp_a) ** 2 + abs(self.amp_b) ** 2 + self.p_absorbed - 1.0

    def as_vector(self) -> np.ndarray:
        return np.array([self.amp_a, self.amp_b], dtype=complex)


def beam_splitter_matrix(theta) -> np.ndarray:
    """Splitter with reflectivity cos^2(theta) and transmissivity sin^2(theta)."""
    theta = check_theta(theta)
    c, s = math.cos(theta), math.sin(theta)
    return check_finite_matrix([[c, s], [-s, c]])


def absorber_matrix(eta) -> np.ndarray:
    """Attenuate the path-a amplitude by sqrt(eta); path b is untouched."""
    eta = check_eta(eta)
    return check_finite_matrix([[math.sqrt(eta), 0.0], [0.0, 1.0]])


def propagate_no_object(k, theta) -> PhotonState:
    """State after ``k`` splitters with the object removed.

    The empty chain is a rotation, so the amplitudes are (sin k*theta,
    cos k*theta) in closed form.
    """
    k = check_n(k, "k", minimum=0)
    theta = check_theta(theta)
    return PhotonState(complex(math.sin(k * theta)), complex(math.cos(k * theta)), 0.0)


def evolve_state(state: PhotonState, config: InterferometerConfig) -> PhotonState:
    """Push ``state`` through B, then (A then B) N-1 times.

    Each absorber removes (1 - eta)|amp_a|^2 from the amplitudes and books it
    in ``p_absorbed``; the absorbed branch is orthogonal to both paths and
    never returns, so a scalar is enough to carry it.
    """
    c, s = math.cos(config.theta), math.sin(config.theta)
    q = config.sqrt_eta
    loss = 1.0 - config.eta
    a, b = state.amp_a, state.amp_b
    absorbed = state.p_absorbed

    a, b = c * a + s * b, -s * a + c * b
    for _ in range(config.n_splitters - 1):
        absorbed += loss * (a.real * a.real + a.imag * a.imag)
        a = q * a
        a, b = c * a + s * b, -s * a + c * b

    if not (cmath.isfinite(a) and cmath.isfinite(b)):
        raise FloatingPointError("non-finite amplitude during evolution")
    return PhotonState(a, b, clamp_probability(absorbed))


def _product_amplitude_by_powering(config: InterferometerConfig) -> complex:
    ba = beam_splitter_matrix(config.theta) @ absorber_matrix(config.eta)
    chain = np.linalg.matrix_power(ba, config.n_splitters - 1)
    out = chain @ beam_splitter_matrix(config.theta)[:, 1]
    return complex(out[1])


def exact_success_probability_product(config: InterferometerConfig) -> float:
    """P(N, eta) = |<1bar|(BA)^(N-1) B|1bar>|^2 by direct multiplication.

    Chains longer than ``SEQUENTIAL_LIMIT`` are evaluated by binary powering
    of BA instead of stepping the state one element at a time.
    """
    if config.n_splitters > SEQUENTIAL_LIMIT:
        amp_b = _product_amplitude_by_powering(config)
    else:
        amp_b = evolve_state(PhotonState.input_port(), config).amp_b
    return clamp_probability(abs(amp_b) ** 2)


def perfect_absorber_probability(n, theta=None) -> float:
    """cos^(2N)(theta): the photon must be reflected at every splitter."""
    n = check_n(n, "n")
    theta = math.pi / (2 * n) if theta is None else check_theta(theta)
    return clamp_probability(math.cos(theta) ** (2 * n))

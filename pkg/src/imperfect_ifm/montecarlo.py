"""Quantum-trajectory sampling of single photons through the chain.

At every absorber the photon is absorbed with probability (1 - eta)|amp_a|^2;
otherwise path a is attenuated by sqrt(eta) and the state renormalized.  The
surviving state is measured in the path basis after the last splitter.  The
ensemble average of this unraveling equals the deterministic evolution: the
probability of surviving absorber k times the renormalized state is exactly
the unnormalized state that ``core.evolve_state`` carries.

Random streams: one PCG64 generator per block of ``BLOCK_SIZE`` trials,
seeded from ``SeedSequence(seed).spawn(n_blocks)``.  Counts are therefore a
function of (config, trials, seed) only, whatever the number of workers.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ._validation import check_n
from .core import InterferometerConfig

__all__ = [
    "BLOCK_SIZE",
    "Outcome",
    "TrajectoryOutcome",
    "EstimateReport",
    "make_rng",
    "simulate_trajectory",
    "estimate_probabilities",
]

BLOCK_SIZE = 1 << 16


class Outcome(str, enum.Enum):
    DETECTED_A = "DetectedA"
    DETECTED_B = "DetectedB"
    ABSORBED = "Absorbed"


@dataclass(frozen=True)
class TrajectoryOutcome:
    tag: Outcome
    absorbed_at: int | None = None

    def __post_init__(self):
        if (self.tag is Outcome.ABSORBED) != (self.absorbed_at is not None):
            raise ValueError("absorbed_at must be set exactly when the photon is absorbed")


@dataclass(frozen=True)
class EstimateReport:
    p_detect_b: float
    se_detect_b: float
    p_detect_a: float
    se_detect_a: float
    p_absorbed: float
    se_absorbed: float
    count_b: int
    count_a: int
    count_absorbed: int
    trials: int
    seed: int

    @classmethod
    def from_counts(cls, count_b, count_a, count_absorbed, seed):
        trials = count_b + count_a + count_absorbed

        def est(k):
            p = k / trials
            return p, math.sqrt(p * (1.0 - p) / trials)

        (pb, sb), (pa, sa), (px, sx) = est(count_b), est(count_a), est(count_absorbed)
        return cls(pb, sb, pa, sa, px, sx, count_b, count_a, count_absorbed, trials, seed)

    def to_dict(self):
        return asdict(self)


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _no_jump_path(config: InterferometerConfig):
    """Per-absorber absorption probabilities along the surviving branch, and
    the final probability of detection on path a given survival."""
    c, s = math.cos(config.theta), math.sin(config.theta)
    q, loss = math.sqrt(config.eta), 1.0 - config.eta
    a, b = s, c  # B|1bar>
    jump = np.empty(config.n_splitters - 1)
    for k in range(config.n_splitters - 1):
        jump[k] = loss * a * a
        a *= q
        norm = math.hypot(a, b)
        a, b = a / norm, b / norm
        a, b = c * a + s * b, -s * a + c * b
    return jump, a * a / (a * a + b * b)


def simulate_trajectory(config: InterferometerConfig, rng: np.random.Generator) -> TrajectoryOutcome:
    """Follow one photon; consumes one uniform per absorber reached plus one
    for the final measurement."""
    c, s = math.cos(config.theta), math.sin(config.theta)
    q, loss = math.sqrt(config.eta), 1.0 - config.eta
    a, b = complex(s), complex(c)
    for k in range(1, config.n_splitters):
        if rng.random() < loss * abs(a) ** 2:
            return TrajectoryOutcome(Outcome.ABSORBED, k)
        a *= q
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        a, b = a / norm, b / norm
        a, b = c * a + s * b, -s * a + c * b
    p_a = abs(a) ** 2 / (abs(a) ** 2 + abs(b) ** 2)
    if rng.random() < p_a:
        return TrajectoryOutcome(Outcome.DETECTED_A)
    return TrajectoryOutcome(Outcome.DETECTED_B)


def _simulate_block(jump, p_a, size, seed_seq):
    """Vectorized ``simulate_trajectory`` over ``size`` photons -> (b, a, absorbed)."""
    rng = make_rng(seed_seq)
    alive = np.ones(size, dtype=bool)
    for p_jump in jump:
        alive &= rng.random(size) >= p_jump
    hit_a = rng.random(size) < p_a
    n_a = int(np.count_nonzero(alive & hit_a))
    n_alive = int(np.count_nonzero(alive))
    return n_alive - n_a, n_a, size - n_alive


def estimate_probabilities(config: InterferometerConfig, trials, seed, n_jobs=1) -> EstimateReport:
    """Frequencies of the three outcomes over ``trials`` independent photons.

    Bit-exact for fixed (config, trials, seed); ``n_jobs`` only changes how
    blocks are scheduled.
    """
    trials = check_n(trials, "trials")
    seed = check_n(seed, "seed", minimum=0)
    n_jobs = check_n(n_jobs, "n_jobs")
    jump, p_a = _no_jump_path(config)

    n_blocks = -(-trials // BLOCK_SIZE)
    sizes = [BLOCK_SIZE] * (n_blocks - 1) + [trials - BLOCK_SIZE * (n_blocks - 1)]
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    jobs = [(jump, p_a, size, child) for size, child in zip(sizes, children)]

    if n_jobs == 1 or n_blocks == 1:
        parts = [_simulate_block(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda job: _simulate_block(*job), jobs))

    count_b, count_a, count_absorbed = (sum(col) for col in zip(*parts))
    return EstimateReport.from_counts(count_b, count_a, count_absorbed, seed)

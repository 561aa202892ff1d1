"""Design inversions: splitters needed for a target P, and tolerable leakage.

The splitter angle is always tied to pi/2N here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import (
    NonMonotoneBracket,
    NoSolution,
    NotReachable,
    check_eta,
    check_n,
    check_probability_target,
)
from .closedform import asymptotic_slope
from .core import InterferometerConfig, exact_success_probability_product

__all__ = [
    "DesignQuery",
    "success_probability",
    "seed_guess",
    "min_beam_splitters",
    "max_tolerable_eta",
]

DEFAULT_N_MAX = 10**6


@dataclass(frozen=True)
class DesignQuery:
    eta: float
    target_p: float
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        object.__setattr__(self, "eta", check_eta(self.eta, allow_one=False))
        object.__setattr__(self, "target_p", check_probability_target(self.target_p))
        object.__setattr__(self, "n_max", check_n(self.n_max, "n_max"))


def success_probability(n, eta) -> float:
    """P(N, eta) at theta = pi/2N from the product evaluator."""
    return exact_success_probability_product(InterferometerConfig(n, eta))


def seed_guess(eta, target_p) -> int:
    """Starting N from inverting 1 - slope/N = target."""
    return max(1, math.ceil(asymptotic_slope(eta) / (1.0 - target_p)))


def min_beam_splitters(query: DesignQuery) -> int:
    """Least N <= n_max with P(N, eta) >= target.

    Starts at the asymptotic seed guess, gallops (doubling steps) down while
    the target is met or up while it is not, bisects the bracket, and
    finishes with a unit-step scan down so the answer carries the certificate
    P(N) >= target > P(N - 1).
    """
    eta, target, n_max = query.eta, query.target_p, query.n_max
    cache = {}

    def p(n):
        if n not in cache:
            cache[n] = success_probability(n, eta)
        return cache[n]

    n0 = min(seed_guess(eta, target), n_max)
    if p(n0) >= target:
        hi, lo, step = n0, None, 1
        while hi > 1:
            cand = max(1, hi - step)
            if p(cand) >= target:
                hi = cand
                step *= 2
            else:
                lo = cand
                break
    else:
        lo, hi, step = n0, None, 1
        while hi is None:
            if lo >= n_max:
                best_n = max(cache, key=cache.get)
                raise NotReachable(
                    f"no N <= {n_max} reaches P >= {target} at eta={eta}; "
                    f"best P={cache[best_n]:.12g} at N={best_n}",
                    best_n=best_n,
                    best_p=cache[best_n],
                )
            cand = min(n_max, lo + step)
            if p(cand) >= target:
                hi = cand
            else:
                lo = cand
                step *= 2

    if lo is not None:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if p(mid) >= target:
                hi = mid
            else:
                lo = mid
    while hi > 1 and p(hi - 1) >= target:
        hi -= 1
    return hi


def max_tolerable_eta(n, target_p, grid_points=101) -> float:
    """Largest eta with P(n, eta) >= target_p, by bisection.

    P is checked to be strictly decreasing on a grid covering the bracket
    before bisecting; bisection runs until the bracket cannot shrink in
    double precision, so the returned eta is the last float that meets the
    target.

    Raises
    ------
    NoSolution
        If even a perfect absorber (eta = 0) misses the target.
    NonMonotoneBracket
        If the monotonicity pre-check fails.
    """
    n = check_n(n, "n")
    target = check_probability_target(target_p)

    def p(eta):
        return success_probability(n, eta)

    p0 = p(0.0)
    if p0 < target:
        raise NoSolution(f"P({n}, 0) = {p0:.12g} < target {target}")
    if p0 == target:
        return 0.0

    etas = np.linspace(0.0, 1.0, grid_points)
    values = np.array([p(e) for e in etas])
    below = np.flatnonzero(values < target)
    if below.size == 0:
        return 1.0
    i = int(below[0])
    if np.any(np.diff(values[: i + 1]) >= 0):
        raise NonMonotoneBracket(f"P({n}, eta) not decreasing on [0, {etas[i]}]")
    lo, hi = float(etas[i - 1]), float(etas[i])
    fine = np.array([p(e) for e in np.linspace(lo, hi, 33)])
    if np.any(np.diff(fine) >= 0):
        raise NonMonotoneBracket(f"P({n}, eta) not decreasing on [{lo}, {hi}]")

    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo
        if p(mid) >= target:
            lo = mid
        else:
            hi = mid

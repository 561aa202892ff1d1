"""Interaction-free measurement with an imperfect absorber.

Success probability of the N-splitter interferometer when the object absorbs
the photon only with probability 1 - eta, from a direct matrix product, a
closed-form triangularization, a first-order large-N formula and a
trajectory Monte Carlo, plus design solvers.
"""

from ._validation import (
    DegenerateDecomposition,
    NonMonotoneBracket,
    NoSolution,
    NotReachable,
    ProbabilityRangeError,
)
from .closedform import (
    ChainPower,
    TriangularDecomposition,
    approx_success_probability,
    chain_power,
    closed_form_evaluation,
    closed_form_success_probability,
    expanded_components,
    triangularize,
)
from .core import (
    InterferometerConfig,
    PhotonState,
    absorber_matrix,
    beam_splitter_matrix,
    evolve_state,
    exact_success_probability_product,
    perfect_absorber_probability,
    propagate_no_object,
)
from .estimator import SuccessProbabilityModel
from .montecarlo import EstimateReport, Outcome, TrajectoryOutcome, estimate_probabilities, simulate_trajectory
from .solver import DesignQuery, max_tolerable_eta, min_beam_splitters

__version__ = "0.1.0"

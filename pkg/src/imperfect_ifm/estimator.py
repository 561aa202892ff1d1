"""scikit-learn compatible front end.

Rows of ``X`` are (n_splitters, eta) pairs, optionally with a third column
giving theta.  Nothing is learned: ``fit`` only validates and records the
input width, so the model drops into pipelines, grid searches and
``cross_val_score`` next to fitted surrogates of P.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .closedform import approx_success_probability, closed_form_success_probability
from .core import InterferometerConfig, PhotonState, evolve_state, exact_success_probability_product

METHODS = ("product", "closed", "approx")


def _rows_to_configs(X, theta):
    X = check_array(X, dtype=np.float64, ensure_min_features=2)
    if X.shape[1] not in (2, 3):
        raise ValueError(f"X must have 2 or 3 columns (n, eta[, theta]); got {X.shape[1]}")
    n_col = X[:, 0]
    if np.any(n_col != np.round(n_col)) or np.any(n_col < 1):
        raise ValueError("first column must hold positive integer splitter counts")
    configs = []
    for row in X:
        th = row[2] if X.shape[1] == 3 else theta
        configs.append(InterferometerConfig(int(row[0]), float(row[1]), None if th is None else float(th)))
    return configs


class SuccessProbabilityModel(RegressorMixin, BaseEstimator):
    """Predicts P(N, eta) with one of the three evaluators.

    Parameters
    ----------
    method : {"product", "closed", "approx"}, default="product"
        Direct matrix product, closed-form triangularization, or the
        first-order large-N formula.
    theta : float or None, default=None
        Splitter angle used for two-column input. ``None`` means pi/2N per row.
    """

    def __init__(self, method="product", theta=None):
        self.method = method
        self.theta = theta

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        X = check_array(X, dtype=np.float64, ensure_min_features=2)
        _rows_to_configs(X, self.theta)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "n_features_in_")
        configs = _rows_to_configs(X, self.theta)
        if self.method == "product":
            values = [exact_success_probability_product(c) for c in configs]
        elif self.method == "closed":
            values = [closed_form_success_probability(c) for c in configs]
        else:
            values = [approx_success_probability(c.n_splitters, c.eta) for c in configs]
        return np.asarray(values)

    def predict_outcomes(self, X):
        """Columns: P(detect b), P(detect a), P(absorbed), from the state evolution."""
        check_is_fitted(self, "n_features_in_")
        out = []
        for c in _rows_to_configs(X, self.theta):
            st = evolve_state(PhotonState.input_port(), c)
            out.append((abs(st.amp_b) ** 2, abs(st.amp_a) ** 2, st.p_absorbed))
        return np.asarray(out)

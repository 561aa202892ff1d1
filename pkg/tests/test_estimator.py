import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import GridSearchCV
from sklearn.pipeline import make_pipeline

from imperfect_ifm import SuccessProbabilityModel

X = np.array([[2, 0.25, math.pi / 4], [25, 0.0, math.pi / 50], [100, 0.1, math.pi / 200]])


def test_params_roundtrip():
    model = SuccessProbabilityModel(method="closed", theta=0.1)
    assert model.get_params() == {"method": "closed", "theta": 0.1}
    assert clone(model).get_params() == model.get_params()
    model.set_params(method="approx")
    assert model.method == "approx"


def test_unfitted():
    with pytest.raises(NotFittedError):
        SuccessProbabilityModel().predict(X)


def test_predict_methods_agree():
    prod = SuccessProbabilityModel().fit(X).predict(X)
    closed = SuccessProbabilityModel(method="closed").fit(X).predict(X)
    np.testing.assert_allclose(prod, closed, rtol=0, atol=1e-10)
    np.testing.assert_allclose(prod[:2], [0.0625, 0.9059591594251266], atol=1e-13)


def test_two_column_input_uses_default_theta():
    X2 = np.array([[24, 0.0], [100, 0.1]])
    p = SuccessProbabilityModel().fit(X2).predict(X2)
    assert p[0] == pytest.approx(0.9022335544642629, abs=1e-13)
    approx = SuccessProbabilityModel(method="approx").fit(X2).predict(X2)
    assert approx[1] == pytest.approx(0.9525037479343023)


def test_outcome_columns_sum_to_one():
    out = SuccessProbabilityModel().fit(X).predict_outcomes(X)
    np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-12)


def test_bad_input():
    model = SuccessProbabilityModel().fit(X)
    with pytest.raises(ValueError):
        model.predict([[2.5, 0.1]])
    with pytest.raises(ValueError):
        model.predict([[3, 1.5]])
    with pytest.raises(ValueError):
        SuccessProbabilityModel(method="nope").fit(X)


def test_score_and_grid_search():
    X2 = np.array([[n, e] for n in range(20, 201, 20) for e in (0.0, 0.1)])
    y = SuccessProbabilityModel().fit(X2).predict(X2)
    assert SuccessProbabilityModel(method="closed").fit(X2).score(X2, y) == pytest.approx(1.0)
    search = GridSearchCV(SuccessProbabilityModel(), {"method": ["approx", "closed"]}, cv=2).fit(X2, y)
    assert search.best_params_ == {"method": "closed"}


def test_in_pipeline():
    pipe = make_pipeline(SuccessProbabilityModel(method="closed"))
    assert pipe.fit(X).predict(X).shape == (3,)

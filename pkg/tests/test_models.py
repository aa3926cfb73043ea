import numpy as np
import pytest

import oracles
from recourse.errors import FittingError
from recourse.models import (
    CartModel,
    f1_score_weighted,
    r2_score,
    train_cart,
    train_ridge,
)


class TestRidge:
    def test_recovers_slope_with_tiny_lambda(self):
        xs = np.arange(1.0, 9.0)
        ys = 3.0 * xs
        # oracle: closed-form simple regression slope/intercept
        slope, intercept = oracles.least_squares_1d(xs.tolist(), ys.tolist())
        assert slope == pytest.approx(3.0)
        model = train_ridge(xs.reshape(-1, 1), ys, lam=1e-9)
        assert model.weights[0] == pytest.approx(slope, abs=1e-6)
        assert model.intercept == pytest.approx(intercept, abs=1e-6)

    def test_huge_lambda_predicts_mean(self):
        xs = np.arange(10.0).reshape(-1, 1)
        ys = 3.0 * xs[:, 0] + 1.0
        model = train_ridge(xs, ys, lam=1e12)
        assert np.allclose(model.weights, 0.0, atol=1e-6)
        assert model.predict([[5.0]])[0] == pytest.approx(ys.mean(), abs=1e-3)

    def test_duplicate_rows_with_default_lambda(self):
        xs = np.array([[1.0], [1.0], [1.0], [1.0]])
        ys = np.array([2.0, 2.0, 2.0, 2.0])
        model = train_ridge(xs, ys, lam=1.0)
        assert np.isfinite(model.weights).all()

    def test_needs_two_rows(self):
        with pytest.raises(FittingError):
            train_ridge(np.array([[1.0]]), np.array([2.0]))


class TestCart:
    def test_single_class_is_leaf(self):
        model = train_cart([[0.0], [1.0], [2.0]], [1, 1, 1])
        assert model.root.is_leaf
        assert model.predict_one([5.0]) == 1

    def test_xor_depth_two(self):
        X = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
        y = [0, 1, 1, 0]
        model = train_cart(X, y, max_depth=2)
        assert model.predict(X).tolist() == y
        assert model.depth() <= 2

    def test_threshold_matches_brute_force(self):
        xs = [1.0, 2.0, 3.0, 10.0, 11.0, 12.0]
        ys = [0, 0, 0, 1, 1, 1]
        t, _ = oracles.best_gini_split_1d(xs, ys)
        model = train_cart([[x] for x in xs], ys, max_depth=1)
        assert not model.root.is_leaf
        assert model.root.threshold == pytest.approx(t)
        # the chosen boundary separates the classes
        assert 3.0 < model.root.threshold < 10.0

    def test_depth_limit_respected(self, rng):
        X = rng.normal(size=(200, 3))
        y = (X[:, 0] + X[:, 1] * X[:, 2] > 0).astype(int)
        model = train_cart(X, y, max_depth=3)
        assert model.depth() <= 3

    def test_deterministic(self, rng):
        X = rng.normal(size=(100, 2))
        y = (X[:, 0] > 0).astype(int)
        a = train_cart(X, y, max_depth=4)
        b = train_cart(X, y, max_depth=4)
        assert np.array_equal(a.predict(X), b.predict(X))


class TestScores:
    def test_r2_matches_oracle(self, rng):
        y_true = rng.normal(size=30).tolist()
        y_pred = [v + rng.normal(0, 0.3) for v in y_true]
        assert r2_score(y_true, y_pred) == pytest.approx(oracles.r2(y_true, y_pred), abs=1e-9)

    def test_r2_perfect(self):
        assert r2_score([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0

    def test_f1_perfect_and_worst(self):
        assert f1_score_weighted([0, 1, 0, 1], [0, 1, 0, 1]) == pytest.approx(1.0)
        assert f1_score_weighted([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(0.0)

    def test_f1_weighted_by_support(self):
        # class 0 (3 samples) perfectly predicted, class 1 (1 sample) missed
        y_true = [0, 0, 0, 1]
        y_pred = [0, 0, 0, 0]
        # F1(0) = 2*3/(2*3+1+0) = 6/7, F1(1) = 0 -> weighted (3*6/7 + 1*0)/4
        assert f1_score_weighted(y_true, y_pred) == pytest.approx(3 * (6 / 7) / 4)

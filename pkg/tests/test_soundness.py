import numpy as np
import pytest

import oracles
from recourse.data import Dataset, FeatureDecl, response_ranges
from recourse.errors import FittingError, UnavailableGroupError
from recourse.predictors import LeastSquaresRegressor, NearestCentroidClassifier
from recourse.soundness import (
    ConnectednessModel,
    ProximityModel,
    epsilon_for_group,
    fit_soundness,
    proximity_ratio,
)


class TestProximityRatio:
    def test_between_two_points(self):
        model = ProximityModel(rows=np.array([[0.0, 0.0], [1.0, 0.0]]))
        assert proximity_ratio([0.5, 0.0], model) == pytest.approx(0.5)

    def test_far_outlier(self):
        model = ProximityModel(rows=np.array([[0.0, 0.0], [1.0, 0.0]]))
        assert proximity_ratio([5.0, 0.0], model) == pytest.approx(4.0)

    def test_exact_reference_point(self):
        model = ProximityModel(rows=np.array([[0.0, 0.0], [1.0, 0.0]]))
        assert proximity_ratio([1.0, 0.0], model) == 0.0

    def test_matches_oracle(self, rng):
        rows = rng.normal(size=(40, 3))
        model = ProximityModel(rows=rows)
        for _ in range(25):
            q = rng.normal(size=3)
            expected = oracles.proximity_ratio(q.tolist(), rows.tolist())
            assert proximity_ratio(q, model) == pytest.approx(expected, abs=1e-9)

    def test_scale_covariance(self, rng):
        rows = rng.normal(size=(20, 2))
        q = rng.normal(size=2)
        base = proximity_ratio(q, ProximityModel(rows=rows))
        scaled = proximity_ratio(3.0 * q, ProximityModel(rows=3.0 * rows))
        assert scaled == pytest.approx(base, abs=1e-9)

    def test_inlier_threshold_inclusive(self):
        model = ProximityModel(rows=np.array([[0.0], [1.0]]), theta=1.0)
        # query at distance exactly equal to the reference NN distance
        assert model.score_batch(np.array([[2.0]]))[0] == 1.0
        assert model.score_batch(np.array([[2.1]]))[0] == 0.0


class TestEpsilon:
    def test_even_chain(self):
        rows = np.arange(10.0).reshape(-1, 1)
        nn = oracles.nn_distances(rows.tolist())
        assert all(d == 1.0 for d in nn)
        assert epsilon_for_group(rows) == pytest.approx(1.0)

    def test_two_tight_blobs(self, rng):
        a = rng.normal(0.0, 0.05, size=(30, 2))
        b = rng.normal(10.0, 0.05, size=(30, 2))
        eps = epsilon_for_group(np.vstack([a, b]))
        assert eps < 1.0  # far below the 10-unit gap

    def test_identical_rows(self):
        rows = np.array([[1.0, 2.0], [1.0, 2.0]])
        assert epsilon_for_group(rows) == 0.0
        model = ConnectednessModel(rows=rows, eps=0.0)
        # the duplicated pair forms one cluster; only exact matches connect
        assert model.score_batch(np.array([[1.0, 2.0]]))[0] == 1.0
        assert model.score_batch(np.array([[1.0, 2.1]]))[0] == 0.0

    def test_too_few_rows(self):
        with pytest.raises(UnavailableGroupError):
            epsilon_for_group(np.array([[1.0]]))

    def test_matches_oracle_percentile(self, rng):
        rows = rng.normal(size=(50, 2))
        nn = oracles.nn_distances(rows.tolist())
        expected = oracles.quantile_linear(nn, 0.9)
        assert epsilon_for_group(rows, 90.0) == pytest.approx(expected, abs=1e-9)


class TestConnectedness:
    def test_chain_query(self):
        model = ConnectednessModel(rows=np.array([[0.0], [1.0], [2.0]]), eps=1.5)
        assert model.score_batch(np.array([[2.5]]))[0] == 1.0

    def test_far_query(self):
        model = ConnectednessModel(rows=np.array([[0.0], [1.0], [2.0]]), eps=1.5)
        assert model.score_batch(np.array([[10.0]]))[0] == 0.0

    def test_exact_member_query(self):
        model = ConnectednessModel(rows=np.array([[0.0], [1.0], [2.0]]), eps=1.5)
        assert model.score_batch(np.array([[1.0]]))[0] == 1.0

    def test_noise_points_do_not_connect(self):
        # lone point far from the pair is a singleton, not a valid cluster
        rows = np.array([[0.0], [1.0], [50.0]])
        model = ConnectednessModel(rows=rows, eps=1.5)
        assert model.score_batch(np.array([[50.5]]))[0] == 0.0
        assert model.score_batch(np.array([[0.5]]))[0] == 1.0

    def test_clusters_match_bfs_oracle(self, rng):
        rows = rng.normal(size=(60, 2))
        eps = epsilon_for_group(rows)
        model = ConnectednessModel(rows=rows, eps=eps)
        assert model.clusters == oracles.epsilon_graph_clusters(rows.tolist(), eps)

    def test_query_equals_bfs_reachability(self, rng):
        # brute-force equivalence on random groups and queries
        for trial in range(5):
            rows = rng.normal(size=(40, 2)) * (1 + trial)
            eps = epsilon_for_group(rows)
            model = ConnectednessModel(rows=rows, eps=eps)
            for _ in range(20):
                q = rng.normal(size=2) * 2
                got = model.score_batch(q.reshape(1, -1))[0] == 1.0
                expected = oracles.connected_by_bfs(q.tolist(), rows.tolist(), eps)
                assert got == expected


def _blob_dataset(seed=5, half=60):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, size=(half, 2))
    b = rng.uniform(7.0, 8.0, size=(half, 2))
    rows = [list(map(float, r)) for r in np.vstack([a, b])]
    labels = ["a"] * half + ["b"] * half
    decls = [FeatureDecl(name="x", kind="numerical"), FeatureDecl(name="y", kind="numerical")]
    return Dataset.fit(rows, labels, decls, "classification")


class TestFitSoundness:
    def test_two_blob_groups(self):
        # max-NN-distance epsilon keeps each separable blob in one component;
        # the default 90th percentile isolates ~10% of points by construction
        ds = _blob_dataset()
        predictor = NearestCentroidClassifier.fit(ds.X, ds.y, 2)
        models = fit_soundness(ds, predictor, eps_percentile=100.0)
        assert set(models.proximity) == {0, 1}
        assert set(models.connectedness) == {0, 1}
        # cluster structure verified against the brute-force BFS oracle
        for g in (0, 1):
            conn = models.connectedness[g]
            assert conn.clusters == oracles.epsilon_graph_clusters(conn.rows.tolist(), conn.eps)
            assert len(conn.clusters) == 1

    def test_small_group_unavailable(self):
        # class "b" has a single row: no model, scores 0
        rows = [[0.0], [0.1], [0.2], [9.0]]
        labels = ["a", "a", "a", "b"]
        ds = Dataset.fit(rows, labels, [FeatureDecl(name="x", kind="numerical")], "classification")
        predictor = NearestCentroidClassifier.fit(ds.X, ds.y, 2)
        models = fit_soundness(ds, predictor)
        assert not models.available(1)
        assert models.o_proximity_batch(ds.X[:1], 1)[0] == 0.0
        assert models.o_connectedness_batch(ds.X[:1], 1)[0] == 0.0
        with pytest.raises(UnavailableGroupError):
            models.proximity_ratio_for(ds.X[0], 1)

    def test_regression_groups(self, rng):
        X = rng.uniform(-2, 2, size=(200, 1))
        y = 3.0 * X[:, 0]
        rows = [[float(v)] for v in X[:, 0]]
        ds = Dataset.fit(rows, y.tolist(), [FeatureDecl(name="x", kind="numerical")], "regression")
        predictor = LeastSquaresRegressor.fit(ds.X, ds.y)
        ranges = response_ranges(ds.y, 4)
        models = fit_soundness(ds, predictor, ranges)
        assert set(models.proximity) <= {0, 1, 2, 3}
        assert len(models.proximity) >= 2

    def test_no_correct_rows_anywhere(self):
        rows = [[0.0], [0.1], [6.0], [6.1]]
        labels = ["a", "a", "b", "b"]
        ds = Dataset.fit(rows, labels, [FeatureDecl(name="x", kind="numerical")], "classification")
        # deliberately backwards centroids: nothing is predicted correctly
        predictor = NearestCentroidClassifier(
            centroids=np.array([[ds.encode_row([6.05])[0]], [ds.encode_row([0.05])[0]]])
        )
        with pytest.raises(FittingError):
            fit_soundness(ds, predictor)

    def test_proximity_and_connectedness_independent(self):
        # an isolated pair of mutually-close points sits near the query
        # (proximity 1) but the query cannot reach the main cluster: the
        # pair is its own cluster, and a distant singleton is pure noise.
        rows = np.array([[0.0], [0.5], [1.0], [20.0]])
        prox = ProximityModel(rows=rows)
        conn = ConnectednessModel(rows=rows, eps=2.0)
        # query near the noise point: inlier by ratio (dist 1 vs nn...)
        q = np.array([[20.5]])
        ratio = proximity_ratio(q[0], prox)
        assert ratio <= 1.0  # nearest ref is the singleton at 20, nn dist 19
        assert prox.score_batch(q)[0] == 1.0
        assert conn.score_batch(q)[0] == 0.0

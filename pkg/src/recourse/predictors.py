"""Black-box prediction interface plus native reference models.

Everything downstream only sees `Predictor`: batch probability vectors for
classification or batch responses for regression, over encoded rows. The
reference models keep the test fixtures framework-free; real models plug in
through `RemotePredictor` and its HTTP wire protocol (see README).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import requests

from .data import CLASSIFICATION, REGRESSION, Dataset
from .errors import FittingError, RemotePredictorError, RemoteTimeoutError
from .models import CartModel, train_cart


class Predictor:
    """Opaque prediction function f over encoded rows.

    Subclasses implement `predict_proba_batch` (classification) or
    `predict_batch` (regression); both must be pure functions of the input.
    """

    task: str = CLASSIFICATION
    class_count: int = 0

    def predict_proba_batch(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_proba(self, x) -> np.ndarray:
        return self.predict_proba_batch(np.atleast_2d(np.asarray(x, dtype=float)))[0]

    def predict(self, x) -> float:
        return float(self.predict_batch(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def predict_class_batch(self, X: np.ndarray) -> np.ndarray:
        return self.predict_proba_batch(X).argmax(axis=1)

    def spec(self) -> dict:
        """JSON-serializable description used by the explainer artifact."""
        raise NotImplementedError(f"{type(self).__name__} cannot be serialized")


@dataclass
class NearestCentroidClassifier(Predictor):
    """Per-class centroids; probabilities are a softmax of negative distances."""

    centroids: np.ndarray
    task: str = CLASSIFICATION

    def __post_init__(self):
        self.class_count = self.centroids.shape[0]

    def predict_proba_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        d = np.sqrt(((X[:, None, :] - self.centroids[None, :, :]) ** 2).sum(axis=2))
        z = -d
        z -= z.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def spec(self) -> dict:
        return {"kind": "nearest-centroid", "centroids": self.centroids.tolist()}

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, n_classes: int) -> "NearestCentroidClassifier":
        if X.shape[0] == 0:
            raise FittingError("cannot train on an empty dataset")
        centroids = np.stack(
            [
                X[y == c].mean(axis=0) if np.any(y == c) else np.zeros(X.shape[1])
                for c in range(n_classes)
            ]
        )
        return cls(centroids=centroids)


@dataclass
class BaggedStumpEnsemble(Predictor):
    """Bootstrap-aggregated depth-limited CART trees; probabilities are vote shares."""

    trees: list[CartModel]
    class_count: int = 0
    task: str = CLASSIFICATION

    def predict_proba_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        votes = np.zeros((X.shape[0], self.class_count))
        for tree in self.trees:
            pred = tree.predict(X)
            votes[np.arange(X.shape[0]), pred] += 1.0
        return votes / len(self.trees)

    def spec(self) -> dict:
        return {
            "kind": "bagged-stumps",
            "class_count": self.class_count,
            "trees": [_tree_to_dict(t.root) for t in self.trees],
        }

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        n_trees: int = 50,
        max_depth: int = 3,
        seed: int = 0,
    ) -> "BaggedStumpEnsemble":
        if X.shape[0] == 0:
            raise FittingError("cannot train on an empty dataset")
        rng = np.random.default_rng(seed)
        trees = []
        for _ in range(n_trees):
            idx = rng.integers(0, X.shape[0], size=X.shape[0])
            trees.append(train_cart(X[idx], y[idx], max_depth=max_depth))
        for t in trees:
            t.n_classes = n_classes
        return cls(trees=trees, class_count=n_classes)


@dataclass
class LeastSquaresRegressor(Predictor):
    """Ordinary least squares with intercept, solved by lstsq."""

    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    intercept: float = 0.0
    task: str = REGRESSION

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return X @ self.weights + self.intercept

    def spec(self) -> dict:
        return {
            "kind": "least-squares",
            "weights": self.weights.tolist(),
            "intercept": self.intercept,
        }

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray) -> "LeastSquaresRegressor":
        if X.shape[0] == 0:
            raise FittingError("cannot train on an empty dataset")
        A = np.c_[X, np.ones(X.shape[0])]
        coef, *_ = np.linalg.lstsq(A, np.asarray(y, dtype=float), rcond=None)
        return cls(weights=coef[:-1], intercept=float(coef[-1]))


REFERENCE_KINDS = ("nearest-centroid", "bagged-stumps", "least-squares")


def train_reference(dataset: Dataset, kind: str, seed: int = 0) -> Predictor:
    """Train a native reference predictor of the given kind on a fitted dataset."""
    if dataset.n_rows == 0:
        raise FittingError("cannot train on an empty dataset")
    if kind == "nearest-centroid":
        if dataset.task != CLASSIFICATION:
            raise FittingError("nearest-centroid requires a classification dataset")
        return NearestCentroidClassifier.fit(dataset.X, dataset.y, dataset.n_classes)
    if kind == "bagged-stumps":
        if dataset.task != CLASSIFICATION:
            raise FittingError("bagged-stumps requires a classification dataset")
        return BaggedStumpEnsemble.fit(dataset.X, dataset.y, dataset.n_classes, seed=seed)
    if kind == "least-squares":
        if dataset.task != REGRESSION:
            raise FittingError("least-squares requires a regression dataset")
        return LeastSquaresRegressor.fit(dataset.X, dataset.y)
    raise ValueError(f"unknown reference predictor kind {kind!r}")


class RemotePredictor(Predictor):
    """HTTP client for an external model server.

    Wire protocol: POST {endpoint}/predict with JSON
    ``{"task": ..., "rows": [[...], ...]}``; the server answers
    ``{"predictions": [[p0, p1, ...], ...]}`` for classification or
    ``{"predictions": [y0, ...]}`` for regression, one entry per row in
    request order. Transient failures (connection errors, 5xx) are retried.
    """

    def __init__(self, endpoint, task, class_count=0, timeout=30.0, retries=2):
        self.endpoint = endpoint.rstrip("/")
        self.task = task
        self.class_count = class_count
        self.timeout = timeout
        self.retries = retries

    def spec(self) -> dict:
        return {
            "kind": "remote",
            "endpoint": self.endpoint,
            "task": self.task,
            "class_count": self.class_count,
            "timeout": self.timeout,
            "retries": self.retries,
        }

    def _post(self, rows: list[list[float]]) -> dict:
        body = json.dumps({"task": self.task, "rows": rows})
        last_error = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(
                    self.endpoint + "/predict",
                    data=body,
                    headers={"Content-Type": "application/json"},
                    timeout=self.timeout,
                )
            except requests.Timeout:
                last_error = RemoteTimeoutError(f"prediction timed out after {self.timeout}s")
                continue
            except requests.RequestException as exc:
                last_error = RemotePredictorError(f"prediction request failed: {exc}")
                continue
            if resp.status_code >= 500:
                last_error = RemotePredictorError(f"server error {resp.status_code}")
                continue
            if resp.status_code != 200:
                raise RemotePredictorError(f"unexpected status {resp.status_code}")
            try:
                return resp.json()
            except ValueError as exc:
                raise RemotePredictorError(f"response is not valid JSON: {exc}") from exc
        raise last_error

    def _predictions(self, X: np.ndarray) -> list:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ValueError("remote prediction requires a non-empty batch of rows")
        payload = self._post(X.tolist())
        preds = payload.get("predictions")
        if not isinstance(preds, list) or len(preds) != X.shape[0]:
            raise RemotePredictorError(
                f"expected {X.shape[0]} predictions, got {type(preds).__name__} "
                f"of length {len(preds) if isinstance(preds, list) else 'n/a'}"
            )
        return preds

    def predict_proba_batch(self, X: np.ndarray) -> np.ndarray:
        preds = self._predictions(X)
        out = np.empty((len(preds), self.class_count))
        for i, p in enumerate(preds):
            if not isinstance(p, list) or len(p) != self.class_count:
                raise RemotePredictorError(
                    f"row {i}: expected a probability vector of length {self.class_count}"
                )
            out[i] = p
        if not np.all(np.isfinite(out)) or np.any(out < -1e-9):
            raise RemotePredictorError("probabilities must be finite and nonnegative")
        sums = out.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-6):
            raise RemotePredictorError("probability vectors must sum to 1")
        return out

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        preds = self._predictions(X)
        out = np.empty(len(preds))
        for i, p in enumerate(preds):
            if isinstance(p, (list, dict, str, bool)) or p is None:
                raise RemotePredictorError(f"row {i}: expected a single numeric response")
            out[i] = float(p)
        if not np.all(np.isfinite(out)):
            raise RemotePredictorError("responses must be finite")
        return out


def _tree_to_dict(node) -> dict:
    if node.is_leaf:
        return {"class": node.klass}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(doc) -> "CartModel":
    from .models import TreeNode

    def build(d):
        if "class" in d:
            return TreeNode(klass=d["class"])
        return TreeNode(
            feature=d["feature"],
            threshold=d["threshold"],
            left=build(d["left"]),
            right=build(d["right"]),
        )

    return CartModel(root=build(doc), n_classes=0)


def predictor_from_spec(doc: dict) -> Predictor:
    """Rebuild a predictor from its `spec()` dictionary."""
    kind = doc.get("kind")
    if kind == "nearest-centroid":
        return NearestCentroidClassifier(centroids=np.asarray(doc["centroids"], dtype=float))
    if kind == "bagged-stumps":
        trees = [_tree_from_dict(t) for t in doc["trees"]]
        for t in trees:
            t.n_classes = doc["class_count"]
        return BaggedStumpEnsemble(trees=trees, class_count=doc["class_count"])
    if kind == "least-squares":
        return LeastSquaresRegressor(
            weights=np.asarray(doc["weights"], dtype=float), intercept=doc["intercept"]
        )
    if kind == "remote":
        return RemotePredictor(
            endpoint=doc["endpoint"],
            task=doc["task"],
            class_count=doc.get("class_count", 0),
            timeout=doc.get("timeout", 30.0),
            retries=doc.get("retries", 2),
        )
    raise ValueError(f"unknown predictor spec kind {kind!r}")

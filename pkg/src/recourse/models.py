"""Small predictive models built from scratch: ridge regression and CART.

These back the per-feature correlation models and the bagged-tree reference
predictor. Both are deterministic given their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FittingError


@dataclass
class RidgeModel:
    """Closed-form L2-regularized linear model with intercept."""

    weights: np.ndarray
    intercept: float

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.weights + self.intercept

    def predict_one(self, x) -> float:
        return float(self.predict(x)[0])


def train_ridge(inputs, targets, lam: float = 1.0) -> RidgeModel:
    """Fit ridge regression by the normal equations.

    Minimizes squared error plus ``lam`` times the squared weight norm;
    the intercept is left unpenalized (fit after centering).
    """
    X = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] < 2:
        raise FittingError("train_ridge needs at least 2 rows")
    if X.shape[0] != y.shape[0]:
        raise FittingError("train_ridge inputs/targets length mismatch")
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    Xc = X - x_mean
    yc = y - y_mean
    gram = Xc.T @ Xc + lam * np.eye(X.shape[1])
    try:
        w = np.linalg.solve(gram, Xc.T @ yc)
    except np.linalg.LinAlgError as exc:
        raise FittingError(f"singular normal equations (lam={lam}): {exc}") from exc
    if lam == 0.0 and not np.allclose(gram @ w, Xc.T @ yc, atol=1e-6):
        raise FittingError("singular normal equations with lam=0")
    return RidgeModel(weights=w, intercept=float(y_mean - x_mean @ w))


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    klass: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p**2).sum())


def _majority(y: np.ndarray, n_classes: int) -> int:
    counts = np.bincount(y, minlength=n_classes)
    return int(counts.argmax())


def _best_split(X: np.ndarray, y: np.ndarray, n_classes: int):
    """Exhaustive Gini search over midpoint thresholds of every feature.

    Returns (feature, threshold, impurity) of the best weighted split or
    None when no split separates the data. Ties break toward the lowest
    feature index, then the lowest threshold (deterministic trees).
    """
    n = y.size
    best = None
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs, ys = X[order, j], y[order]
        left_counts = np.zeros(n_classes)
        right_counts = np.bincount(ys, minlength=n_classes).astype(float)
        for i in range(n - 1):
            left_counts[ys[i]] += 1
            right_counts[ys[i]] -= 1
            if xs[i + 1] <= xs[i]:
                continue
            n_left = i + 1
            impurity = (n_left * _gini(left_counts) + (n - n_left) * _gini(right_counts)) / n
            threshold = (xs[i] + xs[i + 1]) / 2.0
            if best is None or impurity < best[2] - 1e-12:
                best = (j, threshold, impurity)
    return best


def _grow(X, y, n_classes, depth, max_depth) -> TreeNode:
    counts = np.bincount(y, minlength=n_classes)
    node = TreeNode(klass=int(counts.argmax()))
    if depth >= max_depth or _gini(counts.astype(float)) == 0.0 or y.size < 2:
        return node
    split = _best_split(X, y, n_classes)
    if split is None:
        return node
    # zero-improvement splits are allowed (XOR-style targets need them)
    j, t, impurity = split
    if impurity > _gini(counts.astype(float)) + 1e-12:
        return node
    mask = X[:, j] <= t
    node.feature, node.threshold = j, t
    node.left = _grow(X[mask], y[mask], n_classes, depth + 1, max_depth)
    node.right = _grow(X[~mask], y[~mask], n_classes, depth + 1, max_depth)
    return node


@dataclass
class CartModel:
    """Greedy Gini-impurity decision tree; leaves predict the majority class."""

    root: TreeNode
    n_classes: int

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(X.shape[0], dtype=int)
        # iterative batch walk: partition row indices down the tree
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = node.klass
                continue
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return out

    def predict_one(self, x) -> int:
        return int(self.predict(x)[0])

    def depth(self) -> int:
        def d(node):
            return 0 if node.is_leaf else 1 + max(d(node.left), d(node.right))

        return d(self.root)


def train_cart(inputs, targets, max_depth: int = 5) -> CartModel:
    """Fit a CART classifier on integer class codes."""
    X = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=int)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if y.size == 0:
        raise FittingError("train_cart needs at least 1 row")
    n_classes = int(y.max()) + 1
    return CartModel(root=_grow(X, y, n_classes, 0, max_depth), n_classes=n_classes)


def r2_score(y_true, y_pred) -> float:
    """Coefficient of determination; 0 when the target has no variance left."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    ss_res = ((y_true - y_pred) ** 2).sum()
    ss_tot = ((y_true - y_true.mean()) ** 2).sum()
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return float(1.0 - ss_res / ss_tot)


def f1_score_weighted(y_true, y_pred) -> float:
    """Per-class F1 averaged with true-class support weights."""
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    classes = np.unique(y_true)
    total = 0.0
    for c in classes:
        tp = np.sum((y_pred == c) & (y_true == c))
        fp = np.sum((y_pred == c) & (y_true != c))
        fn = np.sum((y_pred != c) & (y_true == c))
        f1 = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) > 0 else 0.0
        total += f1 * np.sum(y_true == c)
    return float(total / y_true.size)

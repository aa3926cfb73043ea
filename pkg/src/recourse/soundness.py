"""Outlier and density-cluster models behind the soundness fitness functions.

Both models are fitted per prediction group (class, or response interval for
regression) on the correctly predicted training rows of that group, in
encoded space with Euclidean distance. Proximity compares the candidate's
nearest-reference distance against that reference's own nearest-neighbor
distance; connectedness asks whether the candidate is within epsilon of a
density cluster, where clusters are the connected components of the
epsilon-graph with at least `min_cluster_size` members.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import CLASSIFICATION, Dataset, ResponseRanges
from .errors import FittingError, UnavailableGroupError
from .predictors import Predictor


def _pairwise_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.sqrt(((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2))


def epsilon_for_group(rows: np.ndarray, percentile: float = 90.0) -> float:
    """Adaptive neighborhood radius: percentile of nearest-neighbor distances."""
    rows = np.asarray(rows, dtype=float)
    if rows.shape[0] < 2:
        raise UnavailableGroupError("epsilon needs at least 2 rows")
    d = _pairwise_distances(rows, rows)
    np.fill_diagonal(d, np.inf)
    return float(np.percentile(d.min(axis=1), percentile))


def epsilon_components(rows: np.ndarray, eps: float) -> list[list[int]]:
    """Connected components of the graph joining rows within eps of each other."""
    n = rows.shape[0]
    d = _pairwise_distances(rows, rows)
    adjacent = d <= eps
    np.fill_diagonal(adjacent, False)
    seen = np.zeros(n, dtype=bool)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(adjacent[i] & ~seen):
                seen[j] = True
                stack.append(int(j))
        components.append(sorted(comp))
    return components


@dataclass
class ProximityModel:
    """Reference rows of one group; `ratio` is distance-to-nearest over that
    reference's own nearest-neighbor distance (outlier score, lower = inlier)."""

    rows: np.ndarray
    theta: float = 1.0

    def __post_init__(self):
        d = _pairwise_distances(self.rows, self.rows)
        np.fill_diagonal(d, np.inf)
        self._nn = d.min(axis=1)

    def ratio_batch(self, X: np.ndarray) -> np.ndarray:
        d = _pairwise_distances(np.atleast_2d(X), self.rows)
        nearest = d.argmin(axis=1)
        numer = d[np.arange(d.shape[0]), nearest]
        denom = self._nn[nearest]
        out = np.empty(numer.shape)
        zero = denom == 0.0
        out[~zero] = numer[~zero] / denom[~zero]
        # duplicated reference rows: exact hits are inliers, anything else is not
        out[zero] = np.where(numer[zero] == 0.0, 0.0, np.inf)
        return out

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        return (self.ratio_batch(X) <= self.theta).astype(float)


@dataclass
class ConnectednessModel:
    """Epsilon-graph clusters of one group; a candidate connects when it is
    within epsilon of any member of a cluster of size >= min_cluster_size."""

    rows: np.ndarray
    eps: float
    min_cluster_size: int = 2
    clusters: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.clusters:
            self.clusters = [
                c
                for c in epsilon_components(self.rows, self.eps)
                if len(c) >= self.min_cluster_size
            ]
        members = sorted(i for c in self.clusters for i in c)
        self._cluster_rows = self.rows[members] if members else np.empty((0, self.rows.shape[1]))

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if self._cluster_rows.shape[0] == 0:
            return np.zeros(X.shape[0])
        d = _pairwise_distances(X, self._cluster_rows)
        return (d.min(axis=1) <= self.eps).astype(float)


@dataclass
class SoundnessModels:
    """Per-group proximity and connectedness models; groups with fewer than
    2 correctly predicted rows are unavailable and score 0."""

    proximity: dict[int, ProximityModel]
    connectedness: dict[int, ConnectednessModel]
    group_rows: dict[int, np.ndarray]

    def available(self, group: int) -> bool:
        return group in self.proximity

    def proximity_ratio_for(self, xp, group: int) -> float:
        if group not in self.proximity:
            raise UnavailableGroupError(f"group {group} has no fitted proximity model")
        return proximity_ratio(xp, self.proximity[group])

    def o_proximity_batch(self, X: np.ndarray, group: int) -> np.ndarray:
        X = np.atleast_2d(X)
        if group not in self.proximity:
            return np.zeros(X.shape[0])
        return self.proximity[group].score_batch(X)

    def o_connectedness_batch(self, X: np.ndarray, group: int) -> np.ndarray:
        X = np.atleast_2d(X)
        if group not in self.connectedness:
            return np.zeros(X.shape[0])
        return self.connectedness[group].score_batch(X)


def proximity_ratio(xp, model: ProximityModel) -> float:
    """Outlier ratio of a single candidate row against a fitted group model."""
    return float(model.ratio_batch(np.atleast_2d(np.asarray(xp, dtype=float)))[0])


def o_proximity(xp, models: SoundnessModels, group: int) -> float:
    """1 when the candidate is an inlier of its group, else 0."""
    return float(models.o_proximity_batch(np.asarray(xp, dtype=float), group)[0])


def o_connectedness(xp, models: SoundnessModels, group: int) -> float:
    """1 when the candidate connects to a density cluster of its group, else 0."""
    return float(models.o_connectedness_batch(np.asarray(xp, dtype=float), group)[0])


def prediction_groups(
    dataset: Dataset, f: Predictor, ranges: ResponseRanges | None
) -> tuple[np.ndarray, np.ndarray, int]:
    """Predicted group per row, correctness mask, and the number of groups.

    Classification: group = predicted class, correct = matches the label.
    Regression: group = interval of the predicted response, correct = the
    prediction falls in the same interval as the true response.
    """
    if dataset.task == CLASSIFICATION:
        pred = f.predict_class_batch(dataset.X)
        return pred, pred == dataset.y, dataset.n_classes
    if ranges is None:
        raise ValueError("regression soundness needs response ranges")
    responses = f.predict_batch(dataset.X)
    pred_groups = np.array([ranges.interval_of(r) for r in responses])
    true_groups = np.array([ranges.interval_of(t) for t in dataset.y])
    return pred_groups, pred_groups == true_groups, ranges.n_intervals


def fit_soundness(
    dataset: Dataset,
    f: Predictor,
    ranges: ResponseRanges | None = None,
    theta: float = 1.0,
    eps_percentile: float = 90.0,
    min_cluster_size: int = 2,
) -> SoundnessModels:
    """Fit per-group proximity and connectedness models on correct predictions."""
    groups, correct, n_groups = prediction_groups(dataset, f, ranges)
    proximity: dict[int, ProximityModel] = {}
    connectedness: dict[int, ConnectednessModel] = {}
    group_rows: dict[int, np.ndarray] = {}
    for g in range(n_groups):
        rows = dataset.X[(groups == g) & correct]
        if rows.shape[0] < 2:
            continue
        group_rows[g] = rows
        proximity[g] = ProximityModel(rows=rows, theta=theta)
        connectedness[g] = ConnectednessModel(
            rows=rows,
            eps=epsilon_for_group(rows, eps_percentile),
            min_cluster_size=min_cluster_size,
        )
    if not proximity:
        raise FittingError("no group has enough correctly predicted rows")
    return SoundnessModels(proximity=proximity, connectedness=connectedness, group_rows=group_rows)

"""Per-feature correlation models and the coherency cost.

During fitting, every feature that is correlated with at least one other
feature (association above `rho`) gets a predictive model: a ridge
regression for numerical features, a CART classifier for categorical ones,
trained on an internal 80/20 split and kept only when its validation score
(R^2 or weighted F1) reaches `tau`. During explaining, each changed feature
with a model contributes score * delta(candidate value, model prediction)
to the coherency cost: consistent feature combinations predict each other
well and cost nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import correlation_matrix
from .data import CATEGORICAL, Dataset, FeatureMeta
from .models import f1_score_weighted, r2_score, train_cart, train_ridge
from .validity import changed_mask, feature_delta

# re-exported here because correlation models are their primary consumer
__all__ = [
    "CoherencyConfig",
    "CorrelationModel",
    "candidate_correlation_models",
    "effective_tau",
    "fit_correlation_models",
    "coherency_cost",
    "train_ridge",
    "train_cart",
]


@dataclass(frozen=True)
class CoherencyConfig:
    """Thresholds of the fitting algorithm. `tau=None` means "median of all
    candidate model scores", recomputed per dataset."""

    rho: float = 0.1
    tau: float | None = None
    train_fraction: float = 0.8
    ridge_lambda: float = 1.0
    cart_max_depth: int = 5

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.tau is not None and not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")


@dataclass
class CorrelationModel:
    """A kept per-feature model: which features feed it, the fitted model,
    and its validation score used to weigh the cost."""

    feature: int
    inputs: list[int]
    model: object  # RidgeModel or CartModel (anything with .predict)
    score: float
    kind: str  # "numerical" | "categorical"

    def predict_feature(self, xp_enc: np.ndarray, meta: FeatureMeta):
        """Predict feature j's raw value / code from the candidate's inputs."""
        row = np.asarray(xp_enc, dtype=float)[self.inputs].reshape(1, -1)
        pred = self.model.predict(row)[0]
        if self.kind == CATEGORICAL:
            return int(pred)
        return float(pred)


def _raw_numeric_column(dataset: Dataset, j: int) -> np.ndarray:
    meta = dataset.features[j]
    return dataset.X[:, j] * meta.std + meta.mean


def candidate_correlation_models(
    train: Dataset, cfg: CoherencyConfig = CoherencyConfig(), seed: int = 0
) -> list[CorrelationModel]:
    """Train one candidate model per feature with correlated inputs."""
    corr = correlation_matrix(train)
    rng = np.random.default_rng(seed)
    order = rng.permutation(train.n_rows)
    n_fit = int(train.n_rows * cfg.train_fraction)
    if n_fit < 2 or train.n_rows - n_fit < 1:
        return {}
    fit_idx, val_idx = order[:n_fit], order[n_fit:]

    candidates: list[CorrelationModel] = []
    for j in range(train.n_features):
        inputs = corr.correlated_with(j, cfg.rho)
        if not inputs:
            continue
        meta = train.features[j]
        X_fit, X_val = train.X[fit_idx][:, inputs], train.X[val_idx][:, inputs]
        if meta.kind == CATEGORICAL:
            y = train.X[:, j].astype(int)
            model = train_cart(X_fit, y[fit_idx], max_depth=cfg.cart_max_depth)
            score = f1_score_weighted(y[val_idx], model.predict(X_val))
        else:
            y = _raw_numeric_column(train, j)
            model = train_ridge(X_fit, y[fit_idx], lam=cfg.ridge_lambda)
            score = r2_score(y[val_idx], model.predict(X_val))
        score = float(np.clip(score, 0.0, 1.0))  # negative R^2 carries no weight
        candidates.append(
            CorrelationModel(feature=j, inputs=inputs, model=model, score=score, kind=meta.kind)
        )
    return candidates


def effective_tau(candidates: list[CorrelationModel], cfg: CoherencyConfig) -> float | None:
    """The score threshold actually applied: cfg.tau, or the median score."""
    if cfg.tau is not None:
        return cfg.tau
    if not candidates:
        return None
    return float(np.median([c.score for c in candidates]))


def fit_correlation_models(
    train: Dataset, cfg: CoherencyConfig = CoherencyConfig(), seed: int = 0
) -> dict[int, CorrelationModel]:
    """Build the kept correlation models, keyed by target feature index."""
    candidates = candidate_correlation_models(train, cfg, seed)
    tau = effective_tau(candidates, cfg)
    if tau is None:
        return {}
    return {c.feature: c for c in candidates if c.score >= tau}


def coherency_cost(
    x_enc: np.ndarray,
    xp_enc: np.ndarray,
    models: dict[int, CorrelationModel],
    metas: list[FeatureMeta],
) -> float:
    """Total coherency cost of a candidate: sum over changed modeled features
    of score * delta(candidate value, predicted value)."""
    if not models:
        return 0.0
    xi = 0.0
    for j in np.flatnonzero(changed_mask(x_enc, xp_enc)):
        cm = models.get(int(j))
        if cm is None:
            continue
        meta = metas[j]
        predicted = cm.predict_feature(xp_enc, meta)
        if meta.kind == CATEGORICAL:
            candidate = int(round(float(xp_enc[j])))
            delta = 0.0 if candidate == predicted else 1.0
        else:
            candidate = float(xp_enc[j]) * meta.std + meta.mean
            delta = feature_delta(candidate, predicted, meta)
        xi += cm.score * delta
    return float(xi)

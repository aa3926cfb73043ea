"""Core counterfactual cost functions: desired outcome, distance, sparsity.

Outcome cost is a hinge on the desired-class probability (classification) or
the distance to a desired response interval (regression). Feature distance
is the Gower metric: range-normalized absolute differences for numerics,
inequality indicators for categoricals. Sparsity counts changed features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, NUMERICAL, FeatureMeta
from .predictors import Predictor

# Two encoded values count as "the same" below this tolerance; genotype
# arithmetic copies input genes bit-exactly, so this only absorbs rounding.
CHANGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DesiredOutcome:
    """Target the optimizer must reach: a class with a probability threshold
    (classification) or a response interval (regression)."""

    kind: str  # "class" | "range"
    class_index: int = 0
    threshold: float = 0.5
    lb: float = 0.0
    ub: float = 0.0

    def __post_init__(self):
        if self.kind == "class":
            if not 0.0 < self.threshold <= 1.0:
                raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")
        elif self.kind == "range":
            if self.lb > self.ub:
                raise ValueError(f"range lower bound {self.lb} exceeds upper bound {self.ub}")
        else:
            raise ValueError(f"unknown desired outcome kind {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "class":
            return {"kind": "class", "class_index": self.class_index, "threshold": self.threshold}
        return {"kind": "range", "lb": self.lb, "ub": self.ub}

    @classmethod
    def from_dict(cls, doc: dict) -> "DesiredOutcome":
        if doc.get("kind") == "class":
            return cls(kind="class", class_index=doc["class_index"], threshold=doc["threshold"])
        return cls(kind="range", lb=doc["lb"], ub=doc["ub"])


def hinge_outcome_cost(prob_desired, threshold: float):
    """max(0, threshold - p) for one probability or a batch of them."""
    return np.maximum(0.0, threshold - np.asarray(prob_desired, dtype=float))


def range_outcome_cost(response, lb: float, ub: float):
    """0 inside [lb, ub], otherwise the distance to the nearest bound."""
    r = np.asarray(response, dtype=float)
    return np.maximum(0.0, np.maximum(lb - r, r - ub))


def outcome_cost_classification(xp, class_index: int, threshold: float, f: Predictor) -> float:
    """Hinge loss of the desired-class probability at the candidate row."""
    proba = f.predict_proba(xp)
    if not 0 <= class_index < len(proba):
        raise ValueError(f"class index {class_index} out of range for {len(proba)} classes")
    return float(hinge_outcome_cost(proba[class_index], threshold))


def outcome_cost_regression(xp, interval: tuple[float, float], f: Predictor) -> float:
    """Distance of the predicted response to the desired interval."""
    lb, ub = interval
    if lb > ub:
        raise ValueError(f"interval lower bound {lb} exceeds upper bound {ub}")
    return float(range_outcome_cost(f.predict(xp), lb, ub))


def feature_delta(x_j, xp_j, meta: FeatureMeta) -> float:
    """Per-feature distance in [0, 1] on raw (original-unit) values.

    Numerical: |x - x'| / range, clamped to 1 for out-of-range queries.
    Categorical: inequality indicator. A zero-width numerical range (constant
    training feature) degrades to the inequality indicator.
    """
    if meta.kind == NUMERICAL:
        diff = abs(float(x_j) - float(xp_j))
        if meta.width == 0.0:
            return 0.0 if diff <= CHANGE_TOLERANCE else 1.0
        return min(1.0, diff / meta.width)
    return 0.0 if str(x_j) == str(xp_j) else 1.0


def gower_distance(x, xp, metas: list[FeatureMeta]) -> float:
    """Mean per-feature delta between two raw rows."""
    if len(x) != len(xp) or len(x) != len(metas):
        raise ValueError("gower_distance expects rows matching the feature schema")
    return float(np.mean([feature_delta(a, b, m) for a, b, m in zip(x, xp, metas)]))


def changed_mask(x_enc: np.ndarray, xp_enc: np.ndarray) -> np.ndarray:
    """Boolean mask of features whose encoded values differ beyond tolerance."""
    x_enc = np.asarray(x_enc, dtype=float)
    xp_enc = np.asarray(xp_enc, dtype=float)
    if x_enc.shape != xp_enc.shape:
        raise ValueError("changed_mask expects equal-arity rows")
    return np.abs(x_enc - xp_enc) > CHANGE_TOLERANCE


def sparsity_cost(x_enc, xp_enc) -> int:
    """Number of changed features between two encoded rows."""
    return int(changed_mask(x_enc, xp_enc).sum())

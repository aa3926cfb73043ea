"""Pairwise association statistics for mixed-feature data.

Numerical-numerical pairs use |Pearson r|, numerical-categorical pairs the
correlation ratio, categorical-categorical pairs Cramer's V, so every entry
of the resulting matrix lives in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import CATEGORICAL, Dataset
from .errors import UndefinedCorrelationError


def pearson_r(x, y) -> float:
    """Product-moment correlation of two equal-length real vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson_r expects two equal-length vectors")
    if x.size < 2:
        raise ValueError("pearson_r needs at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc**2).sum() * (yc**2).sum())
    if denom == 0.0:
        raise UndefinedCorrelationError("zero variance in pearson_r input")
    return float(np.clip((xc * yc).sum() / denom, -1.0, 1.0))


def correlation_ratio(categories, values) -> float:
    """Correlation ratio eta = sqrt(between-group variance / total variance)."""
    cats = np.asarray(categories)
    vals = np.asarray(values, dtype=float)
    if cats.shape != vals.shape or cats.ndim != 1:
        raise ValueError("correlation_ratio expects two equal-length vectors")
    groups = np.unique(cats)
    if groups.size < 2:
        raise UndefinedCorrelationError("correlation_ratio needs at least 2 groups")
    grand = vals.mean()
    ss_total = ((vals - grand) ** 2).sum()
    if ss_total == 0.0:
        raise UndefinedCorrelationError("zero total variance in correlation_ratio input")
    ss_between = 0.0
    for g in groups:
        group_vals = vals[cats == g]
        ss_between += group_vals.size * (group_vals.mean() - grand) ** 2
    return float(np.sqrt(np.clip(ss_between / ss_total, 0.0, 1.0)))


def cramers_v(a, b) -> float:
    """Cramer's V from the contingency table of two categorical code vectors."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("cramers_v expects two equal-length vectors")
    cats_a, ia = np.unique(a, return_inverse=True)
    cats_b, ib = np.unique(b, return_inverse=True)
    if cats_a.size < 2 or cats_b.size < 2:
        raise UndefinedCorrelationError("cramers_v needs at least 2 categories per variable")
    table = np.zeros((cats_a.size, cats_b.size))
    np.add.at(table, (ia, ib), 1.0)
    n = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    chi2 = ((table - expected) ** 2 / expected).sum()
    v2 = chi2 / (n * min(cats_a.size - 1, cats_b.size - 1))
    return float(np.sqrt(np.clip(v2, 0.0, 1.0)))


@dataclass
class CorrelationMatrix:
    """Symmetric m x m association matrix with entries in [0, 1], diagonal 1."""

    values: np.ndarray
    warnings: list[str] = field(default_factory=list)

    def correlated_with(self, j: int, threshold: float) -> list[int]:
        """Indices of features whose association with feature j exceeds threshold."""
        return [k for k in range(self.values.shape[0]) if k != j and self.values[j, k] > threshold]


def correlation_matrix(dataset: Dataset) -> CorrelationMatrix:
    """All pairwise associations, dispatched by feature-kind pair.

    Undefined entries (constant columns, single categories) are recorded as
    0 with a warning instead of aborting, so degenerate columns simply end
    up uncorrelated with everything.
    """
    m = dataset.n_features
    values = np.eye(m)
    warnings: list[str] = []
    for j in range(m):
        for k in range(j + 1, m):
            fj, fk = dataset.features[j], dataset.features[k]
            cj, ck = dataset.X[:, j], dataset.X[:, k]
            try:
                if fj.kind == CATEGORICAL and fk.kind == CATEGORICAL:
                    r = cramers_v(cj.astype(int), ck.astype(int))
                elif fj.kind == CATEGORICAL:
                    r = correlation_ratio(cj.astype(int), ck)
                elif fk.kind == CATEGORICAL:
                    r = correlation_ratio(ck.astype(int), cj)
                else:
                    r = abs(pearson_r(cj, ck))
            except UndefinedCorrelationError as exc:
                r = 0.0
                warnings.append(f"{fj.name}/{fk.name}: {exc}")
            values[j, k] = values[k, j] = r
    return CorrelationMatrix(values=values, warnings=warnings)

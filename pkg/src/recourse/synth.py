"""Seeded synthetic datasets for tests, demos, and benchmark fixtures."""

from __future__ import annotations

import numpy as np

from .data import CATEGORICAL, CLASSIFICATION, NUMERICAL, REGRESSION, Dataset, FeatureDecl


def _classification_dataset(columns: dict[str, list], labels: list[str], decls) -> Dataset:
    rows = [[columns[d.name][i] for d in decls] for i in range(len(labels))]
    return Dataset.fit(rows, labels, decls, CLASSIFICATION, "label")


def two_blobs(
    n: int = 500,
    m: int = 2,
    separation: float = 4.0,
    std: float = 0.6,
    seed: int = 0,
) -> Dataset:
    """Two Gaussian blobs, class 'a' at the origin and class 'b' offset on
    every axis; linearly separable for reasonable separation/std."""
    rng = np.random.default_rng(seed)
    half = n // 2
    a = rng.normal(0.0, std, size=(half, m))
    b = rng.normal(separation, std, size=(n - half, m))
    X = np.vstack([a, b])
    labels = ["a"] * half + ["b"] * (n - half)
    order = rng.permutation(n)
    decls = [FeatureDecl(name=f"f{j}", kind=NUMERICAL) for j in range(m)]
    rows = [list(X[i]) for i in order]
    return Dataset.fit(rows, [labels[i] for i in order], decls, CLASSIFICATION, "label")


def half_moons(n: int = 500, noise: float = 0.15, seed: int = 0) -> Dataset:
    """Two interleaving half circles, the classic non-linear 2-D benchmark."""
    rng = np.random.default_rng(seed)
    half = n // 2
    t1 = rng.uniform(0.0, np.pi, size=half)
    t2 = rng.uniform(0.0, np.pi, size=n - half)
    upper = np.c_[np.cos(t1), np.sin(t1)]
    lower = np.c_[1.0 - np.cos(t2), 0.5 - np.sin(t2)]
    X = np.vstack([upper, lower]) + rng.normal(0.0, noise, size=(n, 2))
    labels = ["a"] * half + ["b"] * (n - half)
    order = rng.permutation(n)
    decls = [FeatureDecl(name="x", kind=NUMERICAL), FeatureDecl(name="y", kind=NUMERICAL)]
    rows = [list(X[i]) for i in order]
    return Dataset.fit(rows, [labels[i] for i in order], decls, CLASSIFICATION, "label")


CATEGORY_MAP = {"a": "p", "b": "q", "c": "r"}


def correlated_pairs(n: int = 500, noise: float = 0.05, seed: int = 0) -> Dataset:
    """Coherency fixture: x2 tracks 2*x1, c2 is a bijective copy of c1.

    The label depends on x1 + x2 and on c1, so counterfactuals have to touch
    correlated features; x3 is an independent distractor. Feature ranges are
    kept narrow so the generative noise band stays wide relative to the
    range-normalized coherency deltas.
    """
    rng = np.random.default_rng(seed)
    x1 = rng.uniform(-1.0, 1.0, size=n)
    x2 = 2.0 * x1 + rng.normal(0.0, noise, size=n)
    x3 = rng.uniform(-1.0, 1.0, size=n)
    c1 = rng.choice(list(CATEGORY_MAP), size=n)
    c2 = np.array([CATEGORY_MAP[c] for c in c1])
    score = x1 + x2 + np.where(c1 == "b", 1.0, 0.0)
    labels = np.where(score > 0.25, "yes", "no")
    decls = [
        FeatureDecl(name="x1", kind=NUMERICAL),
        FeatureDecl(name="x2", kind=NUMERICAL),
        FeatureDecl(name="x3", kind=NUMERICAL),
        FeatureDecl(name="c1", kind=CATEGORICAL, categories=("a", "b", "c")),
        FeatureDecl(name="c2", kind=CATEGORICAL, categories=("p", "q", "r")),
    ]
    rows = [[x1[i], x2[i], x3[i], c1[i], c2[i]] for i in range(n)]
    return Dataset.fit(rows, list(labels), decls, CLASSIFICATION, "label")


def constrained_blobs(n: int = 500, seed: int = 0) -> Dataset:
    """Actionability fixture: `group` is a class-independent categorical
    (safe to fix, like an immutable attribute), f1..f3 separate the classes
    with the desired class sitting higher on each (so `ge` is natural)."""
    rng = np.random.default_rng(seed)
    half = n // 2
    group = rng.choice(["m", "f"], size=n)
    a = rng.normal(0.0, 0.5, size=(half, 3))
    b = rng.normal(3.0, 0.5, size=(n - half, 3))
    rest = np.vstack([a, b])
    labels = ["a"] * half + ["b"] * (n - half)
    order = rng.permutation(n)
    decls = [FeatureDecl(name="group", kind=CATEGORICAL, categories=("m", "f"))] + [
        FeatureDecl(name=f"f{j}", kind=NUMERICAL) for j in (1, 2, 3)
    ]
    rows = [[group[i], *rest[i]] for i in order]
    return Dataset.fit(rows, [labels[i] for i in order], decls, CLASSIFICATION, "label")


def linear_regression_data(n: int = 400, noise: float = 0.2, seed: int = 0) -> Dataset:
    """Regression fixture: response is a noisy linear function of 2 features."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-2.0, 2.0, size=(n, 2))
    y = 3.0 * X[:, 0] - 1.0 * X[:, 1] + rng.normal(0.0, noise, size=n)
    decls = [FeatureDecl(name="u", kind=NUMERICAL), FeatureDecl(name="v", kind=NUMERICAL)]
    rows = [list(X[i]) for i in range(n)]
    return Dataset.fit(rows, list(y), decls, REGRESSION, "response")


def dataset_to_csv(dataset: Dataset, csv_path: str, meta_path: str) -> None:
    """Write a dataset (raw rows) plus its metadata sidecar to disk."""
    import csv as _csv
    import json

    names = dataset.feature_names
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(names + [dataset.target_name])
        for row, target in zip(dataset.raw_rows, dataset.raw_targets):
            writer.writerow([_fmt(v) for v in row] + [_fmt(target)])
    meta = {
        "version": 1,
        "task": dataset.task,
        "target": {"name": dataset.target_name},
        "features": [],
    }
    if dataset.task == CLASSIFICATION:
        meta["target"]["classes"] = list(dataset.class_labels)
    for decl in dataset.decls:
        entry = {"name": decl.name, "kind": decl.kind}
        if decl.categories is not None:
            entry["categories"] = list(decl.categories)
        meta["features"].append(entry)
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)


def _fmt(v):
    return repr(float(v)) if isinstance(v, (int, float, np.floating)) else str(v)

"""Mixed-feature tabular datasets: loading, encoding, splitting, response bins.

Numerical features are standardized (zero mean, unit variance, population
std) and categorical features are ordinal-encoded. Encoder parameters are
always fitted on training rows and stored on the feature metadata so rows
can be decoded back to original units exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateRangeError,
    EncodingError,
    ParseError,
    SchemaMismatchError,
)

NUMERICAL = "numerical"
CATEGORICAL = "categorical"
CLASSIFICATION = "classification"
REGRESSION = "regression"


@dataclass(frozen=True)
class FeatureDecl:
    """User-declared feature: name, kind, optional fixed category vocabulary."""

    name: str
    kind: str
    categories: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in (NUMERICAL, CATEGORICAL):
            raise ParseError(f"unknown feature kind {self.kind!r} for {self.name!r}")
        if self.kind == NUMERICAL and self.categories is not None:
            raise ParseError(f"numerical feature {self.name!r} cannot declare categories")


@dataclass(frozen=True)
class FeatureMeta:
    """Fitted per-feature metadata: value range or category codebook.

    For numerical features `lo`/`hi` span the training data (so the width
    ``hi - lo`` is the range used by the Gower distance) and `mean`/`std`
    are the standardization parameters. For categorical features
    `categories` maps ordinal code i to ``categories[i]``.
    """

    name: str
    kind: str
    lo: float = 0.0
    hi: float = 0.0
    mean: float = 0.0
    std: float = 1.0
    categories: tuple[str, ...] = ()

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    def code_of(self, label) -> int:
        try:
            return self.categories.index(str(label))
        except ValueError:
            raise EncodingError(
                f"unseen category {label!r} for feature {self.name!r}",
                feature=self.name,
                value=label,
            ) from None

    def encode(self, value) -> float:
        if self.kind == NUMERICAL:
            try:
                v = float(value)
            except (TypeError, ValueError):
                raise EncodingError(
                    f"non-numeric value {value!r} for feature {self.name!r}",
                    feature=self.name,
                    value=value,
                ) from None
            return (v - self.mean) / self.std
        return float(self.code_of(value))

    def decode(self, encoded: float):
        if self.kind == NUMERICAL:
            return encoded * self.std + self.mean
        code = int(round(encoded))
        if not 0 <= code < len(self.categories):
            raise EncodingError(
                f"invalid code {encoded!r} for feature {self.name!r}",
                feature=self.name,
                value=encoded,
            )
        return self.categories[code]

    def encoded_bounds(self) -> tuple[float, float]:
        """Valid gene interval in encoded units (used by the optimizer)."""
        if self.kind == NUMERICAL:
            return (self.lo - self.mean) / self.std, (self.hi - self.mean) / self.std
        return 0.0, float(len(self.categories) - 1)


def _fit_meta(decl: FeatureDecl, column: list) -> FeatureMeta:
    if decl.kind == NUMERICAL:
        values = np.asarray([float(v) for v in column], dtype=float)
        std = float(values.std())
        return FeatureMeta(
            name=decl.name,
            kind=NUMERICAL,
            lo=float(values.min()),
            hi=float(values.max()),
            mean=float(values.mean()),
            std=std if std > 0 else 1.0,
        )
    if decl.categories is not None:
        categories = decl.categories
        for v in column:
            if str(v) not in categories:
                raise EncodingError(
                    f"unseen category {v!r} for feature {decl.name!r}",
                    feature=decl.name,
                    value=v,
                )
    else:
        seen: dict[str, None] = {}
        for v in column:
            seen.setdefault(str(v), None)
        categories = tuple(seen)
    return FeatureMeta(name=decl.name, kind=CATEGORICAL, categories=categories)


@dataclass
class Dataset:
    """Encoded tabular dataset plus the raw rows it was fitted from.

    `X` holds one encoded row per sample (standardized numerics, ordinal
    codes as floats). `y` holds class indices (classification) or float
    responses (regression). Immutable by convention after construction.
    """

    features: list[FeatureMeta]
    X: np.ndarray
    y: np.ndarray
    task: str
    target_name: str
    class_labels: tuple[str, ...] = ()
    raw_rows: list[list] = field(default_factory=list)
    raw_targets: list = field(default_factory=list)
    decls: list[FeatureDecl] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    @property
    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def numeric_indices(self) -> list[int]:
        return [j for j, f in enumerate(self.features) if f.kind == NUMERICAL]

    def categorical_indices(self) -> list[int]:
        return [j for j, f in enumerate(self.features) if f.kind == CATEGORICAL]

    def encode_row(self, raw: Sequence) -> np.ndarray:
        if len(raw) != self.n_features:
            raise SchemaMismatchError(
                f"expected {self.n_features} feature values, got {len(raw)}"
            )
        return np.array(
            [meta.encode(v) for meta, v in zip(self.features, raw)], dtype=float
        )

    def decode_row(self, encoded: Sequence[float]) -> list:
        if len(encoded) != self.n_features:
            raise SchemaMismatchError(
                f"expected {self.n_features} encoded values, got {len(encoded)}"
            )
        return [meta.decode(float(v)) for meta, v in zip(self.features, encoded)]

    def class_index(self, label) -> int:
        try:
            return self.class_labels.index(str(label))
        except ValueError:
            raise EncodingError(
                f"unseen class label {label!r}", feature=self.target_name, value=label
            ) from None

    @classmethod
    def fit(
        cls,
        raw_rows: list[list],
        raw_targets: list,
        decls: list[FeatureDecl],
        task: str,
        target_name: str = "target",
        class_labels: tuple[str, ...] | None = None,
    ) -> "Dataset":
        """Fit encoders on `raw_rows` and return the encoded dataset."""
        if task not in (CLASSIFICATION, REGRESSION):
            raise ValueError(f"unknown task {task!r}")
        if not raw_rows:
            raise ValueError("cannot fit a dataset with no rows")
        m = len(decls)
        for i, row in enumerate(raw_rows):
            if len(row) != m:
                raise ParseError(f"row {i} has {len(row)} values, expected {m}", row_index=i)
        columns = [[row[j] for row in raw_rows] for j in range(m)]
        features = [_fit_meta(d, col) for d, col in zip(decls, columns)]

        if task == CLASSIFICATION:
            if class_labels is None:
                seen: dict[str, None] = {}
                for t in raw_targets:
                    seen.setdefault(str(t), None)
                class_labels = tuple(seen)
            codes = []
            for t in raw_targets:
                label = str(t)
                if label not in class_labels:
                    raise EncodingError(
                        f"unseen class label {label!r}", feature=target_name, value=t
                    )
                codes.append(class_labels.index(label))
            y = np.asarray(codes, dtype=int)
        else:
            class_labels = ()
            y = np.asarray([float(t) for t in raw_targets], dtype=float)

        ds = cls(
            features=features,
            X=np.empty((0, m)),
            y=y,
            task=task,
            target_name=target_name,
            class_labels=class_labels,
            raw_rows=[list(r) for r in raw_rows],
            raw_targets=list(raw_targets),
            decls=list(decls),
        )
        ds.X = np.array([ds.encode_row(r) for r in raw_rows], dtype=float)
        return ds

    def project(self, raw_rows: list[list], raw_targets: list) -> "Dataset":
        """Encode new rows with this dataset's (already fitted) encoders."""
        if self.task == CLASSIFICATION:
            y = np.asarray([self.class_index(t) for t in raw_targets], dtype=int)
        else:
            y = np.asarray([float(t) for t in raw_targets], dtype=float)
        ds = Dataset(
            features=self.features,
            X=np.array([self.encode_row(r) for r in raw_rows], dtype=float),
            y=y,
            task=self.task,
            target_name=self.target_name,
            class_labels=self.class_labels,
            raw_rows=[list(r) for r in raw_rows],
            raw_targets=list(raw_targets),
            decls=self.decls,
        )
        return ds


def parse_metadata(text: str) -> tuple[list[FeatureDecl], str, str, tuple[str, ...] | None]:
    """Parse the sidecar JSON metadata document.

    Returns (feature declarations, task, target column name, declared class
    labels or None). See README for the documented schema.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"metadata is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("metadata must be a JSON object")
    task = doc.get("task")
    if task not in (CLASSIFICATION, REGRESSION):
        raise ParseError(f"metadata task must be classification or regression, got {task!r}")
    target = doc.get("target")
    class_labels = None
    if isinstance(target, dict):
        target_name = target.get("name")
        if "classes" in target:
            class_labels = tuple(str(c) for c in target["classes"])
    else:
        target_name = target
    if not isinstance(target_name, str):
        raise ParseError("metadata target name missing")
    decls = []
    for spec in doc.get("features", []):
        cats = spec.get("categories")
        decls.append(
            FeatureDecl(
                name=spec["name"],
                kind=spec["kind"],
                categories=tuple(str(c) for c in cats) if cats is not None else None,
            )
        )
    if not decls:
        raise ParseError("metadata declares no features")
    return decls, task, target_name, class_labels


def load_dataset(csv_path: str, meta_path: str) -> Dataset:
    """Load a CSV file with a header row using a JSON metadata sidecar."""
    with open(meta_path, "r", encoding="utf-8") as fh:
        decls, task, target_name, class_labels = parse_metadata(fh.read())
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty CSV file") from None
        col_of = {name: i for i, name in enumerate(header)}
        for d in decls:
            if d.name not in col_of:
                raise ParseError(f"declared feature {d.name!r} not found in CSV header")
        if target_name not in col_of:
            raise ParseError(f"target column {target_name!r} not found in CSV header")
        raw_rows, raw_targets = [], []
        for i, row in enumerate(reader):
            if len(row) != len(header):
                raise ParseError(
                    f"row {i + 1} has {len(row)} columns, expected {len(header)}",
                    row_index=i + 1,
                )
            values = []
            for d in decls:
                v = row[col_of[d.name]].strip()
                if d.kind == NUMERICAL:
                    try:
                        values.append(float(v))
                    except ValueError:
                        raise ParseError(
                            f"row {i + 1}: non-numeric value {v!r} in column {d.name!r}",
                            row_index=i + 1,
                        ) from None
                else:
                    values.append(v)
            raw_rows.append(values)
            raw_targets.append(row[col_of[target_name]].strip())
    if not raw_rows:
        raise ParseError("CSV contains no data rows")
    targets = raw_targets if task == CLASSIFICATION else [float(t) for t in raw_targets]
    return Dataset.fit(raw_rows, targets, decls, task, target_name, class_labels)


def split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic disjoint train/test split; encoders refitted on train only."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(dataset.raw_rows)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = int(n * train_fraction)
    if n_train == 0 or n_train == n:
        raise ValueError(f"split of {n} rows at fraction {train_fraction} leaves an empty side")
    train_idx, test_idx = order[:n_train], order[n_train:]
    train = Dataset.fit(
        [dataset.raw_rows[i] for i in train_idx],
        [dataset.raw_targets[i] for i in train_idx],
        dataset.decls,
        dataset.task,
        dataset.target_name,
        dataset.class_labels if dataset.task == CLASSIFICATION else None,
    )
    test = train.project(
        [dataset.raw_rows[i] for i in test_idx],
        [dataset.raw_targets[i] for i in test_idx],
    )
    return train, test


@dataclass(frozen=True)
class ResponseRanges:
    """Quantile bins over regression targets: q intervals covering the span."""

    cut_points: tuple[float, ...]
    intervals: tuple[tuple[float, float], ...]

    @property
    def n_intervals(self) -> int:
        return len(self.intervals)

    def interval_of(self, value: float) -> int:
        """Index of the interval containing `value` (clamped outside the span)."""
        return int(np.searchsorted(self.cut_points, value, side="right"))


def response_ranges(targets: Sequence[float], q: int) -> ResponseRanges:
    """Split the target span into q quantile intervals.

    Cut points are the 1/q .. (q-1)/q empirical quantiles with linear
    interpolation between order statistics.
    """
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    t = np.asarray(targets, dtype=float)
    if t.size == 0:
        raise ValueError("targets must be non-empty")
    if float(t.max()) == float(t.min()):
        raise DegenerateRangeError("all targets are equal; no response ranges exist")
    cuts = tuple(float(np.quantile(t, k / q)) for k in range(1, q))
    bounds = [float(t.min()), *cuts, float(t.max())]
    intervals = tuple((bounds[i], bounds[i + 1]) for i in range(q))
    return ResponseRanges(cut_points=cuts, intervals=intervals)

"""Benchmark metrics: per-objective statistics, diversity, coherency rate.

`run_benchmark` mirrors the module-ablation experiment: fit once with all
requested capabilities, generate counterfactual sets for a batch of test
inputs under each module configuration, and aggregate all seven objectives
regardless of which were active, so configurations can be compared on equal
footing.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .actionability import Preference
from .data import Dataset
from .errors import ConfigurationError
from .explainer import (
    OBJECTIVE_NAMES,
    CounterfactualSet,
    Explainer,
    explain,
    validate_modules,
)


def feature_diversity(changed_sets: list[set]) -> float:
    """1 minus the mean pairwise Jaccard index of changed-feature name sets."""
    n = len(changed_sets)
    if n < 2:
        raise ValueError("feature diversity needs at least 2 explanations")
    total = 0.0
    for a, b in combinations(changed_sets, 2):
        union = a | b
        total += (len(a & b) / len(union)) if union else 1.0
    return float(1.0 - total / (n * (n - 1) / 2))


def value_diversity(explanations: list[dict], tol: float = 1e-9) -> float:
    """1 minus the mean pairwise fraction of equal values on shared changed
    features; pairs that share no changed feature count as fully diverse."""
    n = len(explanations)
    if n < 2:
        raise ValueError("value diversity needs at least 2 explanations")
    total = 0.0
    for a, b in combinations(explanations, 2):
        common = set(a) & set(b)
        if not common:
            continue
        equal = sum(1 for k in common if _values_equal(a[k], b[k], tol))
        total += equal / len(common)
    return float(1.0 - total / (n * (n - 1) / 2))


def _values_equal(u, v, tol: float) -> bool:
    if isinstance(u, str) or isinstance(v, str):
        return str(u) == str(v)
    return abs(float(u) - float(v)) <= tol


@dataclass(frozen=True)
class ConsistencyGroup:
    """Declared ground-truth relation between correlated features.

    ``linear``: feature_y == a * feature_x + b within `tol`.
    ``bijection``: feature_y == mapping[feature_x] exactly.
    A counterfactual keeps the group consistent when either no member
    changed or the relation holds on its values.
    """

    kind: str
    feature_x: str
    feature_y: str
    a: float = 1.0
    b: float = 0.0
    tol: float = 1e-6
    mapping: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in ("linear", "bijection"):
            raise ConfigurationError(f"unknown consistency group kind {self.kind!r}")

    @property
    def members(self) -> set[str]:
        return {self.feature_x, self.feature_y}

    def consistent(self, values: dict, changed: set[str]) -> bool:
        if not (self.members & changed):
            return True
        x, y = values[self.feature_x], values[self.feature_y]
        if self.kind == "linear":
            return abs(float(y) - (self.a * float(x) + self.b)) <= self.tol
        lookup = dict(self.mapping)
        return str(y) == lookup.get(str(x))


def coherency_rate(
    sets: list[CounterfactualSet],
    groups: list[ConsistencyGroup],
    feature_names: list[str],
) -> float:
    """Fraction of counterfactuals keeping every declared group consistent."""
    for g in groups:
        for name in g.members:
            if name not in feature_names:
                raise ConfigurationError(f"consistency group names unknown feature {name!r}")
    total = 0
    consistent = 0
    for cf_set in sets:
        for cf in cf_set.counterfactuals:
            values = dict(zip(feature_names, cf.values))
            changed = set(cf.changed)
            total += 1
            if all(g.consistent(values, changed) for g in groups):
                consistent += 1
    return 1.0 if total == 0 else consistent / total


@dataclass
class ConfigResult:
    """Aggregates for one module configuration."""

    modules: tuple[int, ...]
    objective_mean: dict[str, float]
    objective_std: dict[str, float]
    coherency_rate: float | None
    feature_diversity_mean: float | None
    value_diversity_mean: float | None
    seconds_per_explanation: float
    n_inputs: int
    n_counterfactuals: int
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "modules": list(self.modules),
            "objective_mean": self.objective_mean,
            "objective_std": self.objective_std,
            "coherency_rate": self.coherency_rate,
            "feature_diversity_mean": self.feature_diversity_mean,
            "value_diversity_mean": self.value_diversity_mean,
            "seconds_per_explanation": self.seconds_per_explanation,
            "n_inputs": self.n_inputs,
            "n_counterfactuals": self.n_counterfactuals,
            "errors": self.errors,
        }


@dataclass
class BenchmarkReport:
    results: list[ConfigResult]

    def to_dict(self) -> dict:
        return {"results": [r.to_dict() for r in self.results]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_table(self) -> str:
        """Aligned plain-text table, one row per configuration."""
        header = ["config"] + [f"{name}" for name in OBJECTIVE_NAMES] + [
            "coherency_rate",
            "d_F",
            "d_V",
            "sec/expl",
        ]
        rows = [header]
        for r in self.results:
            cells = ["{" + ",".join(str(m) for m in r.modules) + "}"]
            for name in OBJECTIVE_NAMES:
                cells.append(f"{r.objective_mean[name]:.2f} ± {r.objective_std[name]:.1f}")
            cells.append("-" if r.coherency_rate is None else f"{r.coherency_rate:.2f}")
            cells.append(
                "-" if r.feature_diversity_mean is None else f"{r.feature_diversity_mean:.2f}"
            )
            cells.append(
                "-" if r.value_diversity_mean is None else f"{r.value_diversity_mean:.2f}"
            )
            cells.append(f"{r.seconds_per_explanation:.3f}")
            rows.append(cells)
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines = []
        for i, row in enumerate(rows):
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
            if i == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def run_benchmark(
    explainer: Explainer,
    test: Dataset,
    configs: list,
    n_inputs: int,
    N: int = 10,
    seed: int = 0,
    prefs: Preference | None = None,
    groups: list[ConsistencyGroup] | None = None,
) -> BenchmarkReport:
    """Explain the first `n_inputs` test rows under each configuration.

    The explainer must be fitted with the union of all requested modules;
    all seven objectives are measured for every configuration. Per-input
    failures are recorded and the remaining inputs still aggregate.
    """
    feature_names = [f.name for f in explainer.features]
    n_inputs = min(n_inputs, test.n_rows)
    results = []
    for config in configs:
        active = validate_modules(config)
        per_objective: dict[str, list[float]] = {k: [] for k in OBJECTIVE_NAMES}
        d_f_values: list[float] = []
        d_v_values: list[float] = []
        sets: list[CounterfactualSet] = []
        errors: list[str] = []
        elapsed = 0.0
        for i in range(n_inputs):
            t0 = time.perf_counter()
            try:
                cf_set = explain(
                    explainer,
                    test.raw_rows[i],
                    prefs=prefs,
                    N=N,
                    modules=active,
                    seed=seed + i,
                )
            except Exception as exc:
                errors.append(f"input {i}: {exc}")
                continue
            elapsed += time.perf_counter() - t0
            sets.append(cf_set)
            for cf in cf_set.counterfactuals:
                for k in OBJECTIVE_NAMES:
                    per_objective[k].append(cf.objectives[k])
            if len(cf_set.counterfactuals) >= 2:
                d_f_values.append(
                    feature_diversity([set(cf.changed) for cf in cf_set.counterfactuals])
                )
                d_v_values.append(
                    value_diversity(
                        [
                            {
                                k: v
                                for k, v in zip(feature_names, cf.values)
                                if k in cf.changed
                            }
                            for cf in cf_set.counterfactuals
                        ]
                    )
                )
        n_cfs = len(per_objective["outcome"])
        results.append(
            ConfigResult(
                modules=tuple(sorted(active)),
                objective_mean={
                    k: float(np.mean(v)) if v else 0.0 for k, v in per_objective.items()
                },
                objective_std={
                    k: float(np.std(v)) if v else 0.0 for k, v in per_objective.items()
                },
                coherency_rate=(
                    coherency_rate(sets, groups, feature_names) if groups is not None else None
                ),
                feature_diversity_mean=float(np.mean(d_f_values)) if d_f_values else None,
                value_diversity_mean=float(np.mean(d_v_values)) if d_v_values else None,
                seconds_per_explanation=elapsed / len(sets) if sets else 0.0,
                n_inputs=len(sets),
                n_counterfactuals=n_cfs,
                errors=errors,
            )
        )
    return BenchmarkReport(results=results)

"""User preference constraints and the actionability cost.

A preference is a set of per-feature constraint triples (feature,
constraint, importance). The actionability cost of a candidate is the sum
of importances of violated constraints. Constraint kinds follow the
constraint language: fix, l, g, le, ge for numerics (l/g read by their
mnemonics: strictly less/greater than the current value), a [lb, ub] range
for numerics, fix and a value set for categoricals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .data import CATEGORICAL, NUMERICAL, FeatureMeta
from .errors import ConfigurationError

NUMERIC_KINDS = ("fix", "l", "g", "le", "ge", "range")
CATEGORICAL_KINDS = ("fix", "set")
FIX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Constraint:
    """One constraint of the preference language."""

    kind: str
    lb: float = 0.0
    ub: float = 0.0
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in set(NUMERIC_KINDS) | set(CATEGORICAL_KINDS):
            raise ConfigurationError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "range" and self.lb > self.ub:
            raise ConfigurationError(f"range lower bound {self.lb} exceeds upper bound {self.ub}")
        if self.kind == "set" and not self.values:
            raise ConfigurationError("set constraint needs at least one value")

    def to_dict(self) -> dict:
        doc = {"op": self.kind}
        if self.kind == "range":
            doc["lb"] = self.lb
            doc["ub"] = self.ub
        if self.kind == "set":
            doc["values"] = list(self.values)
        return doc


def check_satisfiability(constraint: Constraint, meta: FeatureMeta, old_value, new_value) -> bool:
    """Whether the new (raw) value satisfies the constraint given the old one."""
    kind = constraint.kind
    if meta.kind == NUMERICAL:
        if kind not in NUMERIC_KINDS:
            raise ConfigurationError(
                f"constraint {kind!r} cannot apply to numerical feature {meta.name!r}",
                code="kind_mismatch",
                field=meta.name,
            )
        old, new = float(old_value), float(new_value)
        if kind == "fix":
            return abs(new - old) <= FIX_TOLERANCE
        if kind == "l":
            return new < old
        if kind == "g":
            return new > old
        if kind == "le":
            return new <= old
        if kind == "ge":
            return new >= old
        return constraint.lb <= new <= constraint.ub
    if kind not in CATEGORICAL_KINDS:
        raise ConfigurationError(
            f"constraint {kind!r} cannot apply to categorical feature {meta.name!r}",
            code="kind_mismatch",
            field=meta.name,
        )
    if kind == "fix":
        return str(new_value) == str(old_value)
    return str(new_value) in constraint.values


@dataclass(frozen=True)
class Preference:
    """Validated constraint triples, at most one per feature."""

    items: tuple[tuple[str, Constraint, float], ...] = ()

    def __post_init__(self):
        seen = set()
        for name, _, importance in self.items:
            if name in seen:
                raise ConfigurationError(f"duplicate constraint for feature {name!r}", field=name)
            seen.add(name)
            if not np.isfinite(importance) or importance <= 0:
                raise ConfigurationError(
                    f"importance for {name!r} must be a positive finite number", field=name
                )

    def __len__(self) -> int:
        return len(self.items)

    def to_dict(self) -> dict:
        doc = {}
        for name, constraint, importance in self.items:
            entry = constraint.to_dict()
            entry["importance"] = importance
            doc[name] = entry
        return doc


def validate_preference(prefs: Preference, metas: list[FeatureMeta]) -> None:
    """Check every triple against the feature schema (names and kinds)."""
    by_name = {m.name: m for m in metas}
    for name, constraint, _ in prefs.items:
        meta = by_name.get(name)
        if meta is None:
            raise ConfigurationError(f"unknown feature {name!r} in preferences", field=name)
        if meta.kind == NUMERICAL and constraint.kind not in NUMERIC_KINDS:
            raise ConfigurationError(
                f"constraint {constraint.kind!r} cannot apply to numerical feature {name!r}",
                code="kind_mismatch",
                field=name,
            )
        if meta.kind == CATEGORICAL and constraint.kind not in CATEGORICAL_KINDS:
            raise ConfigurationError(
                f"constraint {constraint.kind!r} cannot apply to categorical feature {name!r}",
                code="kind_mismatch",
                field=name,
            )
        if meta.kind == CATEGORICAL and constraint.kind == "set":
            for v in constraint.values:
                if v not in meta.categories:
                    raise ConfigurationError(
                        f"set constraint on {name!r} names unknown category {v!r}", field=name
                    )


def actionability_cost(x_raw, xp_raw, prefs: Preference, metas: list[FeatureMeta]) -> float:
    """Sum of importances of constraints the candidate violates."""
    by_name = {m.name: (i, m) for i, m in enumerate(metas)}
    eta = 0.0
    for name, constraint, importance in prefs.items:
        if name not in by_name:
            raise ConfigurationError(f"unknown feature {name!r} in preferences", field=name)
        j, meta = by_name[name]
        if not check_satisfiability(constraint, meta, x_raw[j], xp_raw[j]):
            eta += importance
    return float(eta)


def _parse_constraint(name: str, entry: dict, meta: FeatureMeta) -> tuple[Constraint, float]:
    if not isinstance(entry, dict):
        raise ConfigurationError(f"preference for {name!r} must be an object", field=name)
    unknown = set(entry) - {"op", "lb", "ub", "values", "importance"}
    if unknown:
        raise ConfigurationError(
            f"preference for {name!r} has unknown keys {sorted(unknown)}", field=name
        )
    op = entry.get("op")
    if not isinstance(op, str):
        raise ConfigurationError(f"preference for {name!r} is missing 'op'", field=name)
    if op not in set(NUMERIC_KINDS) | set(CATEGORICAL_KINDS):
        raise ConfigurationError(
            f"unknown constraint kind {op!r} for feature {name!r}", field=name
        )
    importance = entry.get("importance", 1.0)
    if not isinstance(importance, (int, float)) or isinstance(importance, bool):
        raise ConfigurationError(f"importance for {name!r} must be a number", field=name)
    if op == "range":
        if "lb" not in entry or "ub" not in entry:
            raise ConfigurationError(f"range constraint on {name!r} needs lb and ub", field=name)
        constraint = Constraint(kind="range", lb=float(entry["lb"]), ub=float(entry["ub"]))
    elif op == "set":
        values = entry.get("values")
        if not isinstance(values, list) or not values:
            raise ConfigurationError(
                f"set constraint on {name!r} needs a non-empty 'values' list", field=name
            )
        constraint = Constraint(kind="set", values=tuple(str(v) for v in values))
    else:
        constraint = Constraint(kind=op)
    return constraint, float(importance)


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ConfigurationError(f"duplicate constraint for feature {key!r}", field=key)
        seen[key] = value
    return seen


def parse_preferences(text_or_doc, metas: list[FeatureMeta]) -> Preference:
    """Parse and validate a preference document against the feature schema.

    Accepts the JSON text of a mapping ``feature -> {op, lb/ub/values,
    importance}`` (importance defaults to 1.0) or an already-parsed mapping.
    """
    if isinstance(text_or_doc, str):
        try:
            doc = json.loads(text_or_doc, object_pairs_hook=_reject_duplicate_keys)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"preferences are not valid JSON: {exc}") from exc
    else:
        doc = text_or_doc
    if not isinstance(doc, dict):
        raise ConfigurationError("preferences must be a JSON object keyed by feature name")
    by_name = {m.name: m for m in metas}
    items = []
    for name, entry in doc.items():
        meta = by_name.get(name)
        if meta is None:
            raise ConfigurationError(f"unknown feature {name!r} in preferences", field=name)
        constraint, importance = _parse_constraint(name, entry, meta)
        items.append((name, constraint, importance))
    prefs = Preference(items=tuple(items))
    validate_preference(prefs, metas)
    return prefs

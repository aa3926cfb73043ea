"""Two-phase orchestration: fit sub-models, then optimize counterfactuals.

Fitting builds whatever the active modules need (soundness models for
module 2, correlation models for module 3) on the training split. Explaining
assembles the active objective vector, runs the NSGA-III engine over encoded
genotypes, and distills the final population into at most N distinct valid
counterfactuals.

Objective slots follow the module order: outcome, distance, sparsity
(module 1), proximity and connectedness negated into minimization slots
(module 2), coherency (module 3), actionability (module 4). Reported
breakdowns always contain all seven objectives in their natural orientation
(proximity/connectedness as 0/1 fitness values).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .actionability import Preference, validate_preference
from .coherency import (
    CoherencyConfig,
    CorrelationModel,
    candidate_correlation_models,
    effective_tau,
)
from .data import (
    CATEGORICAL,
    CLASSIFICATION,
    NUMERICAL,
    REGRESSION,
    Dataset,
    FeatureDecl,
    FeatureMeta,
    ResponseRanges,
    response_ranges,
)
from .errors import ConfigurationError
from .models import RidgeModel
from .moo import MooConfig, Population, evolve, fast_nondominated_sort
from .predictors import Predictor, predictor_from_spec
from .soundness import ConnectednessModel, ProximityModel, SoundnessModels, fit_soundness
from .validity import CHANGE_TOLERANCE, DesiredOutcome, hinge_outcome_cost, range_outcome_cost

OBJECTIVE_NAMES = (
    "outcome",
    "distance",
    "sparsity",
    "proximity",
    "connectedness",
    "coherency",
    "actionability",
)

ALL_MODULES = frozenset({1, 2, 3, 4})


def validate_modules(modules) -> frozenset[int]:
    active = frozenset(int(m) for m in modules)
    if not active <= ALL_MODULES:
        raise ConfigurationError(f"modules must be a subset of {{1,2,3,4}}, got {sorted(active)}")
    if 1 not in active:
        raise ConfigurationError("module 1 (validity) must always be active")
    return active


def objective_count(modules: frozenset[int]) -> int:
    return 3 + 2 * (2 in modules) + (3 in modules) + (4 in modules)


@dataclass(frozen=True)
class SoundnessConfig:
    theta: float = 1.0
    eps_percentile: float = 90.0
    min_cluster_size: int = 2


@dataclass(frozen=True)
class MooDefaults:
    """Optimizer hyper-parameters independent of the objective count."""

    generations: int = 10
    pc: float = 0.6
    pm: float = 0.3
    eta_m: float = 20.0
    divisions: int | None = None

    def config(self, n_objectives: int, seed: int) -> MooConfig:
        return MooConfig(
            objective_count=n_objectives,
            generations=self.generations,
            pc=self.pc,
            pm=self.pm,
            eta_m=self.eta_m,
            divisions=self.divisions,
            seed=seed,
        )


@dataclass
class Explainer:
    """Fitted artifact: training data, predictor, sub-models, configuration."""

    train: Dataset
    predictor: Predictor
    modules: frozenset[int]
    p_threshold: float = 0.5
    ranges: ResponseRanges | None = None
    soundness: SoundnessModels | None = None
    correlations: dict[int, CorrelationModel] | None = None
    soundness_cfg: SoundnessConfig = SoundnessConfig()
    coherency_cfg: CoherencyConfig = CoherencyConfig()
    moo: MooDefaults = MooDefaults()
    seed: int = 0
    correlation_tau: float | None = None

    @property
    def features(self) -> list[FeatureMeta]:
        return self.train.features

    def predict_payload(self, x_enc: np.ndarray) -> dict:
        """Prediction of one encoded row in report form."""
        if self.train.task == CLASSIFICATION:
            proba = self.predictor.predict_proba(x_enc)
            c = int(np.argmax(proba))
            return {
                "class": self.train.class_labels[c],
                "class_index": c,
                "probabilities": [float(p) for p in proba],
            }
        r = self.predictor.predict(x_enc)
        payload = {"response": float(r)}
        if self.ranges is not None:
            payload["interval"] = self.ranges.interval_of(r)
        return payload


def fit_explainer(
    train: Dataset,
    predictor: Predictor,
    modules=(1, 2, 3, 4),
    p_threshold: float = 0.5,
    response_quantiles: int = 4,
    soundness_cfg: SoundnessConfig = SoundnessConfig(),
    coherency_cfg: CoherencyConfig = CoherencyConfig(),
    moo: MooDefaults = MooDefaults(),
    seed: int = 0,
) -> Explainer:
    """Fit phase: build only the sub-models the active modules need."""
    active = validate_modules(modules)
    if predictor.task != train.task:
        raise ConfigurationError(
            f"predictor task {predictor.task!r} does not match dataset task {train.task!r}"
        )
    ranges = None
    if train.task == REGRESSION:
        ranges = response_ranges(train.y, response_quantiles)
    soundness = None
    if 2 in active:
        soundness = fit_soundness(
            train,
            predictor,
            ranges,
            theta=soundness_cfg.theta,
            eps_percentile=soundness_cfg.eps_percentile,
            min_cluster_size=soundness_cfg.min_cluster_size,
        )
    correlations = None
    correlation_tau = None
    if 3 in active:
        candidates = candidate_correlation_models(train, coherency_cfg, seed)
        correlation_tau = effective_tau(candidates, coherency_cfg)
        correlations = (
            {}
            if correlation_tau is None
            else {c.feature: c for c in candidates if c.score >= correlation_tau}
        )
    return Explainer(
        train=train,
        predictor=predictor,
        modules=active,
        p_threshold=p_threshold,
        ranges=ranges,
        soundness=soundness,
        correlations=correlations,
        soundness_cfg=soundness_cfg,
        coherency_cfg=coherency_cfg,
        moo=moo,
        seed=seed,
        correlation_tau=correlation_tau,
    )


def desired_outcome_for(explainer: Explainer, x_enc: np.ndarray) -> DesiredOutcome:
    """Default target: the opposite class (binary) or the neighbor interval."""
    if explainer.train.task == CLASSIFICATION:
        if explainer.train.n_classes != 2:
            raise ConfigurationError(
                "multiclass explanation requires an explicit desired class"
            )
        current = int(np.argmax(explainer.predictor.predict_proba(x_enc)))
        return DesiredOutcome(
            kind="class", class_index=1 - current, threshold=explainer.p_threshold
        )
    assert explainer.ranges is not None
    k = explainer.ranges.interval_of(explainer.predictor.predict(x_enc))
    k_target = k + 1 if k + 1 < explainer.ranges.n_intervals else k - 1
    lb, ub = explainer.ranges.intervals[k_target]
    return DesiredOutcome(kind="range", lb=lb, ub=ub)


class ObjectiveEvaluator:
    """Batched objective computation for one explain() call.

    Works entirely on encoded genotype matrices; all seven objectives can be
    produced for reporting, while `evaluate` emits only the active
    minimization slots in module order.
    """

    def __init__(self, explainer: Explainer, x_enc: np.ndarray, desired: DesiredOutcome,
                 prefs: Preference | None, modules: frozenset[int]):
        self.explainer = explainer
        self.x_enc = np.asarray(x_enc, dtype=float)
        self.desired = desired
        self.prefs = prefs
        self.modules = modules
        metas = explainer.features
        self.stds = np.array([m.std if m.kind == NUMERICAL else 0.0 for m in metas])
        self.widths = np.array([m.width if m.kind == NUMERICAL else 0.0 for m in metas])
        self.is_numeric = np.array([m.kind == NUMERICAL for m in metas])

    # -- objective pieces ------------------------------------------------

    def _predict(self, G: np.ndarray):
        """(outcome cost, candidate group) for a genotype batch."""
        ex = self.explainer
        if ex.train.task == CLASSIFICATION:
            proba = ex.predictor.predict_proba_batch(G)
            groups = proba.argmax(axis=1)
            if self.desired.kind != "class":
                raise ConfigurationError("classification explainers need a class target")
            cost = hinge_outcome_cost(proba[:, self.desired.class_index], self.desired.threshold)
            return cost, groups
        responses = ex.predictor.predict_batch(G)
        if ex.ranges is not None:
            groups = np.array([ex.ranges.interval_of(r) for r in responses])
        else:
            groups = np.zeros(G.shape[0], dtype=int)
        cost = range_outcome_cost(responses, self.desired.lb, self.desired.ub)
        return cost, groups

    def _deltas(self, G: np.ndarray) -> np.ndarray:
        """Per-feature Gower deltas of each candidate against the input."""
        diff = np.abs(G - self.x_enc)
        deltas = np.where(diff > CHANGE_TOLERANCE, 1.0, 0.0)
        num = self.is_numeric & (self.widths > 0)
        deltas[:, num] = np.minimum(1.0, diff[:, num] * self.stds[num] / self.widths[num])
        return deltas

    def _changed(self, G: np.ndarray) -> np.ndarray:
        return np.abs(G - self.x_enc) > CHANGE_TOLERANCE

    def _soundness_scores(self, G: np.ndarray, groups: np.ndarray):
        models = self.explainer.soundness
        n = G.shape[0]
        if models is None:
            return np.zeros(n), np.zeros(n)
        prox = np.zeros(n)
        conn = np.zeros(n)
        for g in np.unique(groups):
            mask = groups == g
            prox[mask] = models.o_proximity_batch(G[mask], int(g))
            conn[mask] = models.o_connectedness_batch(G[mask], int(g))
        return prox, conn

    def _coherency(self, G: np.ndarray, changed: np.ndarray) -> np.ndarray:
        models = self.explainer.correlations
        xi = np.zeros(G.shape[0])
        if not models:
            return xi
        metas = self.explainer.features
        for j, cm in models.items():
            meta = metas[j]
            inputs = G[:, cm.inputs]
            if meta.kind == CATEGORICAL:
                predicted = cm.model.predict(inputs)
                delta = (np.rint(G[:, j]).astype(int) != predicted).astype(float)
            else:
                predicted = cm.model.predict(inputs)
                raw = G[:, j] * meta.std + meta.mean
                if meta.width > 0:
                    delta = np.minimum(1.0, np.abs(raw - predicted) / meta.width)
                else:
                    delta = (np.abs(raw - predicted) > CHANGE_TOLERANCE).astype(float)
            xi += cm.score * delta * changed[:, j]
        return xi

    def _actionability(self, G: np.ndarray) -> np.ndarray:
        eta = np.zeros(G.shape[0])
        if self.prefs is None or len(self.prefs) == 0:
            return eta
        metas = self.explainer.features
        index_of = {m.name: i for i, m in enumerate(metas)}
        for name, constraint, importance in self.prefs.items:
            j = index_of[name]
            meta = metas[j]
            if meta.kind == NUMERICAL:
                old = float(self.x_enc[j]) * meta.std + meta.mean
                new = G[:, j] * meta.std + meta.mean
                kind = constraint.kind
                if kind == "fix":
                    ok = np.abs(new - old) <= 1e-9
                elif kind == "l":
                    ok = new < old
                elif kind == "g":
                    ok = new > old
                elif kind == "le":
                    ok = new <= old
                elif kind == "ge":
                    ok = new >= old
                else:  # range
                    ok = (new >= constraint.lb) & (new <= constraint.ub)
            else:
                codes = np.rint(G[:, j]).astype(int)
                if constraint.kind == "fix":
                    ok = codes == int(round(float(self.x_enc[j])))
                else:  # set
                    allowed = {meta.categories.index(v) for v in constraint.values}
                    ok = np.isin(codes, sorted(allowed))
            eta += np.where(ok, 0.0, importance)
        return eta

    # -- public API ------------------------------------------------------

    def breakdown(self, G: np.ndarray) -> dict[str, np.ndarray]:
        """All seven objectives (natural orientation) for a genotype batch."""
        G = np.atleast_2d(np.asarray(G, dtype=float))
        outcome, groups = self._predict(G)
        deltas = self._deltas(G)
        changed = self._changed(G)
        prox, conn = self._soundness_scores(G, groups)
        return {
            "outcome": outcome,
            "distance": deltas.mean(axis=1),
            "sparsity": changed.sum(axis=1).astype(float),
            "proximity": prox,
            "connectedness": conn,
            "coherency": self._coherency(G, changed),
            "actionability": self._actionability(G),
        }

    def evaluate(self, G: np.ndarray) -> np.ndarray:
        """Active minimization slots in module order (fitness slots negated)."""
        b = self.breakdown(G)
        cols = [b["outcome"], b["distance"], b["sparsity"]]
        if 2 in self.modules:
            cols.extend([-b["proximity"], -b["connectedness"]])
        if 3 in self.modules:
            cols.append(b["coherency"])
        if 4 in self.modules:
            cols.append(b["actionability"])
        return np.column_stack(cols)


def initialize_population(
    x_enc: np.ndarray,
    desired: DesiredOutcome,
    explainer: Explainer,
    pop_size: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Seed the optimizer: the input itself, nearest desired-group training
    rows, random training rows, and uniform random genotypes."""
    train = explainer.train
    n_neighbors = int(0.3 * pop_size)
    n_rows = int(0.3 * pop_size)

    if train.task == CLASSIFICATION:
        predicted = explainer.predictor.predict_class_batch(train.X)
        pool = np.flatnonzero(predicted == desired.class_index)
    else:
        responses = explainer.predictor.predict_batch(train.X)
        pool = np.flatnonzero((responses >= desired.lb) & (responses <= desired.ub))
    neighbors = np.empty((0, train.n_features))
    if pool.size > 0:
        d = np.sqrt(((train.X[pool] - x_enc) ** 2).sum(axis=1))
        take = pool[np.argsort(d, kind="stable")[:n_neighbors]]
        neighbors = train.X[take]

    replace_rows = train.n_rows < n_rows
    row_idx = rng.choice(train.n_rows, size=n_rows, replace=replace_rows)
    random_rows = train.X[row_idx]

    n_uniform = pop_size - 1 - neighbors.shape[0] - n_rows
    lo = np.array([m.encoded_bounds()[0] for m in train.features])
    hi = np.array([m.encoded_bounds()[1] for m in train.features])
    uniform = lo + rng.random((n_uniform, train.n_features)) * (hi - lo)
    cat = [j for j, m in enumerate(train.features) if m.kind == CATEGORICAL]
    for j in cat:
        uniform[:, j] = rng.integers(0, train.features[j].n_categories, size=n_uniform)

    return np.vstack([x_enc.reshape(1, -1), neighbors, random_rows, uniform])


@dataclass
class Counterfactual:
    """One generated recourse: decoded row, objective breakdown, diff."""

    values: list
    objectives: dict[str, float]
    changed: list[str]
    prediction: dict

    def to_dict(self) -> dict:
        return {
            "values": self.values,
            "objectives": self.objectives,
            "changed": self.changed,
            "prediction": self.prediction,
        }


@dataclass
class CounterfactualSet:
    """Up to N distinct counterfactuals for one input, best first.

    Ordering: valid candidates only (desired outcome reached), deduplicated
    as raw rows, then by ascending weighted sum of min-max-normalized costs
    with Pareto front rank as the tie-break. The weights encode the module
    hierarchy (soundness 8, coherency 4, actionability 2, distance/sparsity
    1): a sound and coherent recourse beats a sparser but unsound one. When
    nothing reaches the desired outcome the same ranking runs without the
    validity filter and `valid` is False.
    """

    x: list
    x_prediction: dict
    desired: DesiredOutcome
    counterfactuals: list[Counterfactual]
    valid: bool
    seed: int
    modules: tuple[int, ...]
    requested: int

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "x_prediction": self.x_prediction,
            "desired": self.desired.to_dict(),
            "counterfactuals": [cf.to_dict() for cf in self.counterfactuals],
            "valid": self.valid,
            "seed": self.seed,
            "modules": list(self.modules),
            "requested": self.requested,
        }


# selection weight per objective slot, by module: validity tie-breakers get
# weight 1, soundness dominates (8), then coherency (4), then actionability
# (2), matching the framework's module priority
HIERARCHY_WEIGHTS = {
    "outcome": 1.0,
    "distance": 1.0,
    "sparsity": 1.0,
    "proximity": 8.0,
    "connectedness": 8.0,
    "coherency": 4.0,
    "actionability": 2.0,
}


def active_slot_names(modules: frozenset[int]) -> list[str]:
    names = ["outcome", "distance", "sparsity"]
    if 2 in modules:
        names += ["proximity", "connectedness"]
    if 3 in modules:
        names.append("coherency")
    if 4 in modules:
        names.append("actionability")
    return names


def select_final(
    population: Population,
    evaluator: ObjectiveEvaluator,
    N: int,
    explainer: Explainer,
) -> tuple[np.ndarray, bool]:
    """Pick at most N distinct genotypes from the evolved population."""
    G = population.genotypes
    active = population.objectives
    valid_mask = active[:, 0] == 0.0
    valid = bool(valid_mask.any())
    candidates = np.flatnonzero(valid_mask) if valid else np.arange(G.shape[0])

    # deduplicate on decoded raw rows, keeping first occurrences
    seen: set[tuple] = set()
    unique: list[int] = []
    for i in candidates:
        key = tuple(explainer.train.decode_row(G[i]))
        if key not in seen:
            seen.add(key)
            unique.append(int(i))
    sub = active[unique]

    fronts = fast_nondominated_sort(sub)
    rank = np.zeros(len(unique), dtype=int)
    for r, front in enumerate(fronts):
        for i in front:
            rank[i] = r
    lo, hi = sub.min(axis=0), sub.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    names = active_slot_names(evaluator.modules)
    weights = np.array([HIERARCHY_WEIGHTS[name] for name in names])
    # the weighted score leads: rank-first interleaves one candidate per
    # soundness combination from every front, defeating the module hierarchy
    score = (((sub - lo) / span) * weights).sum(axis=1)
    order = sorted(range(len(unique)), key=lambda i: (score[i], rank[i], i))

    # diversify changed-feature sets without crossing hierarchy strata: within
    # candidates of identical active module-block costs (p, c, xi, eta), cycle
    # across distinct change sets so the returned N vary in which features move
    block_cols = [k for k, name in enumerate(names) if name not in ("outcome", "distance", "sparsity")]
    changed_sets = [
        frozenset(np.flatnonzero(evaluator._changed(G[i : i + 1])[0]).tolist()) for i in unique
    ]
    strata: dict[tuple, dict[frozenset, list[int]]] = {}
    for pos in order:
        key = tuple(sub[pos, k] for k in block_cols)
        strata.setdefault(key, {}).setdefault(changed_sets[pos], []).append(pos)
    final_order: list[int] = []
    for groups in strata.values():
        queues = [list(members) for members in groups.values()]
        while queues:
            remaining = []
            for q in queues:
                final_order.append(q.pop(0))
                if q:
                    remaining.append(q)
            queues = remaining
    chosen = [unique[i] for i in final_order[:N]]
    return G[chosen], valid


def explain(
    explainer: Explainer,
    x_raw,
    desired: DesiredOutcome | None = None,
    prefs: Preference | None = None,
    N: int = 10,
    modules=None,
    seed: int | None = None,
) -> CounterfactualSet:
    """Explain one input row (raw values in dataset feature order)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    active = validate_modules(modules) if modules is not None else explainer.modules
    if not active <= explainer.modules:
        raise ConfigurationError(
            f"explainer was fitted for modules {sorted(explainer.modules)}; "
            f"cannot serve {sorted(active)}"
        )
    if 4 in active and prefs is None:
        raise ConfigurationError("module 4 (actionability) requires preferences")
    if prefs is not None:
        validate_preference(prefs, explainer.features)
    seed = explainer.seed if seed is None else int(seed)

    x_enc = explainer.train.encode_row(list(x_raw))
    if desired is None:
        desired = desired_outcome_for(explainer, x_enc)
    if explainer.train.task == CLASSIFICATION:
        if desired.kind != "class":
            raise ConfigurationError("classification explainers need a class target")
        if not 0 <= desired.class_index < explainer.train.n_classes:
            raise ConfigurationError(f"desired class index {desired.class_index} out of range")
    elif desired.kind != "range":
        raise ConfigurationError("regression explainers need a range target")

    evaluator = ObjectiveEvaluator(explainer, x_enc, desired, prefs, active)
    cfg = explainer.moo.config(objective_count(active), seed)
    rng = np.random.default_rng(seed)
    init = initialize_population(x_enc, desired, explainer, cfg.population_size, rng)

    # survival optimizes objective-space diversity, not validity, so valid
    # candidates get crowded out of the final population; keep every valid
    # genotype that survived a generation and select from the whole pool
    archive: dict[bytes, np.ndarray] = {}

    def collect(gen: int, pop: Population) -> None:
        for g in pop.genotypes[pop.objectives[:, 0] == 0.0]:
            archive.setdefault(g.tobytes(), g.copy())

    final = evolve(evaluator.evaluate, init, explainer.features, cfg, on_generation=collect)
    pool = final.genotypes
    if archive:
        pool = np.vstack([final.genotypes, np.stack(list(archive.values()))])
    candidates = Population(genotypes=pool, objectives=evaluator.evaluate(pool))
    chosen, valid = select_final(candidates, evaluator, N, explainer)

    breakdown = evaluator.breakdown(chosen)
    counterfactuals = []
    for i in range(chosen.shape[0]):
        raw = explainer.train.decode_row(chosen[i])
        changed = [
            explainer.features[j].name
            for j in np.flatnonzero(evaluator._changed(chosen[i : i + 1])[0])
        ]
        counterfactuals.append(
            Counterfactual(
                values=raw,
                objectives={k: float(breakdown[k][i]) for k in OBJECTIVE_NAMES},
                changed=changed,
                prediction=explainer.predict_payload(chosen[i]),
            )
        )
    return CounterfactualSet(
        x=list(x_raw),
        x_prediction=explainer.predict_payload(x_enc),
        desired=desired,
        counterfactuals=counterfactuals,
        valid=valid,
        seed=seed,
        modules=tuple(sorted(active)),
        requested=N,
    )


# -- artifact serialization ----------------------------------------------


def _meta_to_doc(meta: FeatureMeta) -> dict:
    doc = {"name": meta.name, "kind": meta.kind}
    if meta.kind == NUMERICAL:
        doc.update({"lo": meta.lo, "hi": meta.hi, "mean": meta.mean, "std": meta.std})
    else:
        doc["categories"] = list(meta.categories)
    return doc


def _meta_from_doc(doc: dict) -> FeatureMeta:
    if doc["kind"] == NUMERICAL:
        return FeatureMeta(
            name=doc["name"], kind=NUMERICAL,
            lo=doc["lo"], hi=doc["hi"], mean=doc["mean"], std=doc["std"],
        )
    return FeatureMeta(name=doc["name"], kind=CATEGORICAL, categories=tuple(doc["categories"]))


def _dataset_to_doc(ds: Dataset, include_rows: bool = True) -> dict:
    doc = {
        "task": ds.task,
        "target_name": ds.target_name,
        "class_labels": list(ds.class_labels),
        "decls": [
            {
                "name": d.name,
                "kind": d.kind,
                "categories": list(d.categories) if d.categories is not None else None,
            }
            for d in ds.decls
        ],
        "features": [_meta_to_doc(m) for m in ds.features],
    }
    if include_rows:
        doc["rows"] = [[_scalar(v) for v in row] for row in ds.raw_rows]
        doc["targets"] = [_scalar(t) for t in ds.raw_targets]
    return doc


def _scalar(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _dataset_from_doc(doc: dict) -> Dataset:
    features = [_meta_from_doc(m) for m in doc["features"]]
    decls = [
        FeatureDecl(
            name=d["name"],
            kind=d["kind"],
            categories=tuple(d["categories"]) if d["categories"] is not None else None,
        )
        for d in doc["decls"]
    ]
    task = doc["task"]
    class_labels = tuple(doc["class_labels"])
    ds = Dataset(
        features=features,
        X=np.empty((0, len(features))),
        y=np.empty(0),
        task=task,
        target_name=doc["target_name"],
        class_labels=class_labels,
        raw_rows=[list(r) for r in doc["rows"]],
        raw_targets=list(doc["targets"]),
        decls=decls,
    )
    ds.X = np.array([ds.encode_row(r) for r in ds.raw_rows], dtype=float)
    if task == CLASSIFICATION:
        ds.y = np.asarray([ds.class_index(t) for t in ds.raw_targets], dtype=int)
    else:
        ds.y = np.asarray([float(t) for t in ds.raw_targets], dtype=float)
    return ds


def _correlation_model_to_doc(cm: CorrelationModel) -> dict:
    if isinstance(cm.model, RidgeModel):
        model_doc = {
            "type": "ridge",
            "weights": cm.model.weights.tolist(),
            "intercept": cm.model.intercept,
        }
    else:
        from .predictors import _tree_to_dict

        model_doc = {
            "type": "cart",
            "tree": _tree_to_dict(cm.model.root),
            "n_classes": cm.model.n_classes,
        }
    return {
        "feature": cm.feature,
        "inputs": list(cm.inputs),
        "score": cm.score,
        "kind": cm.kind,
        "model": model_doc,
    }


def _correlation_model_from_doc(doc: dict) -> CorrelationModel:
    model_doc = doc["model"]
    if model_doc["type"] == "ridge":
        model = RidgeModel(
            weights=np.asarray(model_doc["weights"], dtype=float),
            intercept=model_doc["intercept"],
        )
    else:
        from .predictors import _tree_from_dict

        model = _tree_from_dict(model_doc["tree"])
        model.n_classes = model_doc["n_classes"]
    return CorrelationModel(
        feature=doc["feature"],
        inputs=list(doc["inputs"]),
        model=model,
        score=doc["score"],
        kind=doc["kind"],
    )


ARTIFACT_FORMAT = "recourse-explainer"
ARTIFACT_VERSION = 1


@dataclass
class Artifact:
    """Serializable bundle: fitted explainer plus the held-out test split."""

    explainer: Explainer
    test: Dataset | None = None

    def to_json(self) -> str:
        ex = self.explainer
        train = ex.train
        soundness_doc = None
        if ex.soundness is not None:
            groups = {}
            for g, prox in ex.soundness.proximity.items():
                rows = ex.soundness.group_rows[g]
                idx = _row_indices(train.X, rows)
                conn = ex.soundness.connectedness[g]
                groups[str(g)] = {
                    "rows": idx,
                    "eps": conn.eps,
                    "clusters": [list(c) for c in conn.clusters],
                }
            soundness_doc = {"groups": groups}
        doc = {
            "format": ARTIFACT_FORMAT,
            "version": ARTIFACT_VERSION,
            "seed": ex.seed,
            "modules": sorted(ex.modules),
            "p_threshold": ex.p_threshold,
            "soundness_cfg": {
                "theta": ex.soundness_cfg.theta,
                "eps_percentile": ex.soundness_cfg.eps_percentile,
                "min_cluster_size": ex.soundness_cfg.min_cluster_size,
            },
            "coherency_cfg": {
                "rho": ex.coherency_cfg.rho,
                "tau": ex.coherency_cfg.tau,
                "train_fraction": ex.coherency_cfg.train_fraction,
                "ridge_lambda": ex.coherency_cfg.ridge_lambda,
                "cart_max_depth": ex.coherency_cfg.cart_max_depth,
            },
            "moo": {
                "generations": ex.moo.generations,
                "pc": ex.moo.pc,
                "pm": ex.moo.pm,
                "eta_m": ex.moo.eta_m,
                "divisions": ex.moo.divisions,
            },
            "ranges": None
            if ex.ranges is None
            else {
                "cut_points": list(ex.ranges.cut_points),
                "intervals": [list(i) for i in ex.ranges.intervals],
            },
            "train": _dataset_to_doc(train),
            "test": None if self.test is None else _dataset_to_doc(self.test),
            "predictor": ex.predictor.spec(),
            "soundness": soundness_doc,
            "correlations": None
            if ex.correlations is None
            else [_correlation_model_to_doc(cm) for cm in ex.correlations.values()],
            "correlation_tau": ex.correlation_tau,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> "Artifact":
        doc = json.loads(text)
        if doc.get("format") != ARTIFACT_FORMAT:
            raise ConfigurationError("not a recourse explainer artifact")
        if doc.get("version") != ARTIFACT_VERSION:
            raise ConfigurationError(f"unsupported artifact version {doc.get('version')!r}")
        train = _dataset_from_doc(doc["train"])
        test = _dataset_from_doc(doc["test"]) if doc.get("test") else None
        predictor = predictor_from_spec(doc["predictor"])
        ranges = None
        if doc.get("ranges"):
            ranges = ResponseRanges(
                cut_points=tuple(doc["ranges"]["cut_points"]),
                intervals=tuple(tuple(i) for i in doc["ranges"]["intervals"]),
            )
        scfg_doc = doc["soundness_cfg"]
        soundness_cfg = SoundnessConfig(
            theta=scfg_doc["theta"],
            eps_percentile=scfg_doc["eps_percentile"],
            min_cluster_size=scfg_doc["min_cluster_size"],
        )
        soundness = None
        if doc.get("soundness"):
            proximity, connectedness, group_rows = {}, {}, {}
            for g_str, entry in doc["soundness"]["groups"].items():
                g = int(g_str)
                rows = train.X[np.asarray(entry["rows"], dtype=int)]
                group_rows[g] = rows
                proximity[g] = ProximityModel(rows=rows, theta=soundness_cfg.theta)
                connectedness[g] = ConnectednessModel(
                    rows=rows,
                    eps=entry["eps"],
                    min_cluster_size=soundness_cfg.min_cluster_size,
                    clusters=[list(c) for c in entry["clusters"]],
                )
            soundness = SoundnessModels(
                proximity=proximity, connectedness=connectedness, group_rows=group_rows
            )
        correlations = None
        if doc.get("correlations") is not None:
            correlations = {
                cm["feature"]: _correlation_model_from_doc(cm) for cm in doc["correlations"]
            }
        ccfg = doc["coherency_cfg"]
        moo_doc = doc["moo"]
        explainer = Explainer(
            train=train,
            predictor=predictor,
            modules=frozenset(doc["modules"]),
            p_threshold=doc["p_threshold"],
            ranges=ranges,
            soundness=soundness,
            correlations=correlations,
            soundness_cfg=soundness_cfg,
            coherency_cfg=CoherencyConfig(
                rho=ccfg["rho"],
                tau=ccfg["tau"],
                train_fraction=ccfg["train_fraction"],
                ridge_lambda=ccfg["ridge_lambda"],
                cart_max_depth=ccfg["cart_max_depth"],
            ),
            moo=MooDefaults(
                generations=moo_doc["generations"],
                pc=moo_doc["pc"],
                pm=moo_doc["pm"],
                eta_m=moo_doc["eta_m"],
                divisions=moo_doc["divisions"],
            ),
            seed=doc["seed"],
            correlation_tau=doc.get("correlation_tau"),
        )
        return cls(explainer=explainer, test=test)

    @classmethod
    def load(cls, path: str) -> "Artifact":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _row_indices(X: np.ndarray, rows: np.ndarray) -> list[int]:
    """Indices of `rows` inside `X` (rows are an exact subset of X)."""
    lookup: dict[bytes, list[int]] = {}
    for i, row in enumerate(X):
        lookup.setdefault(row.tobytes(), []).append(i)
    out = []
    used: dict[bytes, int] = {}
    for row in rows:
        key = row.tobytes()
        k = used.get(key, 0)
        out.append(lookup[key][k])
        used[key] = k + 1
    return out

"""Counterfactual explanations and actionable recourse for tabular models."""

from .actionability import Constraint, Preference, actionability_cost, parse_preferences
from .coherency import CoherencyConfig, CorrelationModel, coherency_cost, fit_correlation_models
from .correlation import correlation_matrix, correlation_ratio, cramers_v, pearson_r
from .data import (
    Dataset,
    FeatureDecl,
    FeatureMeta,
    ResponseRanges,
    load_dataset,
    response_ranges,
    split,
)
from .evaluation import (
    BenchmarkReport,
    coherency_rate,
    feature_diversity,
    run_benchmark,
    value_diversity,
)
from .explainer import (
    Artifact,
    Counterfactual,
    CounterfactualSet,
    Explainer,
    MooDefaults,
    SoundnessConfig,
    desired_outcome_for,
    explain,
    fit_explainer,
)
from .moo import MooConfig, das_dennis_points, evolve, fast_nondominated_sort
from .predictors import Predictor, RemotePredictor, train_reference
from .soundness import epsilon_for_group, fit_soundness, o_connectedness, o_proximity
from .validity import DesiredOutcome, feature_delta, gower_distance, sparsity_cost

__version__ = "0.1.0"

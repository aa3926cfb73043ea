"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. All fixtures are seeded; the whole module runs in a
few minutes on a laptop.
"""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

import oracles
from recourse import synth
from recourse.actionability import Constraint, Preference
from recourse.cli import main as cli_main
from recourse.coherency import CoherencyConfig
from recourse.correlation import correlation_ratio, cramers_v, pearson_r
from recourse.data import FeatureMeta, split
from recourse.evaluation import (
    ConsistencyGroup,
    coherency_rate,
    feature_diversity,
    value_diversity,
)
from recourse.explainer import Artifact, explain, fit_explainer
from recourse.moo import das_dennis_points, fast_nondominated_sort
from recourse.predictors import train_reference
from recourse.service import create_app
from recourse.soundness import ConnectednessModel, ProximityModel, epsilon_for_group, proximity_ratio
from recourse.validity import feature_delta, gower_distance, sparsity_cost


def _report(name: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


# -- shared fixtures -------------------------------------------------------


@pytest.fixture(scope="module")
def blobs_setup():
    dataset = synth.two_blobs(n=625, seed=11)
    train, test = split(dataset, 0.8, seed=1)
    predictor = train_reference(train, "nearest-centroid", seed=0)
    explainer = fit_explainer(train, predictor, modules={1, 2, 3, 4}, seed=0)
    return train, test, explainer


@pytest.fixture(scope="module")
def moons_setup():
    dataset = synth.half_moons(n=625, noise=0.15, seed=7)
    train, test = split(dataset, 0.8, seed=2)
    predictor = train_reference(train, "bagged-stumps", seed=3)
    explainer = fit_explainer(train, predictor, modules={1, 2, 3, 4}, seed=0)
    return train, test, explainer


def _benign_prefs(train):
    numeric = train.features[train.numeric_indices()[0]].name
    return Preference(items=((numeric, Constraint(kind="ge"), 1.0),))


@pytest.fixture(scope="module")
def moons_runs(moons_setup):
    """{1} and {1,2} explanations for the first 50 test inputs, N=10."""
    train, test, explainer = moons_setup
    runs = {}
    for modules in ({1}, {1, 2}):
        runs[tuple(sorted(modules))] = [
            explain(explainer, test.raw_rows[i], N=10, modules=modules, seed=1000 + i)
            for i in range(50)
        ]
    return runs


# -- criterion 1: metric oracles ------------------------------------------


class TestMetricOracles:
    N_INSTANCES = 25
    TOL = 1e-9

    def test_gower_and_feature_delta(self, rng):
        metas = [
            FeatureMeta(name="n1", kind="numerical", lo=0.0, hi=10.0),
            FeatureMeta(name="n2", kind="numerical", lo=-5.0, hi=5.0),
            FeatureMeta(name="c", kind="categorical", categories=("a", "b", "c")),
        ]
        worst = 0.0
        for _ in range(self.N_INSTANCES):
            x = [rng.uniform(0, 10), rng.uniform(-5, 5), rng.choice(["a", "b", "c"])]
            y = [rng.uniform(0, 10), rng.uniform(-5, 5), rng.choice(["a", "b", "c"])]
            expected = oracles.gower(
                [x[0], x[1], x[2]], [y[0], y[1], y[2]],
                kinds=["num", "num", "cat"], widths=[10.0, 10.0, None],
            )
            got = gower_distance(x, y, metas)
            worst = max(worst, abs(got - expected))
            for j, meta in enumerate(metas[:2]):
                d_expected = min(1.0, abs(x[j] - y[j]) / meta.width)
                worst = max(worst, abs(feature_delta(x[j], y[j], meta) - d_expected))
        _report("metric-oracle gower/feature_delta", worst <= self.TOL, f"max err {worst:.2e}")

    def test_sparsity(self, rng):
        worst = 0
        for _ in range(self.N_INSTANCES):
            x = rng.integers(0, 3, size=8).astype(float)
            y = rng.integers(0, 3, size=8).astype(float)
            diff = abs(sparsity_cost(x, y) - oracles.sparsity(x.tolist(), y.tolist()))
            worst = max(worst, diff)
        _report("metric-oracle sparsity", worst == 0, f"max err {worst}")

    def test_pearson(self, rng):
        worst = 0.0
        for _ in range(self.N_INSTANCES):
            x = rng.normal(size=25).tolist()
            y = rng.normal(size=25).tolist()
            worst = max(worst, abs(pearson_r(x, y) - oracles.pearson(x, y)))
        _report("metric-oracle pearson_r", worst <= self.TOL, f"max err {worst:.2e}")

    def test_correlation_ratio(self, rng):
        worst = 0.0
        done = 0
        while done < self.N_INSTANCES:
            cats = rng.integers(0, 4, size=30).tolist()
            vals = rng.normal(size=30).tolist()
            if len(set(cats)) < 2:
                continue
            worst = max(
                worst, abs(correlation_ratio(cats, vals) - oracles.correlation_ratio(cats, vals))
            )
            done += 1
        _report("metric-oracle correlation_ratio", worst <= self.TOL, f"max err {worst:.2e}")

    def test_cramers_v(self, rng):
        worst = 0.0
        done = 0
        while done < self.N_INSTANCES:
            a = rng.integers(0, 3, size=50).tolist()
            b = rng.integers(0, 4, size=50).tolist()
            if len(set(a)) < 2 or len(set(b)) < 2:
                continue
            worst = max(worst, abs(cramers_v(a, b) - oracles.cramers_v(a, b)))
            done += 1
        _report("metric-oracle cramers_v", worst <= self.TOL, f"max err {worst:.2e}")

    def test_proximity_ratio(self, rng):
        worst = 0.0
        for _ in range(self.N_INSTANCES):
            rows = rng.normal(size=(20, 3))
            model = ProximityModel(rows=rows)
            q = rng.normal(size=3)
            expected = oracles.proximity_ratio(q.tolist(), rows.tolist())
            worst = max(worst, abs(proximity_ratio(q, model) - expected))
        _report("metric-oracle proximity_ratio", worst <= self.TOL, f"max err {worst:.2e}")

    def test_diversity_metrics(self, rng):
        features = list("abcdef")
        worst = 0.0
        for _ in range(self.N_INSTANCES):
            sets = [
                {f for f in features if rng.random() < 0.4}
                for _ in range(int(rng.integers(2, 8)))
            ]
            worst = max(worst, abs(feature_diversity(sets) - oracles.feature_diversity(sets)))
            dicts = [
                {f: float(rng.integers(0, 3)) for f in features if rng.random() < 0.5}
                for _ in range(int(rng.integers(2, 8)))
            ]
            worst = max(worst, abs(value_diversity(dicts) - oracles.value_diversity(dicts)))
        _report("metric-oracle d_F/d_V", worst <= self.TOL, f"max err {worst:.2e}")


# -- criterion 2: sorting oracle ------------------------------------------


def test_sorting_matches_bruteforce():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(200):
        n = int(rng.integers(2, 65))
        m = int(rng.integers(2, 8))
        objs = rng.integers(0, 6, size=(n, m)).astype(float)
        if rng.random() < 0.5:
            objs += rng.normal(0, 0.01, size=objs.shape).round(3)
        got = fast_nondominated_sort(objs)
        expected = oracles.nondominated_fronts(objs.tolist())
        assert got == expected
        checked += 1
    _report("sorting-oracle", checked == 200, f"{checked} random sets, exact match")


# -- criterion 3: das-dennis counts ---------------------------------------


def test_das_dennis_counts_and_simplex():
    expectations = {(3, 12): 91, (4, 7): 120, (7, 3): 84}
    ok = True
    details = []
    for (m, p), count in expectations.items():
        pts = das_dennis_points(m, p)
        on_simplex = bool(np.all(np.abs(pts.sum(axis=1) - 1.0) <= 1e-12))
        ok = ok and pts.shape[0] == count == oracles.simplex_lattice_count(m, p) and on_simplex
        details.append(f"({m},{p})={pts.shape[0]}")
    _report("das-dennis-counts", ok, ", ".join(details))


# -- criterion 4: validity trend ------------------------------------------


def test_validity_all_configs(blobs_setup, moons_setup):
    total = invalid = 0
    for train, test, explainer in (blobs_setup, moons_setup):
        prefs = _benign_prefs(train)
        for modules in ({1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4}):
            for i in range(10):
                result = explain(
                    explainer, test.raw_rows[i], N=10, modules=modules,
                    prefs=prefs if 4 in modules else None, seed=2000 + i,
                )
                for cf in result.counterfactuals:
                    total += 1
                    if cf.objectives["outcome"] != 0.0:
                        invalid += 1
    _report(
        "validity-trend", invalid == 0,
        f"{total - invalid}/{total} counterfactuals with zero outcome cost",
    )


# -- criterion 5: soundness trend ------------------------------------------


def test_soundness_trend(moons_runs):
    means = {}
    for key, runs in moons_runs.items():
        prox = [cf.objectives["proximity"] for r in runs for cf in r.counterfactuals]
        conn = [cf.objectives["connectedness"] for r in runs for cf in r.counterfactuals]
        means[key] = (float(np.mean(prox)), float(np.mean(conn)))
    p1, c1 = means[(1,)]
    p12, c12 = means[(1, 2)]
    degenerate_seen = any(
        cf.objectives["proximity"] == 0.0
        or (cf.objectives["proximity"] == 1.0 and cf.objectives["connectedness"] == 0.0)
        for r in moons_runs[(1,)]
        for cf in r.counterfactuals
    )
    ok = p12 >= 0.9 and c12 >= 0.9 and p12 > p1 and c12 > c1 and degenerate_seen
    _report(
        "soundness-trend", ok,
        f"{{1,2}} prox={p12:.3f} conn={c12:.3f} vs {{1}} prox={p1:.3f} conn={c1:.3f}, "
        f"degenerate case seen={degenerate_seen}",
    )


# -- criterion 6: coherency trend ------------------------------------------


def test_coherency_trend():
    dataset = synth.correlated_pairs(n=625, seed=5)
    train, test = split(dataset, 0.8, seed=4)
    predictor = train_reference(train, "bagged-stumps", seed=6)
    explainer = fit_explainer(
        train, predictor, modules={1, 2, 3, 4},
        coherency_cfg=CoherencyConfig(rho=0.1, tau=0.7), seed=0,
    )
    groups = [
        ConsistencyGroup(kind="linear", feature_x="x1", feature_y="x2", a=2.0, b=0.0, tol=0.15),
        ConsistencyGroup(
            kind="bijection", feature_x="c1", feature_y="c2",
            mapping=tuple(synth.CATEGORY_MAP.items()),
        ),
    ]
    names = train.feature_names
    stats = {}
    n_inputs = min(50, test.n_rows)  # the monotonicity invariant asks for >= 50
    for modules in ({1, 2}, {1, 2, 3}):
        sets = [
            explain(explainer, test.raw_rows[i], N=10, modules=modules, seed=3000 + i)
            for i in range(n_inputs)
        ]
        xi = [cf.objectives["coherency"] for s in sets for cf in s.counterfactuals]
        stats[tuple(sorted(modules))] = (
            float(np.mean(xi)),
            coherency_rate(sets, groups, names),
        )
    xi12, rate12 = stats[(1, 2)]
    xi123, rate123 = stats[(1, 2, 3)]
    ok = xi123 <= 0.02 and rate123 >= 0.95 and xi12 > xi123
    _report(
        "coherency-trend", ok,
        f"{{1,2,3}} xi={xi123:.4f} rate={rate123:.3f} vs {{1,2}} xi={xi12:.4f} rate={rate12:.3f}",
    )


# -- criterion 7: actionability --------------------------------------------


def test_actionability_trend():
    dataset = synth.constrained_blobs(n=625, seed=13)
    train, test = split(dataset, 0.8, seed=8)
    predictor = train_reference(train, "nearest-centroid", seed=0)
    explainer = fit_explainer(train, predictor, modules={1, 2, 3, 4}, seed=0)
    prefs = Preference(
        items=(
            ("group", Constraint(kind="fix"), 10.0),
            ("f1", Constraint(kind="ge"), 4.0),
        )
    )
    lower_class = train.class_labels.index("a")
    eligible = [
        i
        for i in range(test.n_rows)
        if predictor.predict_class_batch(test.X[i : i + 1])[0] == lower_class
    ][:20]
    etas = {}
    for modules in ({1, 2, 3}, {1, 2, 3, 4}):
        values = []
        for i in eligible:
            result = explain(
                explainer, test.raw_rows[i], N=10, modules=modules, prefs=prefs, seed=4000 + i
            )
            values += [cf.objectives["actionability"] for cf in result.counterfactuals]
        etas[tuple(sorted(modules))] = np.asarray(values)
    eta_full = etas[(1, 2, 3, 4)]
    eta_part = etas[(1, 2, 3)]
    zero_fraction = float((eta_full == 0).mean())
    ok = zero_fraction >= 0.95 and eta_full.mean() < eta_part.mean()
    _report(
        "actionability-trend", ok,
        f"{{1,2,3,4}} eta=0 for {zero_fraction:.1%}, mean {eta_full.mean():.3f} "
        f"vs {{1,2,3}} mean {eta_part.mean():.3f}",
    )


# -- criterion 8: epsilon-chain equivalence --------------------------------


def test_epsilon_chain_bruteforce_equivalence():
    rng = np.random.default_rng(314)
    checked = mismatches = 0
    while checked < 100:
        n = int(rng.integers(20, 201))
        rows = rng.normal(size=(n, 2)) * float(rng.uniform(0.5, 2.0))
        eps = epsilon_for_group(rows)
        model = ConnectednessModel(rows=rows, eps=eps)
        for _ in range(5):
            if checked >= 100:
                break
            q = rng.normal(size=2) * 2.0
            got = model.score_batch(q.reshape(1, -1))[0] == 1.0
            expected = oracles.connected_by_bfs(q.tolist(), rows.tolist(), eps)
            if got != expected:
                mismatches += 1
            checked += 1
    _report(
        "epsilon-chain-equivalence", mismatches == 0,
        f"{checked} queries, {mismatches} mismatches",
    )


# -- criterion 9: determinism ----------------------------------------------


@pytest.fixture(scope="module")
def cli_artifact(tmp_path_factory):
    root = tmp_path_factory.mktemp("determinism")
    dataset = synth.correlated_pairs(n=250, seed=3)
    synth.dataset_to_csv(dataset, str(root / "data.csv"), str(root / "meta.json"))
    out = root / "fit"
    code = cli_main(
        [
            "fit",
            "--data", str(root / "data.csv"),
            "--meta", str(root / "meta.json"),
            "--predictor", "bagged-stumps",
            "--modules", "1,2,3",
            "--generations", "4",
            "--divisions", "2",
            "--seed", "1",
            "--out", str(out),
        ]
    )
    assert code == 0
    return root, out / "explainer.json"


def test_determinism_cli_and_service(cli_artifact):
    root, artifact_path = cli_artifact
    args = [
        "explain",
        "--artifact", str(artifact_path),
        "--index", "0",
        "--N", "5",
        "--seed", "17",
    ]
    assert cli_main([*args, "--out", str(root / "a")]) == 0
    assert cli_main([*args, "--out", str(root / "b")]) == 0
    cli_a = (root / "a" / "explanations.json").read_bytes()
    cli_b = (root / "b" / "explanations.json").read_bytes()

    artifact = Artifact.load(str(artifact_path))
    client = TestClient(create_app(artifact, "v"))
    body = {"instance": {"index": 0}, "N": 5, "seed": 17}
    resp_a = client.post("/explain", json=body).json()
    resp_b = client.post("/explain", json=body).json()
    resp_a.pop("timing")
    resp_b.pop("timing")
    service_equal = json.dumps(resp_a, sort_keys=True) == json.dumps(resp_b, sort_keys=True)

    # cross-interface equivalence: same seeds, same breakdowns and rows
    cli_doc = json.loads(cli_a)["results"][0]
    names = [f["name"] for f in client.get("/schema").json()["features"]]
    cli_objectives = [cf["objectives"] for cf in cli_doc["counterfactuals"]]
    service_objectives = [cf["objectives"] for cf in resp_a["counterfactuals"]]
    cli_values = [cf["values"] for cf in cli_doc["counterfactuals"]]
    service_values = [[cf["values"][n] for n in names] for cf in resp_a["counterfactuals"]]
    cross_equal = cli_objectives == service_objectives and cli_values == service_values

    ok = cli_a == cli_b and service_equal and cross_equal
    _report(
        "determinism", ok,
        f"cli bytes equal={cli_a == cli_b}, service equal={service_equal}, "
        f"cli/service breakdowns equal={cross_equal}",
    )


# -- criterion 10: diversity -----------------------------------------------


def test_diversity_on_moons(moons_runs, moons_setup):
    train, _, _ = moons_setup
    names = train.feature_names
    d_f_values, d_v_values = [], []
    for result in moons_runs[(1,)]:
        cfs = result.counterfactuals
        if len(cfs) < 2:
            continue
        d_f_values.append(feature_diversity([set(cf.changed) for cf in cfs]))
        d_v_values.append(
            value_diversity(
                [{k: v for k, v in zip(names, cf.values) if k in cf.changed} for cf in cfs]
            )
        )
    bounds_ok = all(0.0 <= v <= 1.0 for v in d_f_values + d_v_values)
    mean_d_f = float(np.mean(d_f_values))
    positive_fraction = float(np.mean([v > 0 for v in d_f_values]))
    ok = bounds_ok and mean_d_f > 0.0
    _report(
        "diversity", ok,
        f"mean d_F={mean_d_f:.3f} (positive for {positive_fraction:.0%} of inputs; "
        f"moon-tip inputs admit only both-feature recourses), bounds hold={bounds_ok}",
    )

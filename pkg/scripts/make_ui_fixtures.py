"""Regenerate the frontend contract fixtures from a real service instance.

Writes frontend/fixtures/{schema,constraint_matrix,responses}.json. The
frontend unit tests replay these files; tests/test_ui_fixtures.py posts the
same requests against the live app to prove the server accepts them.

Run from the repository root: python3 scripts/make_ui_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from recourse import synth
from recourse.coherency import CoherencyConfig
from recourse.data import split
from recourse.explainer import Artifact, MooDefaults, fit_explainer
from recourse.predictors import train_reference
from recourse.service import create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "fixtures"

NUMERIC_KINDS = ("fix", "l", "g", "le", "ge", "range")
CATEGORICAL_KINDS = ("fix", "set")


def build_artifact() -> Artifact:
    dataset = synth.correlated_pairs(n=400, seed=21)
    train, test = split(dataset, 0.8, seed=4)
    predictor = train_reference(train, "bagged-stumps", seed=6)
    explainer = fit_explainer(
        train,
        predictor,
        modules={1, 2, 3, 4},
        coherency_cfg=CoherencyConfig(rho=0.1, tau=0.7),
        moo=MooDefaults(generations=4, divisions=2),
        seed=0,
    )
    return Artifact(explainer, test)


def draft_for(feature: dict, kind: str, importance: float) -> dict:
    draft = {"feature": feature["name"], "kind": kind, "importance": importance, "enabled": True}
    if kind == "range":
        lo, hi = feature["range"]
        draft["lb"] = lo + 0.25 * (hi - lo)
        draft["ub"] = lo + 0.75 * (hi - lo)
    if kind == "set":
        draft["values"] = feature["categories"][:2]
    return draft


def preference_entry(draft: dict) -> dict:
    entry = {"op": draft["kind"], "importance": draft["importance"]}
    if draft["kind"] == "range":
        entry["lb"] = draft["lb"]
        entry["ub"] = draft["ub"]
    if draft["kind"] == "set":
        entry["values"] = list(draft["values"])
    return entry


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    artifact = build_artifact()
    client = TestClient(create_app(artifact, artifact_version="fixture"))

    schema = client.get("/schema").json()
    (FIXTURES / "schema.json").write_text(json.dumps(schema, indent=2) + "\n")

    cases = []
    importance_cycle = [1.0, 4.0, 10.0, 0.5]
    counter = 0
    for feature in schema["features"]:
        kinds = NUMERIC_KINDS if feature["kind"] == "numerical" else CATEGORICAL_KINDS
        for kind in kinds:
            draft = draft_for(feature, kind, importance_cycle[counter % len(importance_cycle)])
            counter += 1
            context = {
                "instance": {"index": counter % 10},
                "modules": [1, 2, 3, 4],
                "N": 5,
                "seed": 100 + counter,
            }
            request = {
                "instance": context["instance"],
                "preferences": {draft["feature"]: preference_entry(draft)},
                "modules": context["modules"],
                "N": context["N"],
                "seed": context["seed"],
            }
            cases.append(
                {
                    "name": f"{feature['name']}-{kind}",
                    "drafts": [draft],
                    "context": context,
                    "request": request,
                }
            )
    # one combined case: several constraints at once, plus a disabled draft
    combined_drafts = [
        draft_for(schema["features"][0], "ge", 4.0),
        draft_for(schema["features"][3], "fix", 10.0),
        {**draft_for(schema["features"][1], "l", 2.0), "enabled": False},
    ]
    combined_context = {"instance": {"index": 3}, "modules": [1, 2, 3, 4], "N": 10, "seed": 77}
    cases.append(
        {
            "name": "combined-with-disabled-draft",
            "drafts": combined_drafts,
            "context": combined_context,
            "request": {
                "instance": combined_context["instance"],
                "preferences": {
                    d["feature"]: preference_entry(d) for d in combined_drafts if d["enabled"]
                },
                "modules": combined_context["modules"],
                "N": combined_context["N"],
                "seed": combined_context["seed"],
            },
        }
    )
    # a module-toggle case with no constraints at all
    cases.append(
        {
            "name": "modules-1-2-no-preferences",
            "drafts": [],
            "context": {"instance": {"index": 5}, "modules": [1, 2], "N": 5, "seed": 9},
            "request": {
                "instance": {"index": 5},
                "modules": [1, 2],
                "N": 5,
                "seed": 9,
            },
        }
    )
    (FIXTURES / "constraint_matrix.json").write_text(json.dumps(cases, indent=2) + "\n")

    responses = []
    for i in range(20):
        body = {"instance": {"index": i}, "modules": [1, 2, 3], "N": 5, "seed": 500 + i}
        resp = client.post("/explain", json=body)
        assert resp.status_code == 200, resp.text
        responses.append(resp.json())
    (FIXTURES / "responses.json").write_text(json.dumps(responses, indent=2) + "\n")
    print(f"wrote {len(cases)} matrix cases and {len(responses)} responses to {FIXTURES}")


if __name__ == "__main__":
    main()

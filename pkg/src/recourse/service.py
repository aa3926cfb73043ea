"""HTTP facade over a fitted explainer for interactive recourse exploration.

Endpoints: GET /health, GET /schema, GET /instances, POST /explain.
Request handling is stateless; every explanation owns a seeded generator
(seed defaults to 0), so identical requests produce identical responses.
Validation is explicit rather than delegated to the framework so that plain
schema violations map to 400 with field-level messages while constraint
kinds that can never apply to a feature map to 422.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .actionability import CATEGORICAL_KINDS, NUMERIC_KINDS, parse_preferences
from .data import CLASSIFICATION, NUMERICAL
from .errors import ConfigurationError, RecourseError
from .explainer import Artifact, explain, validate_modules
from .validity import DesiredOutcome

EXPLAIN_TIMEOUT_SECONDS = 120  # documented budget for one synchronous explain


@dataclass
class _ValidatedRequest:
    x_raw: list
    desired: DesiredOutcome | None
    prefs: object | None
    modules: frozenset[int]
    n: int
    seed: int


def _error_response(status: int, errors: list[dict]) -> JSONResponse:
    return JSONResponse(status_code=status, content={"errors": errors})


def _field_error(field: str, message: str) -> ConfigurationError:
    return ConfigurationError(message, field=field)


def validate_explain_request(doc: dict, artifact: Artifact) -> _ValidatedRequest:
    """Validate a raw /explain body against the artifact's schema."""
    ex = artifact.explainer
    train = ex.train
    if not isinstance(doc, dict):
        raise _field_error("", "request body must be a JSON object")
    unknown = set(doc) - {"instance", "desired", "preferences", "modules", "N", "seed"}
    if unknown:
        raise _field_error(sorted(unknown)[0], f"unknown request fields {sorted(unknown)}")

    instance = doc.get("instance")
    if not isinstance(instance, dict):
        raise _field_error("instance", "instance must be an object with 'index' or 'values'")
    if "index" in instance:
        if artifact.test is None:
            raise _field_error("instance.index", "artifact carries no test split")
        idx = instance["index"]
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise _field_error("instance.index", "index must be an integer")
        if not 0 <= idx < artifact.test.n_rows:
            raise _field_error(
                "instance.index", f"index {idx} out of range [0, {artifact.test.n_rows})"
            )
        x_raw = list(artifact.test.raw_rows[idx])
    elif "values" in instance:
        values = instance["values"]
        if not isinstance(values, dict):
            raise _field_error("instance.values", "values must map feature name to value")
        x_raw = []
        for meta in train.features:
            if meta.name not in values:
                raise _field_error(f"instance.values.{meta.name}", "missing feature value")
            v = values[meta.name]
            if meta.kind == NUMERICAL:
                if not isinstance(v, (int, float)) or isinstance(v, bool):
                    raise _field_error(f"instance.values.{meta.name}", "expected a number")
                x_raw.append(float(v))
            else:
                if str(v) not in meta.categories:
                    raise _field_error(
                        f"instance.values.{meta.name}",
                        f"unknown category {v!r}; expected one of {list(meta.categories)}",
                    )
                x_raw.append(str(v))
        extra = set(values) - {m.name for m in train.features}
        if extra:
            raise _field_error(f"instance.values.{sorted(extra)[0]}", "unknown feature")
    else:
        raise _field_error("instance", "instance needs 'index' or 'values'")

    desired = None
    if doc.get("desired") is not None:
        d = doc["desired"]
        if not isinstance(d, dict):
            raise _field_error("desired", "desired must be an object")
        try:
            if train.task == CLASSIFICATION:
                if "class_label" in d:
                    c = train.class_index(d["class_label"])
                elif "class_index" in d:
                    c = d["class_index"]
                    if not isinstance(c, int) or not 0 <= c < train.n_classes:
                        raise _field_error("desired.class_index", "class index out of range")
                else:
                    raise _field_error("desired", "desired needs class_label or class_index")
                desired = DesiredOutcome(
                    kind="class",
                    class_index=c,
                    threshold=float(d.get("threshold", ex.p_threshold)),
                )
            else:
                if "lb" not in d or "ub" not in d:
                    raise _field_error("desired", "desired needs lb and ub for regression")
                desired = DesiredOutcome(kind="range", lb=float(d["lb"]), ub=float(d["ub"]))
        except ValueError as exc:
            raise _field_error("desired", str(exc)) from exc
        except RecourseError as exc:
            raise _field_error("desired", str(exc)) from exc

    prefs = None
    if doc.get("preferences") is not None:
        prefs = parse_preferences(doc["preferences"], train.features)

    modules = ex.modules
    if doc.get("modules") is not None:
        raw_modules = doc["modules"]
        if not isinstance(raw_modules, list) or not all(
            isinstance(m, int) and not isinstance(m, bool) for m in raw_modules
        ):
            raise _field_error("modules", "modules must be a list of integers")
        modules = validate_modules(raw_modules)
        if not modules <= ex.modules:
            raise _field_error(
                "modules",
                f"artifact was fitted for modules {sorted(ex.modules)}",
            )

    n = doc.get("N", 10)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise _field_error("N", "N must be a positive integer")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise _field_error("seed", "seed must be an integer")

    return _ValidatedRequest(
        x_raw=x_raw, desired=desired, prefs=prefs, modules=modules, n=n, seed=seed
    )


def _constraint_kinds(meta) -> list[str]:
    return list(NUMERIC_KINDS if meta.kind == NUMERICAL else CATEGORICAL_KINDS)


def _schema_payload(artifact: Artifact) -> dict:
    ex = artifact.explainer
    features = []
    for meta in ex.train.features:
        entry = {"name": meta.name, "kind": meta.kind, "constraints": _constraint_kinds(meta)}
        if meta.kind == NUMERICAL:
            entry["range"] = [meta.lo, meta.hi]
        else:
            entry["categories"] = list(meta.categories)
        features.append(entry)
    payload = {
        "version": 1,
        "task": ex.train.task,
        "target": ex.train.target_name,
        "features": features,
        "modules": sorted(ex.modules),
        "p_threshold": ex.p_threshold,
    }
    if ex.train.task == CLASSIFICATION:
        payload["class_labels"] = list(ex.train.class_labels)
    if ex.ranges is not None:
        payload["response_intervals"] = [list(i) for i in ex.ranges.intervals]
    return payload


def _values_map(feature_names: list[str], raw_row: list) -> dict:
    return dict(zip(feature_names, raw_row))


def create_app(artifact: Artifact, artifact_version: str = "dev") -> FastAPI:
    app = FastAPI(title="recourse-service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    ex = artifact.explainer
    names = [m.name for m in ex.train.features]

    @app.get("/health")
    def health():
        return {"status": "ok", "artifact_version": artifact_version}

    @app.get("/schema")
    def schema():
        return _schema_payload(artifact)

    @app.get("/instances")
    def instances(split: str = "test", offset: int = 0, limit: int = 20):
        if split != "test":
            return _error_response(400, [{"field": "split", "message": "only split=test is served"}])
        if artifact.test is None:
            return _error_response(400, [{"field": "split", "message": "artifact carries no test split"}])
        if offset < 0 or limit < 0:
            return _error_response(400, [{"field": "offset", "message": "offset/limit must be >= 0"}])
        rows = []
        for i in range(offset, min(offset + limit, artifact.test.n_rows)):
            rows.append(
                {
                    "index": i,
                    "values": _values_map(names, artifact.test.raw_rows[i]),
                    "prediction": ex.predict_payload(artifact.test.X[i]),
                }
            )
        return {"rows": rows, "total": artifact.test.n_rows, "offset": offset}

    @app.post("/explain")
    async def explain_route(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return _error_response(400, [{"field": "", "message": "body is not valid JSON"}])
        try:
            validated = validate_explain_request(doc, artifact)
        except ConfigurationError as exc:
            status = 422 if exc.code == "kind_mismatch" else 400
            return _error_response(status, [{"field": exc.field or "", "message": str(exc)}])
        try:
            t0 = time.perf_counter()
            result = explain(
                ex,
                validated.x_raw,
                desired=validated.desired,
                prefs=validated.prefs,
                N=validated.n,
                modules=validated.modules,
                seed=validated.seed,
            )
            elapsed = time.perf_counter() - t0
        except ConfigurationError as exc:
            status = 422 if exc.code == "kind_mismatch" else 400
            return _error_response(status, [{"field": exc.field or "", "message": str(exc)}])
        except Exception:
            error_id = uuid.uuid4().hex
            return JSONResponse(status_code=500, content={"error_id": error_id})
        payload = {
            "x": _values_map(names, result.x),
            "x_prediction": result.x_prediction,
            "desired": result.desired.to_dict(),
            "counterfactuals": [
                {
                    "values": _values_map(names, cf.values),
                    "objectives": cf.objectives,
                    "changed": cf.changed,
                    "prediction": cf.prediction,
                }
                for cf in result.counterfactuals
            ],
            "valid": result.valid,
            "modules": list(result.modules),
            "seed": result.seed,
            "N": result.requested,
            "timing": elapsed,
        }
        return payload

    return app

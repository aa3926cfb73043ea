"""Command-line entry point: fit, explain, benchmark, serve.

Exit codes: 0 success, 2 input/IO problems, 3 schema mismatch between an
artifact and the provided input, 4 environment problems (e.g. port in use).
All outputs land under the --out directory and are byte-deterministic given
the same inputs and seed (reports carry no timestamps).
"""

from __future__ import annotations

import argparse
import errno
import hashlib
import json
import sys
from pathlib import Path

from .actionability import parse_preferences
from .coherency import CoherencyConfig
from .data import CLASSIFICATION, NUMERICAL, load_dataset, split
from .errors import ConfigurationError, ParseError, RecourseError, SchemaMismatchError
from .evaluation import run_benchmark
from .explainer import (
    Artifact,
    MooDefaults,
    SoundnessConfig,
    explain,
    fit_explainer,
)
from .predictors import REFERENCE_KINDS, RemotePredictor, train_reference

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SCHEMA = 3
EXIT_ENV = 4


def _add_fit_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--meta", required=True, help="JSON metadata sidecar")
    p.add_argument("--modules", default="1,2,3,4", help="comma-separated module set, e.g. 1,2,3")
    p.add_argument(
        "--predictor",
        default=None,
        help=f"reference predictor kind {REFERENCE_KINDS} or 'remote'",
    )
    p.add_argument("--endpoint", default=None, help="remote predictor base URL")
    p.add_argument("--classes", type=int, default=2, help="class count for remote classifiers")
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5, help="probability threshold for validity")
    p.add_argument("--rho", type=float, default=0.1, help="correlation threshold")
    p.add_argument("--tau", default="median", help="score threshold, a float or 'median'")
    p.add_argument("--theta-prox", type=float, default=1.0, help="proximity inlier threshold")
    p.add_argument("--eps-percentile", type=float, default=90.0)
    p.add_argument("--quantiles", type=int, default=4, help="response ranges for regression")
    p.add_argument("--generations", type=int, default=10)
    p.add_argument("--pc", type=float, default=0.6)
    p.add_argument("--pm", type=float, default=0.3)
    p.add_argument("--divisions", type=int, default=None)


def _parse_modules(text: str) -> set[int]:
    try:
        return {int(tok) for tok in text.split(",") if tok.strip()}
    except ValueError:
        raise ConfigurationError(f"cannot parse module list {text!r}") from None


def _build_predictor(args, train):
    kind = args.predictor
    if kind is None:
        kind = "nearest-centroid" if train.task == CLASSIFICATION else "least-squares"
    if kind == "remote":
        if not args.endpoint:
            raise ConfigurationError("--predictor remote requires --endpoint")
        return RemotePredictor(
            args.endpoint, task=train.task, class_count=args.classes
        )
    return train_reference(train, kind, seed=args.seed)


def _fit_from_args(args):
    dataset = load_dataset(args.data, args.meta)
    train, test = split(dataset, args.train_fraction, args.seed)
    predictor = _build_predictor(args, train)
    tau = None if args.tau == "median" else float(args.tau)
    explainer = fit_explainer(
        train,
        predictor,
        modules=_parse_modules(args.modules),
        p_threshold=args.p,
        response_quantiles=args.quantiles,
        soundness_cfg=SoundnessConfig(theta=args.theta_prox, eps_percentile=args.eps_percentile),
        coherency_cfg=CoherencyConfig(rho=args.rho, tau=tau),
        moo=MooDefaults(
            generations=args.generations, pc=args.pc, pm=args.pm, divisions=args.divisions
        ),
        seed=args.seed,
    )
    return Artifact(explainer, test)


def _fit_summary(artifact: Artifact) -> str:
    ex = artifact.explainer
    lines = [
        f"task: {ex.train.task}",
        f"modules: {{{','.join(str(m) for m in sorted(ex.modules))}}}",
        f"train rows: {ex.train.n_rows}",
        f"test rows: {artifact.test.n_rows if artifact.test else 0}",
        f"features: {ex.train.n_features}",
        f"predictor: {ex.predictor.spec()['kind']}",
        f"seed: {ex.seed}",
    ]
    if ex.soundness is not None:
        for g in sorted(ex.soundness.proximity):
            conn = ex.soundness.connectedness[g]
            lines.append(
                f"soundness group {g}: {conn.rows.shape[0]} rows, "
                f"eps={conn.eps:.6f}, clusters={len(conn.clusters)}"
            )
    if ex.correlations is not None:
        tau = ex.correlation_tau
        lines.append(f"coherency tau: {'n/a' if tau is None else f'{tau:.6f}'}")
        for j, cm in sorted(ex.correlations.items()):
            inputs = ",".join(ex.train.features[k].name for k in cm.inputs)
            lines.append(
                f"correlation model {ex.train.features[j].name}: "
                f"inputs=[{inputs}] score={cm.score:.4f} ({cm.kind})"
            )
        if not ex.correlations:
            lines.append("correlation models: none kept")
    return "\n".join(lines) + "\n"


def cmd_fit(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifact = _fit_from_args(args)
    artifact.save(str(out / "explainer.json"))
    summary = _fit_summary(artifact)
    (out / "fit_summary.txt").write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    return EXIT_OK


def _load_artifact(path: str) -> Artifact:
    return Artifact.load(path)


def render_diff_table(result_doc: dict, feature_names: list[str]) -> str:
    """Plain-text diff table: one row per counterfactual, unchanged cells
    rendered as a dash."""
    header = ["instance"] + feature_names + ["prediction"]
    rows = [header]
    x = result_doc["x"]
    pred = result_doc["x_prediction"]
    rows.append(
        ["x"]
        + [_cell(v) for v in x]
        + [pred.get("class", _cell(pred.get("response", "")))]
    )
    for k, cf in enumerate(result_doc["counterfactuals"]):
        cells = [f"cf{k + 1}"]
        for name, value, original in zip(feature_names, cf["values"], x):
            cells.append(_cell(value) if name in cf["changed"] else "–")
        p = cf["prediction"]
        cells.append(p.get("class", _cell(p.get("response", ""))))
        rows.append(cells)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def cmd_explain(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifact = _load_artifact(args.artifact)
    ex = artifact.explainer
    prefs = None
    if args.prefs:
        prefs = parse_preferences(Path(args.prefs).read_text(encoding="utf-8"), ex.features)
    modules = _parse_modules(args.modules) if args.modules else None

    inputs = []
    if args.index is not None:
        if artifact.test is None:
            raise ConfigurationError("artifact carries no test split; use --input")
        for idx in args.index:
            if not 0 <= idx < artifact.test.n_rows:
                raise ConfigurationError(f"--index {idx} out of range [0, {artifact.test.n_rows})")
            inputs.append((idx, list(artifact.test.raw_rows[idx])))
    if args.input:
        rows_doc = json.loads(Path(args.input).read_text(encoding="utf-8"))
        if not isinstance(rows_doc, list):
            raise ParseError("--input must contain a JSON list of feature-value maps")
        for row in rows_doc:
            x_raw = []
            for meta in ex.features:
                if meta.name not in row:
                    raise SchemaMismatchError(f"input row missing feature {meta.name!r}")
                v = row[meta.name]
                x_raw.append(float(v) if meta.kind == NUMERICAL else str(v))
            inputs.append((None, x_raw))
    if not inputs:
        raise ConfigurationError("nothing to explain: pass --index and/or --input")

    results = []
    for idx, x_raw in inputs:
        cf_set = explain(
            ex, x_raw, prefs=prefs, N=args.N, modules=modules, seed=args.seed
        )
        doc = cf_set.to_dict()
        doc["index"] = idx
        results.append(doc)
    report = {"version": 1, "seed": args.seed, "N": args.N, "results": results}
    (out / "explanations.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    if args.table:
        names = [m.name for m in ex.features]
        tables = [render_diff_table(doc, names) for doc in results]
        (out / "explanations.txt").write_text("\n".join(tables), encoding="utf-8")
    sys.stdout.write(
        f"explained {len(results)} input(s); "
        f"valid sets: {sum(1 for r in results if r['valid'])}/{len(results)}\n"
    )
    return EXIT_OK


def cmd_benchmark(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifact = _fit_from_args(args)
    ex = artifact.explainer
    prefs = None
    if args.prefs:
        prefs = parse_preferences(Path(args.prefs).read_text(encoding="utf-8"), ex.features)
    configs = [sorted(_parse_modules(tok)) for tok in args.configs.split("|") if tok.strip()]
    report = run_benchmark(
        ex,
        artifact.test,
        configs=configs,
        n_inputs=args.n_inputs,
        N=args.N,
        seed=args.seed,
        prefs=prefs,
    )
    (out / "benchmark.json").write_text(report.to_json() + "\n", encoding="utf-8")
    table = report.to_table()
    (out / "benchmark.txt").write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    artifact_path = Path(args.artifact)
    text = artifact_path.read_text(encoding="utf-8")
    artifact = Artifact.from_json(text)
    version = hashlib.sha256(text.encode()).hexdigest()[:12]
    app = create_app(artifact, artifact_version=version)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            sys.stderr.write(f"error: port {args.port} already in use\n")
            return EXIT_ENV
        raise
    except SystemExit as exc:
        # uvicorn exits 1 when binding fails
        if exc.code:
            sys.stderr.write(f"error: could not serve on {args.host}:{args.port}\n")
            return EXIT_ENV
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recourse",
        description="Counterfactual explanations and actionable recourse for tabular models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit an explainer and write the artifact")
    _add_fit_options(p_fit)
    p_fit.add_argument("--out", required=True, help="output directory")
    p_fit.set_defaults(func=cmd_fit)

    p_explain = sub.add_parser("explain", help="explain inputs with a fitted artifact")
    p_explain.add_argument("--artifact", required=True)
    p_explain.add_argument("--index", type=int, action="append", help="test-set row index")
    p_explain.add_argument("--input", help="JSON file with raw feature-value maps")
    p_explain.add_argument("--N", type=int, default=10)
    p_explain.add_argument("--seed", type=int, default=0)
    p_explain.add_argument("--prefs", help="JSON preference document")
    p_explain.add_argument("--modules", default=None, help="override active modules")
    p_explain.add_argument("--table", action="store_true", help="also write a diff table")
    p_explain.add_argument("--out", required=True)
    p_explain.set_defaults(func=cmd_explain)

    p_bench = sub.add_parser("benchmark", help="run the module-ablation benchmark")
    _add_fit_options(p_bench)
    p_bench.add_argument("--configs", default="1|1,2|1,2,3|1,2,3,4")
    p_bench.add_argument("--n-inputs", type=int, default=20)
    p_bench.add_argument("--N", type=int, default=10)
    p_bench.add_argument("--prefs", help="JSON preference document")
    p_bench.add_argument("--out", required=True)
    p_bench.set_defaults(func=cmd_benchmark)

    p_serve = sub.add_parser("serve", help="serve the recourse HTTP API")
    p_serve.add_argument("--artifact", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaMismatchError as exc:
        sys.stderr.write(f"error: schema mismatch: {exc}\n")
        return EXIT_SCHEMA
    except (ParseError, ConfigurationError, RecourseError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc.filename or exc}\n")
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON input: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

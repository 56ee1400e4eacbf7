"""Command-line entry points: run the batch pipeline, validate a dataset,
serve the explorer API, or export artifacts from a saved session."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, DataError, TerrasegError
from .pipeline import PipelineConfig, run_pipeline

EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_COMPUTE = 3


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="dataset file (CSV or JSON)")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--linkage", default="ward",
                   choices=["single", "complete", "average", "ward", "centroid", "median"])
    p.add_argument("--cut-mode", default="by-count", choices=["by-count", "by-height"])
    p.add_argument("--cut-value", type=float, default=7, help="k for by-count, threshold for by-height")
    p.add_argument("--weights", default=None,
                   help="comma-separated indicator weights (must sum to 1); default emphasizes x1,x3,x5,x8,x13")
    p.add_argument("--label-map", default=None, help="JSON file mapping group ids to labels")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--decimal-comma", action="store_true", help="accept 77,77%% style numerals")
    p.add_argument("--impute-missing", action="store_true",
                   help="replace empty cells with the attribute mean (diagnosed)")
    p.add_argument("--charts", default="default", choices=["default", "all"])
    p.add_argument("--cluster-on", default="normalized", choices=["normalized", "raw"])


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    weights = None
    if args.weights:
        weights = tuple(float(w) for w in args.weights.split(","))
    return PipelineConfig(
        input_path=args.input,
        format=args.format,
        linkage=args.linkage,
        cut_mode=args.cut_mode,
        cut_value=args.cut_value,
        weights=weights,
        label_map_path=args.label_map,
        out_dir=args.out,
        decimal_comma=args.decimal_comma,
        impute_missing=args.impute_missing,
        charts=args.charts,
        cluster_on=args.cluster_on,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    result = run_pipeline(_config_from_args(args))
    for path in result.artifacts:
        print(path)
    for diag in result.diagnostics:
        print(f"note: {diag.rule}: {diag.message}", file=sys.stderr)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    from .dataset import parse_dataset, validate_dataset

    dataset = parse_dataset(
        args.input,
        format=args.format,
        decimal_comma=args.decimal_comma,
        impute_missing=args.impute_missing,
    )
    problems = validate_dataset(dataset)
    for diag in (*dataset.diagnostics, *problems):
        where = f" (entity {diag.entity_id}, {diag.attribute})" if diag.entity_id else ""
        print(f"{diag.rule}{where}: {diag.message}")
    if problems:
        return EXIT_DATA
    print(f"ok: {len(dataset)} entities, {len(dataset.schema)} attributes")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app
    from .session import SessionStore

    host, _, port = args.bind.partition(":")
    store = SessionStore(args.session_dir)
    frontend = args.frontend if args.frontend and Path(args.frontend).is_dir() else None
    app = create_app(store, frontend_dir=frontend)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    import csv

    from .session import SessionStore
    from .taxonomy import nl2

    store = SessionStore(args.session_dir)
    session = store.get(args.session)
    result = nl2(session.complemented, session.indicator_config, session.taxonomy)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "name", "label", "nl2"])
        for pos, eid in enumerate(session.dataset.ids):
            writer.writerow(
                [
                    eid,
                    session.dataset.entities[pos].name,
                    session.taxonomy.effective[pos],
                    repr(result.values[pos]),
                ]
            )
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terraseg",
        description="Segment territorial entities into policy categories and report on them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the batch pipeline and write artifacts")
    _add_run_args(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_val = sub.add_parser("validate", help="parse a dataset and print diagnostics")
    p_val.add_argument("--input", required=True)
    p_val.add_argument("--format", default="csv", choices=["csv", "json"])
    p_val.add_argument("--decimal-comma", action="store_true")
    p_val.add_argument("--impute-missing", action="store_true")
    p_val.set_defaults(fn=_cmd_validate)

    p_serve = sub.add_parser("serve", help="serve the explorer HTTP API")
    p_serve.add_argument("--bind", default="127.0.0.1:8000")
    p_serve.add_argument("--session-dir", default=None,
                         help="session directory (default: $TERRASEG_SESSION_DIR or ./sessions)")
    p_serve.add_argument("--frontend", default=None, help="static explorer assets to serve at /")
    p_serve.set_defaults(fn=_cmd_serve)

    p_exp = sub.add_parser("export", help="export the assignment CSV of a saved session")
    p_exp.add_argument("--session", required=True)
    p_exp.add_argument("--session-dir", default=None)
    p_exp.add_argument("--out", default="assignments.csv")
    p_exp.set_defaults(fn=_cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TerrasegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    raise SystemExit(main())

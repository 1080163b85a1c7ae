"""Command-line interface.

Exit codes are a stable contract: 0 success, 1 runtime or internal failure,
2 usage or validation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bundles, evaluation
from .catalog import CatalogError, load_catalog, load_dictionary, load_schema
from .embedding import load_accuracy_report
from .recommender import RecommenderConfig, UnknownArtworkError, build_engine, recommend

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (CatalogError, ValueError) as exc:
        _print_error(str(exc))
        return EXIT_USAGE
    except UnknownArtworkError as exc:
        _print_error(str(exc))
        return EXIT_RUNTIME
    except FileNotFoundError as exc:
        _print_error(str(exc))
        return EXIT_RUNTIME


def _print_error(message: str) -> None:
    print(json.dumps({"error": message}), file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artrec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate catalog files into a catalog bundle")
    p.add_argument("--artworks", required=True)
    p.add_argument("--artists", required=True)
    p.add_argument("--dictionary", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true", help="fail on the first validation error")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("build", help="build an engine bundle from a catalog bundle")
    p.add_argument("--catalog", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--kernel", choices=["inverse", "linear"], default="inverse")
    p.add_argument("--accuracy", help="JSON accuracy report for variable weights")
    p.add_argument("--min-shared-tags", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("recommend", help="print recommendations for a query artwork")
    p.add_argument("--engine", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--alpha", type=float, default=0.4)
    p.add_argument("--mode", choices=["diffusion", "direct"], default="diffusion")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--explore", type=float, default=0.0)
    p.add_argument("--include-query-artist", action="store_true")
    p.set_defaults(handler=_cmd_recommend)

    p = sub.add_parser("tune-alpha", help="grid-search the blend weight against judgments")
    p.add_argument("--engine", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--grid", required=True, help="comma-separated alpha values")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--mode", choices=["diffusion", "direct"], default="diffusion")
    p.add_argument("--out", help="CSV path for the precision curve (default: stdout)")
    p.set_defaults(handler=_cmd_tune_alpha)

    p = sub.add_parser("evaluate", help="precision report at a fixed alpha")
    p.add_argument("--engine", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--alpha", type=float, default=0.4)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--mode", choices=["diffusion", "direct"], default="diffusion")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic clustered catalog + oracle judgments")
    p.add_argument("--clusters", type=int, default=5)
    p.add_argument("--works", type=int, default=40, help="works per cluster")
    p.add_argument("--artists-per-cluster", type=int, default=10)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--tag-noise", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--engine", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--feedback-log", default="feedback.jsonl")
    p.add_argument("--alpha", type=float, default=0.4)
    p.set_defaults(handler=_cmd_serve)

    p = sub.add_parser(
        "distill-feedback",
        help="convert a feedback log into a judgments file (like -> relevant)",
    )
    p.add_argument("--log", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_distill_feedback)

    return parser


def _cmd_ingest(args) -> int:
    dictionary = load_dictionary(args.dictionary)
    schema = load_schema(args.schema)
    catalog = load_catalog(args.artworks, args.artists, schema, dictionary, strict=args.strict)
    if catalog.rejects:
        for issue in catalog.rejects:
            print(str(issue), file=sys.stderr)
        print(
            f"ingest failed: {len(catalog.rejects)} record(s) rejected, "
            f"{len(catalog.artworks)} artworks / {len(catalog.artists)} artists loaded",
            file=sys.stderr,
        )
        return EXIT_USAGE
    bundles.save_catalog_bundle(catalog, args.out)
    print(
        json.dumps(
            {
                "artworks": len(catalog.artworks),
                "artists": len(catalog.artists),
                "rejected": 0,
                "out": str(args.out),
            }
        )
    )
    return EXIT_OK


def _cmd_build(args) -> int:
    catalog = bundles.load_catalog_bundle(args.catalog)
    report = load_accuracy_report(args.accuracy) if args.accuracy else None
    engine = build_engine(
        catalog,
        k=args.k,
        kernel=args.kernel,
        accuracy_report=report,
        min_shared_tags=args.min_shared_tags,
    )
    bundles.save_engine_bundle(engine, args.out)
    print(json.dumps({"build_id": engine.build_id, "out": str(args.out), **dict(engine.meta)}))
    return EXIT_OK


def _recommender_config(args) -> RecommenderConfig:
    return RecommenderConfig(
        alpha=args.alpha,
        mode=args.mode,
        k_out=args.k,
        exclude_query_artist=not getattr(args, "include_query_artist", False),
        exploration=args.explore,
        seed=args.seed,
    )


def _cmd_recommend(args) -> int:
    engine = bundles.load_engine_bundle(args.engine)
    config = _recommender_config(args)
    rec = recommend(engine, args.query, config)
    print(json.dumps(rec.to_dict(), ensure_ascii=False))
    return EXIT_OK


def _cmd_tune_alpha(args) -> int:
    engine = bundles.load_engine_bundle(args.engine)
    judgments = evaluation.load_judgments(args.judgments)
    grid = [float(x) for x in args.grid.split(",") if x.strip() != ""]
    best_alpha, curve = evaluation.tune_alpha(engine, judgments, grid, k=args.k, mode=args.mode)
    best_precision = dict(curve)[best_alpha]
    print(json.dumps({"best_alpha": best_alpha, "precision": best_precision}))
    if args.out:
        evaluation.dump_curve(curve, args.out)
    else:
        evaluation.dump_curve(curve, sys.stdout)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    engine = bundles.load_engine_bundle(args.engine)
    judgments = evaluation.load_judgments(args.judgments)
    index = evaluation.index_judgments(judgments)
    queries = sorted({q for q, _ in index})
    config = RecommenderConfig(alpha=args.alpha, mode=args.mode, k_out=args.k)
    recs = [recommend(engine, q, config) for q in queries]
    precision = evaluation.precision_at_k(recs, index, args.k)
    print(
        json.dumps(
            {"alpha": args.alpha, "mode": args.mode, "k": args.k,
             "queries": len(queries), "precision": precision}
        )
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    catalog, oracle = evaluation.synth_from_args(
        clusters=args.clusters,
        works_per_cluster=args.works,
        noise=args.noise,
        seed=args.seed,
        artists_per_cluster=args.artists_per_cluster,
        tag_noise=args.tag_noise,
    )
    out = Path(args.out)
    bundles.save_catalog_bundle(catalog, out)
    evaluation.dump_judgments(oracle.judgments(catalog), out / "judgments.jsonl")
    with open(out / "clusters.json", "w", encoding="utf-8") as fh:
        json.dump(dict(oracle.cluster_of), fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        json.dumps(
            {"artworks": len(catalog.artworks), "artists": len(catalog.artists), "out": str(out)}
        )
    )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    engine = bundles.load_engine_bundle(args.engine)
    app = create_app(
        engine, args.feedback_log, default_config=RecommenderConfig(alpha=args.alpha)
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _cmd_distill_feedback(args) -> int:
    judgments: dict[tuple[str, str], bool] = {}
    with open(args.log, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            event = json.loads(line)
            key = (str(event["query_id"]), str(event["item_id"]))
            judgments[key] = event["verdict"] == "like"  # latest verdict wins
    evaluation.dump_judgments(
        (
            evaluation.Judgment(query_id=q, item_id=i, relevant=r, source="expert-file")
            for (q, i), r in judgments.items()
        ),
        args.out,
    )
    print(json.dumps({"judgments": len(judgments), "out": str(args.out)}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

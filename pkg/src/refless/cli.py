"""Command-line interface: score, benchmark, and inspect subcommands."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bundle import load_bundle
from .config import OUTPUT_FORMATS, RunConfig, build_run_config
from .correlation import PROTOCOLS, correlate, load_ratings
from .errors import ReflessError
from .reportio import (
    render_correlations_csv,
    render_correlations_json,
    render_scores_csv,
    render_scores_json,
)
from .centrality import pacsum_centrality, select_top_m, similarity_matrix
from .scoring import document_sentence_vectors, evaluate_bundle

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file")
    parser.add_argument("--f-mode", choices=["f1", "fbeta"], dest="f_mode")
    parser.add_argument("--lambda", type=float, dest="lambda_", metavar="X",
                        help="redundancy weight in (0, 1], default 0.6")
    parser.add_argument("--gamma", type=int, help="recall-weight exponent, default 2")
    parser.add_argument("--top-m", type=int, dest="top_m",
                        help="pseudo-reference sentence count, default 12")
    parser.add_argument("--stoplist", metavar="FILE", dest="stoplist",
                        help="stop-word list file overriding the bundled one")
    parser.add_argument("--no-centrality-weighting", action="store_true",
                        help="weight pseudo-reference elements uniformly")
    parser.add_argument("--no-hybrid", action="store_true",
                        help="use token-level representations only")
    parser.add_argument("--no-redundancy", action="store_true",
                        help="final score is the relevance score alone")


def _run_config(args) -> RunConfig:
    out_format = getattr(args, "format", None)
    if out_format is None and getattr(args, "out", "").endswith(".json"):
        out_format = "json"
    overrides = {
        "lambda": args.lambda_,
        "f_mode": args.f_mode,
        "gamma": args.gamma,
        "top_m": args.top_m,
        "stoplist_path": args.stoplist,
        "centrality_weighting": False if args.no_centrality_weighting else None,
        "hybrid": False if args.no_hybrid else None,
        "redundancy_enabled": False if args.no_redundancy else None,
        "format": out_format,
        "protocol": getattr(args, "protocol", None),
    }
    return build_run_config(config_path=args.config, **overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refless",
        description="Reference-free summary scoring and meta-evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score every summary of a bundle")
    p_score.add_argument("--bundle", required=True, metavar="FILE")
    p_score.add_argument("--out", required=True, metavar="FILE")
    p_score.add_argument("--format", choices=OUTPUT_FORMATS)
    p_score.add_argument("--jobs", type=int, default=1, metavar="N",
                         help="topic-level parallelism (output is identical for any N)")
    _add_config_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_bench = sub.add_parser(
        "benchmark", help="correlate metric scores with human ratings"
    )
    p_bench.add_argument("--bundle", required=True, metavar="FILE")
    p_bench.add_argument("--ratings", required=True, metavar="FILE")
    p_bench.add_argument("--out", required=True, metavar="FILE")
    p_bench.add_argument("--format", choices=OUTPUT_FORMATS)
    p_bench.add_argument("--protocol", choices=PROTOCOLS)
    p_bench.add_argument("--dimension", action="append",
                         help="rating dimension(s) to use; default: all in the file")
    p_bench.add_argument("--jobs", type=int, default=1, metavar="N")
    _add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_benchmark)

    p_inspect = sub.add_parser(
        "inspect", help="dump sentence centralities and pseudo-reference selection"
    )
    p_inspect.add_argument("--bundle", required=True, metavar="FILE")
    p_inspect.add_argument("--topic", required=True, metavar="ID")
    p_inspect.add_argument("--document", type=int, metavar="K",
                           help="document index; default: all documents")
    _add_config_flags(p_inspect)
    p_inspect.set_defaults(func=cmd_inspect)
    return parser


def _load_bundle_checked(path: str):
    if not Path(path).exists():
        raise ReflessError(f"bundle not found: {path}")
    return load_bundle(path)


def _write_out(path: str, content: str) -> None:
    Path(path).write_text(content, encoding="utf-8")


def cmd_score(args) -> int:
    run = _run_config(args)
    bundle = _load_bundle_checked(args.bundle)
    reports = evaluate_bundle(bundle, run.score, jobs=args.jobs)
    fingerprint = run.fingerprint()
    if run.out_format == "json":
        content = render_scores_json(reports, fingerprint, run.to_dict())
    else:
        content = render_scores_csv(reports, fingerprint, run.to_dict())
    _write_out(args.out, content)
    invalid = sum(not r.valid for r in reports)
    print(f"fingerprint={fingerprint}")
    print(f"scored {len(reports)} summaries ({invalid} invalid) -> {args.out}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    run = _run_config(args)
    bundle = _load_bundle_checked(args.bundle)
    ratings = load_ratings(args.ratings)
    dimensions = args.dimension or ratings.dimensions()
    reports = evaluate_bundle(bundle, run.score, jobs=args.jobs)
    tables = [
        correlate(reports, ratings, run.protocol, dim, run.kendall_variant)
        for dim in dimensions
    ]
    fingerprint = run.fingerprint()
    if run.out_format == "json":
        content = render_correlations_json(tables, fingerprint, run.to_dict())
    else:
        content = render_correlations_csv(tables, fingerprint, run.to_dict())
    _write_out(args.out, content)
    print(f"fingerprint={fingerprint}")
    for t in tables:
        r = "undefined" if t.pearson_r is None else f"{t.pearson_r:.6f}"
        rho = "undefined" if t.spearman_rho is None else f"{t.spearman_rho:.6f}"
        tau = "undefined" if t.kendall_tau is None else f"{t.kendall_tau:.6f}"
        print(f"{t.protocol}/{t.dimension}: r={r} rho={rho} tau={tau} "
              f"(topics={t.n_topics_used}, pairs={t.n_pairs_used})")
    return EXIT_OK


def cmd_inspect(args) -> int:
    run = _run_config(args)
    bundle = _load_bundle_checked(args.bundle)
    try:
        topic = bundle.topic(args.topic)
    except KeyError as exc:
        raise ReflessError(str(exc)) from exc
    if args.document is not None:
        if not 0 <= args.document < len(topic.documents):
            raise ReflessError(
                f"document index {args.document} out of range "
                f"(topic has {len(topic.documents)} documents)"
            )
        doc_ids = [args.document]
    else:
        doc_ids = range(len(topic.documents))
    for d in doc_ids:
        doc = topic.documents[d]
        vecs = document_sentence_vectors(doc)
        raw = pacsum_centrality(similarity_matrix(vecs), run.score.pacsum)
        selection = select_top_m(raw, run.score.top_m)
        norm_by_index = dict(
            zip(selection.selected_indices, selection.normalized_centrality)
        )
        print(
            f"topic {topic.topic_id} document {d}: {len(doc.sentences)} sentences, "
            f"top_m={run.score.top_m}, selected {len(selection)}"
        )
        print("idx\traw\tselected\tnormalized")
        for i in range(len(doc.sentences)):
            if i in norm_by_index:
                print(f"{i}\t{raw[i]:.12g}\t*\t{norm_by_index[i]:.12g}")
            else:
                print(f"{i}\t{raw[i]:.12g}\t-\t")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ReflessError as exc:
        print(f"refless: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"refless: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

"""Command-line entry points: analyze, serve, fetch, and the eval suite."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import RunConfig, load_run_config, make_providers
from .consolidation import load_annotation_file, load_pair_file, select_threshold
from .corpus import load_story_bundle, save_story_bundle
from .errors import NewsDiscordError, OneClassOnly, ZeroVariance
from .evalharness import (
    MetricReport,
    agreement_leave_one_out,
    balanced_accuracy,
    discord_rate_report,
    load_run_records,
    pearson,
    render_scorecard,
)
from .feeds import DirectoryFeedClient, fetch_story
from .pipeline import analyze_story
from .storage import AnalysisStore

logger = logging.getLogger(__name__)


def _load_config(path: str | None) -> RunConfig:
    return load_run_config(path) if path else RunConfig()


def _bundle_paths(target: Path) -> list[Path]:
    if target.is_dir():
        return sorted(target.glob("*.json"))
    return [target]


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    store = AnalysisStore(args.out)
    paths = _bundle_paths(Path(args.bundle))
    if not paths:
        print(f"no bundles found under {args.bundle}", file=sys.stderr)
        return 1
    for path in paths:
        story = load_story_bundle(path)
        providers = make_providers(config, story)
        analysis = analyze_story(story, providers, config)
        stored = store.store(analysis, config)
        n_discord = sum(1 for qa in analysis.questions if qa.label.label.value == "discord")
        print(
            f"{story.id}: {len(analysis.questions)} questions, {n_discord} discord, "
            f"{len(analysis.selected)} selected -> {stored}"
        )
        for warning in analysis.warnings:
            print(f"  warning: {warning}", file=sys.stderr)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.addr.rpartition(":")
    app = create_app(AnalysisStore(args.store), args.bundles, _load_config(args.config))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def _cmd_fetch(args: argparse.Namespace) -> int:
    feed_config = json.loads(Path(args.feed_config).read_text("utf-8"))
    if feed_config.get("type", "directory") != "directory":
        print(f"unsupported feed type {feed_config.get('type')!r}", file=sys.stderr)
        return 1
    client = DirectoryFeedClient(feed_config["root"])
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for ref in client.list_recent_stories():
        try:
            result = fetch_story(client, ref)
        except NewsDiscordError as exc:
            print(f"{ref}: unavailable ({exc})", file=sys.stderr)
            continue
        path = out_dir / f"{result.story.id}.json"
        save_story_bundle(result.story, path)
        flagged = " [below_source_minimum]" if result.story.flags else ""
        print(
            f"{ref}: {len(result.story.articles)} articles from "
            f"{len(result.story.sources)} sources{flagged} -> {path}"
        )
        for issue in result.report:
            print(f"  skipped {issue.url or '<no url>'}: {issue.reason}", file=sys.stderr)
    return 0


def _write_or_print(payload: dict, out: str | None) -> None:
    body = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(body + "\n", "utf-8")
    else:
        print(body)


def _cmd_eval_pairs(args: argparse.Namespace) -> int:
    pairs = load_pair_file(args.pairs)
    threshold = args.threshold
    if threshold is None:
        tune_source = load_pair_file(args.tune_on) if args.tune_on else pairs
        tuned = select_threshold(tune_source, dataset_id=args.tune_on or args.pairs)
        threshold = tuned.tau
        if not args.tune_on:
            print("note: threshold tuned on the evaluation pairs themselves", file=sys.stderr)
    ba = None
    try:
        ba = balanced_accuracy(pairs, threshold)
    except (OneClassOnly, NewsDiscordError) as exc:
        print(f"balanced accuracy unavailable: {exc}", file=sys.stderr)
    correlation = None
    scored = [(p.score, p.target) for p in pairs if p.score is not None and p.target is not None]
    if len(scored) >= 2:
        try:
            correlation = pearson([s for s, _ in scored], [t for _, t in scored])
        except ZeroVariance as exc:
            print(f"correlation unavailable: {exc}", file=sys.stderr)
    report = MetricReport(
        n=len(pairs), balanced_accuracy=ba, pearson=correlation, threshold_used=threshold
    )
    _write_or_print(report.to_dict(), args.out)
    return 0


def _cmd_eval_agreement(args: argparse.Namespace) -> int:
    questions = load_annotation_file(args.annotations)
    per_question = {}
    means = []
    for question in questions:
        report = agreement_leave_one_out(list(question.annotator_groupings))
        per_question[question.question_id] = {
            "per_annotator": list(report.per_annotator),
            "mean": report.mean,
        }
        means.append(report.mean)
        print(f"{question.question_id}: mean ARI {report.mean:.3f}")
    overall = sum(means) / len(means) if means else None
    if overall is not None:
        print(f"overall: {overall:.3f}")
    _write_or_print({"per_question": per_question, "overall": overall}, args.out)
    return 0


def _cmd_eval_discord_rate(args: argparse.Namespace) -> int:
    records = load_run_records(args.run_dir)
    scorecard = discord_rate_report(records)
    print(render_scorecard(scorecard))
    if args.out:
        _write_or_print(scorecard.to_dict(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newsdiscord")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a bundle file or directory of bundles")
    analyze.add_argument("bundle", help="bundle file or directory")
    analyze.add_argument("--config", help="run config JSON file")
    analyze.add_argument("--out", default="analyses", help="analysis store directory")
    analyze.set_defaults(func=_cmd_analyze)

    serve = sub.add_parser("serve", help="serve stored analyses over HTTP")
    serve.add_argument("--addr", default="127.0.0.1:8050")
    serve.add_argument("--store", default="analyses")
    serve.add_argument("--bundles", default="corpus")
    serve.add_argument("--config", help="run config JSON file")
    serve.set_defaults(func=_cmd_serve)

    fetch = sub.add_parser("fetch", help="ingest stories from a feed into bundles")
    fetch.add_argument("feed_config", help="feed config JSON ({type: directory, root: ...})")
    fetch.add_argument("--out", default="corpus", help="bundle output directory")
    fetch.set_defaults(func=_cmd_fetch)

    evaluate = sub.add_parser("eval", help="measurement utilities")
    eval_sub = evaluate.add_subparsers(dest="eval_command", required=True)

    pairs = eval_sub.add_parser("pairs", help="score a labeled pair file")
    pairs.add_argument("--pairs", required=True, help="pair-scores JSON file")
    pairs.add_argument("--threshold", type=float, help="fixed classification threshold")
    pairs.add_argument("--tune-on", help="pair file to tune the threshold on")
    pairs.add_argument("--out", help="write the metric report here")
    pairs.set_defaults(func=_cmd_eval_pairs)

    agreement = eval_sub.add_parser("agreement", help="leave-one-out annotator agreement")
    agreement.add_argument("--annotations", required=True, help="annotation JSON file")
    agreement.add_argument("--out", help="write the agreement report here")
    agreement.set_defaults(func=_cmd_eval_agreement)

    rate = eval_sub.add_parser("discord-rate", help="per-start-word discord-rate scorecard")
    rate.add_argument("--run-dir", required=True, help="directory of categorized-question files")
    rate.add_argument("--out", help="write the machine-readable scorecard here")
    rate.set_defaults(func=_cmd_eval_discord_rate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except NewsDiscordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

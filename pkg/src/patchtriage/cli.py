"""Command-line front door for the patch-triage pipeline.

Every subcommand is a thin adapter over the library: data on stdout
(JSON, JSONL, or CSV), human prose and error lines on stderr. Exit codes:
0 success, 1 domain error (one JSON error line on stderr), 2 usage error.

Common flags can be set through environment variables with the
``PATCHTRIAGE_`` prefix (``PATCHTRIAGE_DATASET``, ``PATCHTRIAGE_MODEL``,
``PATCHTRIAGE_TEMPLATES``, ``PATCHTRIAGE_ENDPOINT``,
``PATCHTRIAGE_EMBED_ENDPOINT``, ``PATCHTRIAGE_SEED``,
``PATCHTRIAGE_FORMAT``, ``PATCHTRIAGE_POLICY_TAU``,
``PATCHTRIAGE_POLICY_MIN_SAMPLES``); a flag given on the command line wins.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict
from importlib import resources

from . import pipeline
from .augment import augment_dataset, default_templates, load_templates
from .clustering import load_model, model_from_json, save_model
from .dataset import (
    labeled_summaries_from_records,
    load_records,
    save_records,
    update_record,
)
from .diffs import compute_diff, is_textual_noop, parse_diff
from .embeddings import embed_hashed
from .errors import BackendUnavailable, PatchTriageError
from .summaries import SummarizerConfig, clean_summary, summarize
from .triage import (
    TriagePolicy,
    accumulate_stats,
    mismatch_matrix,
    mismatches_to_csv,
    render_mismatches,
    replay,
)

DEMO_MODEL_RESOURCE = "demo_model.json"


def _env(name: str, default=None):
    return os.environ.get(f"PATCHTRIAGE_{name}", default)


def _print_json(doc) -> None:
    print(json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True))


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_templates(args):
    return load_templates(args.templates) if args.templates else default_templates()


def _embedder(args):
    if args.embed_endpoint:
        return pipeline.remote_embedder(args.embed_endpoint)
    return pipeline.hashed_embedder()


def _load_model_or_demo(args):
    if args.model and os.path.exists(args.model):
        return load_model(args.model)
    if args.model:
        raise FileNotFoundError(f"model file not found: {args.model}")
    text = resources.files("patchtriage.data").joinpath(DEMO_MODEL_RESOURCE).read_text("utf-8")
    return model_from_json(json.loads(text))


def _policy(args) -> TriagePolicy:
    return TriagePolicy(
        skip_noop_categories=not getattr(args, "no_skip_noop", False),
        min_pass_rate=args.policy_tau,
        min_samples=args.policy_min_samples,
    )


def _require_dataset(args) -> str:
    if not args.dataset:
        raise SystemExit2("--dataset is required for this command")
    return args.dataset


class SystemExit2(Exception):
    """Usage error discovered after argparse (missing required flag)."""


def cmd_diff(args) -> int:
    diff = compute_diff(_read_text(args.original), _read_text(args.patched))
    sys.stdout.write(diff.raw)
    return 0


def cmd_summarize(args) -> int:
    path = _require_dataset(args)
    records = load_records(path, args.format)
    config = None
    summarized = noop_tagged = skipped = 0
    out = []
    for record in records:
        if record.summary_raw:
            out.append(record)
            skipped += 1
            continue
        if args.skip_empty_diff and is_textual_noop(parse_diff(record.diff_raw)):
            # no textual change: bypass the LLM, classify as "No change" outright
            out.append(update_record(record, category_auto=1, noop=True))
            noop_tagged += 1
            continue
        if config is None:
            if not args.endpoint:
                raise BackendUnavailable(
                    "records need summarizing but no --endpoint is configured"
                )
            config = SummarizerConfig(endpoint=args.endpoint)
        out.append(update_record(record, summary_raw=summarize(config, record.diff_raw)))
        summarized += 1
    save_records(out, args.out or path, args.format)
    _print_json({"summarized": summarized, "noop_tagged": noop_tagged, "skipped": skipped})
    return 0


def cmd_clean(args) -> int:
    if args.text is not None:
        print(clean_summary(args.text))
        return 0
    path = _require_dataset(args)
    records = load_records(path, args.format)
    cleaned = 0
    out = []
    for record in records:
        if record.summary_raw and not record.summary_clean:
            out.append(update_record(record, summary_clean=clean_summary(record.summary_raw)))
            cleaned += 1
        else:
            out.append(record)
    save_records(out, args.out or path, args.format)
    _print_json({"cleaned": cleaned})
    return 0


def cmd_embed(args) -> int:
    if args.embed_endpoint:
        matrix = pipeline.remote_embedder(args.embed_endpoint)([args.text])
        vector = [float(x) for x in matrix[0]]
    else:
        vector = [float(x) for x in embed_hashed(args.text).values]
    _print_json({"dim": len(vector), "vector": vector})
    return 0


def cmd_augment(args) -> int:
    templates = _load_templates(args)
    if args.dataset:
        seeds = labeled_summaries_from_records(load_records(args.dataset, args.format))
    else:
        seeds = []
    corpus = augment_dataset(seeds, templates, args.target, args.seed)
    lines = [
        json.dumps(
            {"text": s.text, "category": s.category, "synthetic": s.synthetic},
            ensure_ascii=False,
        )
        for s in corpus
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{len(corpus)} summaries", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    templates = _load_templates(args)
    if args.dataset:
        seeds = labeled_summaries_from_records(load_records(args.dataset, args.format))
    else:
        seeds = []
    result = pipeline.train_from_summaries(
        seeds,
        templates,
        per_category_target=args.target,
        seed=args.seed,
        embedder=_embedder(args),
    )
    if args.model:
        save_model(result.model, args.model)
    _print_json(result.report)
    return 0


def cmd_predict(args) -> int:
    model = _load_model_or_demo(args)
    _print_json(pipeline.predict_summary(model, args.summary, embedder=_embedder(args)))
    return 0


def cmd_evaluate(args) -> int:
    records = load_records(_require_dataset(args), args.format)
    _print_json(pipeline.evaluate_records(records))
    return 0


def cmd_stats(args) -> int:
    records = load_records(_require_dataset(args), args.format)
    _print_json(accumulate_stats(records, args.by).to_json())
    return 0


def cmd_mismatches(args) -> int:
    records = load_records(_require_dataset(args), args.format)
    matrix = mismatch_matrix(records)
    if args.csv:
        sys.stdout.write(mismatches_to_csv(matrix))
    else:
        _print_json(render_mismatches(matrix))
    return 0


def cmd_replay(args) -> int:
    records = load_records(_require_dataset(args), args.format)
    report = replay(records, _policy(args), mode=args.mode)
    _print_json(report.to_json())
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    config = ServiceConfig(
        dataset_path=args.dataset,
        dataset_format=args.format,
        model_path=args.model,
        templates_path=args.templates,
        seed=args.seed,
        embed_endpoint=args.embed_endpoint,
    )
    serve(config, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dataset", default=_env("DATASET"), help="dataset file path")
    common.add_argument("--model", default=_env("MODEL"), help="model file path")
    common.add_argument("--templates", default=_env("TEMPLATES"), help="template file path")
    common.add_argument(
        "--endpoint", default=_env("ENDPOINT"), help="LLM completion endpoint URL"
    )
    common.add_argument(
        "--embed-endpoint",
        default=_env("EMBED_ENDPOINT"),
        help="embedding service URL (default: offline hashing embedder)",
    )
    common.add_argument("--seed", type=int, default=_env("SEED", "42"))
    common.add_argument(
        "--format",
        choices=("jsonl", "csv"),
        default=_env("FORMAT", "jsonl"),
        help="dataset file format",
    )
    common.add_argument(
        "--policy-tau",
        type=float,
        default=_env("POLICY_TAU", "0.10"),
        help="minimum pass rate below which a category is skipped",
    )
    common.add_argument(
        "--policy-min-samples",
        type=int,
        default=_env("POLICY_MIN_SAMPLES", "20"),
        help="observations required before the pass-rate rule applies",
    )

    parser = argparse.ArgumentParser(prog="patchtriage", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", parents=[common], help="diff two files in normal format")
    p.add_argument("--original", required=True)
    p.add_argument("--patched", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("summarize", parents=[common], help="fill summary_raw via the LLM")
    p.add_argument("--out", help="output path (default: rewrite --dataset)")
    p.add_argument(
        "--skip-empty-diff",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="classify diffs with no textual change as category 1 without the LLM",
    )
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("clean", parents=[common], help="normalize raw summaries")
    p.add_argument("--text", help="clean one string instead of a dataset")
    p.add_argument("--out", help="output path (default: rewrite --dataset)")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("embed", parents=[common], help="embed one summary text")
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("augment", parents=[common], help="emit the augmented corpus as JSONL")
    p.add_argument("--target", type=int, default=pipeline.DEFAULT_PER_CATEGORY_TARGET)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", parents=[common], help="train the classifier, print metrics")
    p.add_argument("--target", type=int, default=pipeline.DEFAULT_PER_CATEGORY_TARGET)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=[common], help="classify one summary")
    p.add_argument("--summary", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", parents=[common], help="auto-vs-manual agreement report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", parents=[common], help="per-category quality statistics")
    p.add_argument("--by", choices=("auto", "manual"), default="auto")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("mismatches", parents=[common], help="auto-vs-manual disagreements")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    p.set_defaults(func=cmd_mismatches)

    p = sub.add_parser("replay", parents=[common], help="simulate the triage filter")
    p.add_argument("--mode", choices=("prequential", "oracle"), default="prequential")
    p.add_argument(
        "--no-skip-noop",
        action="store_true",
        help="do not skip NoOp categories outright",
    )
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        parser.error(str(exc))  # exits 2
        return 2
    except PatchTriageError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except OSError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

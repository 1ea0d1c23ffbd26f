"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .dataset import CorpusError, corpus_stats, load_corpus, stats_json
from .experiment import (
    CvSpec,
    ExperimentConfig,
    bench_only,
    crossval_only,
    load_config,
    run_experiment,
    table3_csv,
    table4_csv,
    table5_csv,
    ReportBundle,
)
from .pipeline import FittedPipeline
from .textprep import preprocess, word_frequencies

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _splits(text):
    try:
        return [float(t) for t in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad split list {text!r}") from None


def _cv(text):
    body = text[2:] if text.startswith("k=") else text
    try:
        ks = tuple(int(t) for t in _csv_list(body))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --cv value {text!r}; expected k=5,10") from None
    if not ks:
        raise argparse.ArgumentTypeError("--cv needs at least one k")
    return ks


def _add_data(p, required=True):
    p.add_argument("--data", required=required, help="corpus CSV with label and statement columns")


def _add_prep(p):
    p.add_argument("--no-stem", action="store_true", help="skip Porter stemming")
    p.add_argument("--no-lemma", action="store_true", help="skip lemmatization")
    p.add_argument("--stopwords", metavar="FILE", help="stopword list, one word per line")


def _add_grid(p):
    _add_data(p, required=False)
    p.add_argument("--config", metavar="FILE", help="JSON experiment config; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--models", type=_csv_list, help="e.g. LR,NB,SVM,DT,RF,KNN")
    p.add_argument("--features", type=_csv_list, help="BoW, TF-IDF or both")
    p.add_argument("--splits", type=_splits, help="train fractions, e.g. 0.8,0.7,0.6")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--rf-balance", action="store_true", default=None,
                   help="class-balanced bootstrap for the random forest")
    p.add_argument("--threads", type=int, help="worker threads (default: MYTHLAB_THREADS or 1)")
    _add_prep(p)


def build_parser():
    parser = _Parser(prog="mythlab", description="Fact-vs-myth statement classification.")
    parser.add_argument("--version", action="version", version=f"mythlab {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("stats", help="class counts as JSON")
    _add_data(p)

    p = sub.add_parser("prep", help="print preprocessed tokens per statement")
    _add_data(p)
    _add_prep(p)

    p = sub.add_parser("wordfreq", help="token frequencies after preprocessing")
    _add_data(p)
    _add_prep(p)
    p.add_argument("--top", type=int, help="only the N most frequent tokens")
    p.add_argument("--out", metavar="DIR", help="write wordfreq.csv here instead of stdout")

    p = sub.add_parser("run", help="accuracy grid, optional CV and timing")
    _add_grid(p)
    p.add_argument("--cv", type=_cv, metavar="k=5,10", help="also run k-fold CV")
    p.add_argument("--loo", action="store_true", default=None, help="also run leave-one-out")
    p.add_argument("--bench-repeats", type=int, metavar="N", help="also time predictions")

    p = sub.add_parser("crossval", help="k-fold and leave-one-out accuracy")
    _add_grid(p)
    p.add_argument("--cv", type=_cv, metavar="k=5,10")
    p.add_argument("--loo", action="store_true", default=None)

    p = sub.add_parser("bench", help="per-statement testing time")
    _add_grid(p)
    p.add_argument("--bench-repeats", type=int, metavar="N")

    p = sub.add_parser("predict", help="classify statements read from stdin")
    p.add_argument("--model", required=True, metavar="FILE", help="saved model JSON")
    return parser


def _prep_overrides(args):
    cfg = ExperimentConfig(
        dataset_path=args.data,
        no_stem=args.no_stem,
        no_lemma=args.no_lemma,
        stopwords_path=args.stopwords,
    )
    return cfg.prep_config()


def experiment_config(args):
    """Config file (if any) with command-line flags layered on top."""
    try:
        base = load_config(args.config) if args.config else None
    except ValueError as exc:
        raise UsageError(f"bad config {args.config}: {exc}") from None
    values = dataclasses.asdict(base) if base else {}
    if base is not None:
        values["cv"] = base.cv
    flags = {
        "dataset_path": args.data,
        "seed": args.seed,
        "models": args.models,
        "features": args.features,
        "splits": args.splits,
        "output_dir": args.out,
        "rf_balance": args.rf_balance,
        "threads": args.threads,
        "stopwords_path": args.stopwords,
        "bench_repeats": getattr(args, "bench_repeats", None),
    }
    for key, value in flags.items():
        if value is not None:
            values[key] = value
    if args.no_stem:
        values["no_stem"] = True
    if args.no_lemma:
        values["no_lemma"] = True
    ks, loo = getattr(args, "cv", None), getattr(args, "loo", None)
    if ks is not None or loo:
        prev = values.get("cv") or CvSpec(k_values=())
        values["cv"] = CvSpec(
            k_values=ks if ks is not None else prev.k_values,
            loo=bool(loo) or prev.loo,
            stratified=prev.stratified,
        )
    if not values.get("dataset_path"):
        raise UsageError("--data is required (or dataset_path in --config)")
    try:
        return ExperimentConfig(**values)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_stats(args, out):
    stats = corpus_stats(load_corpus(args.data))
    out.write(json.dumps(stats_json(stats), separators=(",", ":")) + "\n")


def cmd_prep(args, out):
    corpus = load_corpus(args.data)
    prep = _prep_overrides(args)
    for s in corpus:
        out.write(f"{s.label.value}\t{preprocess(s.text, prep).joined()}\n")


def cmd_wordfreq(args, out):
    corpus = load_corpus(args.data)
    freq = word_frequencies(corpus, _prep_overrides(args))
    if args.top is not None:
        freq = type(freq)(tuple(freq.top(args.top)))
    text = freq.to_csv()
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "wordfreq.csv").write_text(text, encoding="utf-8")
    else:
        out.write(text)


def cmd_run(args, out):
    bundle = run_experiment(experiment_config(args))
    out.write(table3_csv(bundle))
    for key, err in bundle.to_dict()["errors"].items():
        logging.getLogger("mythlab").error("cell %s failed: %s", key, err)


def cmd_crossval(args, out):
    cfg = experiment_config(args)
    if cfg.cv is None:
        cfg = dataclasses.replace(cfg, cv=CvSpec())
    results = crossval_only(cfg)
    out.write(table4_csv(ReportBundle(cfg.describe(), [], cv_results=results)))


def cmd_bench(args, out):
    out.write(table5_csv(bench_only(experiment_config(args))))


def cmd_predict(args, out, stdin):
    fitted = FittedPipeline.load(args.model)
    lines = [line.strip() for line in stdin]
    texts = [t for t in lines if t]
    for label, p in fitted.predict_texts(texts):
        out.write(label.value if p is None else f"{label.value} {p:.4f}")
        out.write("\n")


COMMANDS = {
    "stats": cmd_stats,
    "prep": cmd_prep,
    "wordfreq": cmd_wordfreq,
    "run": cmd_run,
    "crossval": cmd_crossval,
    "bench": cmd_bench,
}


def main(argv=None, stdin=None, stdout=None):
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
        if not args.command:
            raise UsageError(parser.format_usage().rstrip())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command == "predict":
            cmd_predict(args, stdout, stdin)
        else:
            COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        msg = str(exc)
        if not msg.startswith("usage"):
            sys.stderr.write(parser.format_usage())
        sys.stderr.write(msg + "\n")
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        return EXIT_OK
    except (CorpusError, OSError, ValueError, KeyError, RuntimeError) as exc:
        sys.stderr.write(f"mythlab: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

"""End-to-end experiment grid: split x feature x model, plus CV and timing."""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
import logging
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__, classify
from .bench import CSV_HEADER as BENCH_HEADER
from .bench import measure_testing_time
from .classify import (
    MODEL_ORDER, ForestConfig, KnnConfig, LrConfig, ModelKind, NbConfig, SvmConfig, TreeConfig,
)
from .dataset import Label, SplitSpec, corpus_stats, load_corpus, split_indices, stats_json
from .evaluate import full_report
from .parallel import substream_seed, worker_count
from .pipeline import Pipeline
from .textprep import PrepConfig, read_stopwords, word_frequencies
from .validate import cross_validate, make_kfold, make_loo
from .vectorize import FeatureKind

log = logging.getLogger(__name__)

BUNDLE_FORMAT = 1
FEATURE_ORDER = (FeatureKind.BOW, FeatureKind.TFIDF)


def split_name(fraction):
    train = round(fraction * 100)
    return f"{train}-{100 - train}"


@dataclass(frozen=True)
class CvSpec:
    k_values: tuple = (5, 10)
    loo: bool = False
    stratified: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    features: tuple = FEATURE_ORDER
    models: tuple = MODEL_ORDER
    splits: tuple = (0.8, 0.7, 0.6)
    seed: int = 42
    stratified: bool = True
    cv: CvSpec | None = None
    bench_repeats: int | None = None
    output_dir: str | None = None
    rf_balance: bool = False
    no_stem: bool = False
    no_lemma: bool = False
    stopwords_path: str | None = None
    save_models: bool = True
    threads: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(FeatureKind.parse(f) for f in self.features))
        object.__setattr__(self, "models", tuple(ModelKind.parse(m) for m in self.models))
        object.__setattr__(self, "splits", tuple(float(s) for s in self.splits))
        if not self.features or not self.models or not self.splits:
            raise ValueError("need at least one feature, one model and one split")
        bad = [s for s in self.splits if not 0.0 < s < 1.0]
        if bad:
            raise ValueError(f"train fractions must lie in (0, 1), got {bad}")
        if self.bench_repeats is not None and self.bench_repeats < 3:
            raise ValueError("bench repeats must be at least 3")

    def prep_config(self):
        kwargs = {"do_stem": not self.no_stem, "do_lemmatize": not self.no_lemma}
        if self.stopwords_path:
            kwargs["stopwords"] = read_stopwords(self.stopwords_path)
        return PrepConfig(**kwargs)

    def model_config(self, kind, cell_name):
        """Per-model configuration; seeds come from named substreams."""
        if kind is ModelKind.SVM:
            return SvmConfig(seed=substream_seed(self.seed, f"svm/{cell_name}"))
        if kind is ModelKind.RF:
            return ForestConfig(seed=self.seed, balance=self.rf_balance)
        return {
            ModelKind.LR: LrConfig,
            ModelKind.NB: NbConfig,
            ModelKind.DT: TreeConfig,
            ModelKind.KNN: KnnConfig,
        }[kind]()

    def describe(self):
        return {
            "dataset": os.path.basename(self.dataset_path),
            "features": [f.value for f in self.features],
            "models": [m.value for m in self.models],
            "splits": list(self.splits),
            "seed": self.seed,
            "stratified": self.stratified,
            "cv": None if self.cv is None else {
                "k_values": list(self.cv.k_values), "loo": self.cv.loo,
                "stratified": self.cv.stratified,
            },
            "bench_repeats": self.bench_repeats,
            "rf_balance": self.rf_balance,
            "no_stem": self.no_stem,
            "no_lemma": self.no_lemma,
            "stopwords": os.path.basename(self.stopwords_path) if self.stopwords_path else None,
        }


_CONFIG_KEYS = {
    "dataset_path", "features", "models", "splits", "seed", "stratified", "cv",
    "bench_repeats", "output_dir", "rf_balance", "no_stem", "no_lemma",
    "stopwords_path", "save_models",
}


def config_from_dict(d, base_dir="."):
    unknown = set(d) - _CONFIG_KEYS - {"data", "out"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    d = dict(d)
    if "data" in d:
        d["dataset_path"] = d.pop("data")
    if "out" in d:
        d["output_dir"] = d.pop("out")
    for key in ("dataset_path", "output_dir", "stopwords_path"):
        if d.get(key) and not os.path.isabs(d[key]):
            d[key] = os.path.join(base_dir, d[key])
    if d.get("cv") is not None:
        cv = d["cv"]
        d["cv"] = CvSpec(tuple(cv.get("k_values", (5, 10))), bool(cv.get("loo", False)),
                         bool(cv.get("stratified", True)))
    return ExperimentConfig(**d)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh), os.path.dirname(os.path.abspath(path)))


@dataclass
class CellResult:
    model: ModelKind
    feature: FeatureKind
    split: float
    report: object = None
    error: str | None = None
    fitted: object = None
    test_matrix: object = None

    @property
    def name(self):
        return f"{self.model.value}_{self.feature.value}_{split_name(self.split)}"


@dataclass
class ReportBundle:
    config: dict
    cells: list
    cv_results: list = field(default_factory=list)
    bench_results: list = field(default_factory=list)
    corpus: dict = field(default_factory=dict)
    run_metadata: dict = field(default_factory=dict)

    @property
    def accuracy_grid(self):
        return {
            (c.model, c.feature, c.split): c.report.accuracy
            for c in self.cells
            if c.report is not None
        }

    def to_dict(self):
        def key(c):
            return f"{c.model.value}|{c.feature.value}|{split_name(c.split)}"

        return {
            "format_version": BUNDLE_FORMAT,
            "config": self.config,
            "corpus": self.corpus,
            "accuracy_grid": {key(c): c.report.accuracy for c in self.cells if c.report is not None},
            "reports": {key(c): c.report.to_dict() for c in self.cells if c.report is not None},
            "errors": {key(c): c.error for c in self.cells if c.report is None},
            "cv_results": [r.to_dict() for r in self.cv_results],
            "bench_results": [r.to_dict() for r in self.bench_results],
            "run_metadata": self.run_metadata,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _run_cell(model, feature, split, split_cache, docs, labels, cfg, prep):
    cell = CellResult(model, feature, split)
    train_idx, test_idx = split_cache[split]
    pipeline = Pipeline(feature, model, cfg.model_config(model, cell.name), prep)
    try:
        fitted = pipeline.fit([docs[i] for i in train_idx], [labels[i] for i in train_idx])
        test = fitted.features([docs[i] for i in test_idx], [labels[i] for i in test_idx])
        codes = classify.predict_matrix(fitted.model, test)
        preds = [Label.from_code(c) for c in codes]
        cell.report = full_report(test.labels, preds)
        cell.fitted, cell.test_matrix = fitted, test
    except Exception as exc:  # one failing cell must not abort the grid
        log.exception("cell %s failed", cell.name)
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def run_experiment(cfg, write=True):
    """Run the accuracy grid, optional CV and timing; write artifacts."""
    started = _now()
    corpus = load_corpus(cfg.dataset_path)
    with open(cfg.dataset_path, "rb") as fh:
        dataset_sha = hashlib.sha256(fh.read()).hexdigest()
    prep = cfg.prep_config()
    pipeline0 = Pipeline(FeatureKind.BOW, ModelKind.LR, None, prep)
    docs = pipeline0.preprocess(corpus.texts)
    labels = corpus.labels
    split_cache = {
        s: split_indices(labels, SplitSpec(s, cfg.seed, cfg.stratified)) for s in cfg.splits
    }
    jobs = [(m, f, s) for s in cfg.splits for f in cfg.features for m in cfg.models]
    workers = worker_count(cfg.threads)

    def job(args):
        return _run_cell(*args, split_cache, docs, labels, cfg, prep)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(job, jobs))
    else:
        cells = [job(j) for j in jobs]

    cv_results = []
    if cfg.cv is not None:
        cv_results = run_cross_validation(cfg, corpus, docs, prep)

    bench_results = []
    if cfg.bench_repeats is not None:
        bench_split = 0.8 if 0.8 in cfg.splits else cfg.splits[0]
        for c in cells:
            if c.split == bench_split and c.fitted is not None:
                bench_results.append(
                    measure_testing_time(c.fitted.model, c.test_matrix, cfg.bench_repeats)
                )

    freq = word_frequencies(corpus, prep, docs=docs)
    bundle = ReportBundle(
        config=cfg.describe(),
        cells=cells,
        cv_results=cv_results,
        bench_results=bench_results,
        corpus={
            "n_statements": len(corpus),
            "class_counts": stats_json(corpus_stats(corpus)),
            "sha256": dataset_sha,
            "prep": prep.describe(),
            "top_tokens": [list(e) for e in freq.top(15)],
        },
        run_metadata={
            "seed": cfg.seed,
            "versions": {
                "mythlab": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            "timestamps": {"started": started, "finished": _now()},
        },
    )
    if write and cfg.output_dir:
        write_bundle(bundle, cfg, freq)
    return bundle


def run_cross_validation(cfg, corpus, docs, prep):
    results = []
    for feature in cfg.features:
        for model in cfg.models:
            plans = [
                make_kfold(corpus.labels, k, cfg.cv.stratified, substream_seed(cfg.seed, f"kfold/{k}"))
                for k in cfg.cv.k_values
            ]
            if cfg.cv.loo:
                plans.append(make_loo(len(corpus)))
            for plan in plans:
                name = f"{model.value}_{feature.value}_{plan.kind}{plan.k}"
                pipeline = Pipeline(feature, model, cfg.model_config(model, name), prep)
                results.append(cross_validate(corpus, pipeline, plan, docs=docs, threads=cfg.threads))
    return results


def strip_timestamps(bundle_json):
    """Bundle JSON without the run_metadata.timestamps field, for comparisons."""
    d = json.loads(bundle_json)
    d.get("run_metadata", {}).pop("timestamps", None)
    return json.dumps(d, indent=2, sort_keys=True)


# --- artifact writers --------------------------------------------------------

def _csv_text(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def table3_csv(bundle):
    splits = sorted({c.split for c in bundle.cells}, reverse=True)
    features = [f for f in FEATURE_ORDER if any(c.feature is f for c in bundle.cells)]
    models = [m for m in MODEL_ORDER if any(c.model is m for c in bundle.cells)]
    grid = bundle.accuracy_grid
    header = ["model"] + [f"{split_name(s)} {f.value}" for s in splits for f in features]
    rows = [header]
    for m in models:
        row = [m.value]
        for s in splits:
            for f in features:
                acc = grid.get((m, f, s))
                row.append("" if acc is None else f"{acc:.4f}")
        rows.append(row)
    return _csv_text(rows)


def table4_csv(bundle):
    columns = []
    for r in bundle.cv_results:
        col = "LOO" if r.plan["kind"] == "loo" else f"{r.plan['k']}-fold"
        if col not in columns:
            columns.append(col)
    cells = {}
    for r in bundle.cv_results:
        col = "LOO" if r.plan["kind"] == "loo" else f"{r.plan['k']}-fold"
        cells[(r.pipeline["feature"], r.pipeline["model"], col)] = r.mean_accuracy
    rows = [["feature", "model"] + columns]
    for f in FEATURE_ORDER:
        for m in MODEL_ORDER:
            if any((f.value, m.value, c) in cells for c in columns):
                rows.append([f.value, m.value] + [
                    "" if (f.value, m.value, c) not in cells else f"{cells[(f.value, m.value, c)]:.4f}"
                    for c in columns
                ])
    return _csv_text(rows)


def table5_csv(results):
    return _csv_text([BENCH_HEADER] + [r.csv_row() for r in results])


def write_bundle(bundle, cfg, freq):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bundle.json").write_text(bundle.to_json(), encoding="utf-8")
    (out / "table3.csv").write_text(table3_csv(bundle), encoding="utf-8")
    (out / "wordfreq.csv").write_text(freq.to_csv(), encoding="utf-8")
    if bundle.cv_results:
        (out / "table4.csv").write_text(table4_csv(bundle), encoding="utf-8")
    if bundle.bench_results:
        (out / "table5.csv").write_text(table5_csv(bundle.bench_results), encoding="utf-8")
    for c in bundle.cells:
        if c.report is not None:
            (out / f"confusion_{c.name}.csv").write_text(c.report.confusion.to_csv(), encoding="utf-8")
    if cfg.save_models:
        models_dir = out / "models"
        models_dir.mkdir(exist_ok=True)
        for c in bundle.cells:
            if c.fitted is not None:
                c.fitted.save(models_dir / f"{c.name}.json")


# --- single-table entry points ------------------------------------------------

def _prepared(cfg):
    corpus = load_corpus(cfg.dataset_path)
    prep = cfg.prep_config()
    docs = Pipeline(FeatureKind.BOW, ModelKind.LR, None, prep).preprocess(corpus.texts)
    return corpus, prep, docs


def crossval_only(cfg):
    """Cross-validation table without the split grid; writes table4.csv."""
    if cfg.cv is None:
        raise ValueError("no cross-validation plan configured")
    corpus, prep, docs = _prepared(cfg)
    results = run_cross_validation(cfg, corpus, docs, prep)
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        bundle = ReportBundle(cfg.describe(), [], cv_results=results)
        (out / "table4.csv").write_text(table4_csv(bundle), encoding="utf-8")
    return results


def bench_only(cfg):
    """Fit every (model, feature) on the first split and time prediction; writes table5.csv."""
    corpus, prep, docs = _prepared(cfg)
    labels = corpus.labels
    split = cfg.splits[0]
    split_cache = {split: split_indices(labels, SplitSpec(split, cfg.seed, cfg.stratified))}
    repeats = cfg.bench_repeats or 5
    results = []
    for f in cfg.features:
        for m in cfg.models:
            cell = _run_cell(m, f, split, split_cache, docs, labels, cfg, prep)
            if cell.fitted is None:
                raise RuntimeError(f"{cell.name}: {cell.error}")
            results.append(measure_testing_time(cell.fitted.model, cell.test_matrix, repeats))
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table5.csv").write_text(table5_csv(results), encoding="utf-8")
    return results

"""k-fold and leave-one-out fold plans and cross-validated accuracy."""
from __future__ import annotations

import hashlib
import json
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import LABELS, Label
from .parallel import worker_count

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple  # of (train_indices, validation_indices)
    n: int
    kind: str
    k: int
    stratified: bool = False
    seed: int = 0

    def validation_sets(self):
        return [val for _, val in self.folds]

    def describe(self):
        return {"kind": self.kind, "k": self.k, "n": self.n,
                "stratified": self.stratified, "seed": self.seed}


def _folds_from_assignment(assign, k):
    n = len(assign)
    everything = np.arange(n)
    folds = []
    for f in range(k):
        mask = assign == f
        folds.append((everything[~mask], everything[mask]))
    return tuple(folds)


def make_kfold(labels, k, stratified=True, seed=42):
    """Deal shuffled indices round-robin into ``k`` folds.

    Stratified plans shuffle each class separately and keep dealing where
    the previous class stopped, so folds stay within one of each other in
    size and within one of the ideal per-class count.
    """
    labels = [Label.parse(l) for l in labels]
    n = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} samples")
    rng = np.random.default_rng(seed)
    if stratified:
        groups = [np.array([i for i, l in enumerate(labels) if l is c], dtype=np.int64) for c in LABELS]
        missing = [c.value for c, g in zip(LABELS, groups) if len(g) == 0]
        if missing:
            raise ValueError(f"stratified folds need every class; missing {missing}")
        order = []
        for g in groups:
            g = g.copy()
            rng.shuffle(g)
            order.append(g)
        order = np.concatenate(order)
    else:
        order = rng.permutation(n)
    assign = np.empty(n, dtype=np.int64)
    assign[order] = np.arange(n) % k
    return FoldPlan(_folds_from_assignment(assign, k), n, "kfold", k, stratified, seed)


def make_loo(n):
    if n < 2:
        raise ValueError("leave-one-out needs at least 2 samples")
    return FoldPlan(_folds_from_assignment(np.arange(n), n), n, "loo", n, False, 0)


@dataclass(frozen=True)
class CvResult:
    per_fold_accuracy: tuple
    mean_accuracy: float
    std_accuracy: float
    config_fingerprint: str
    plan: dict = field(default_factory=dict)
    pipeline: dict = field(default_factory=dict)
    flagged_folds: tuple = ()

    def to_dict(self):
        return {
            "pipeline": self.pipeline,
            "plan": self.plan,
            "config_fingerprint": self.config_fingerprint,
            "per_fold_accuracy": list(self.per_fold_accuracy),
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "flagged_folds": list(self.flagged_folds),
        }


def config_fingerprint(pipeline_desc, plan_desc):
    blob = json.dumps({"pipeline": pipeline_desc, "plan": plan_desc}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _describe(pipeline):
    describe = getattr(pipeline, "describe", None)
    return describe() if describe else {"pipeline": type(pipeline).__name__}


def cross_validate(corpus, pipeline, plan, docs=None, threads=None):
    """Mean and population std of per-fold accuracy.

    ``pipeline`` needs ``fit_predict(train_docs, train_labels, test_docs)``
    and, unless ``docs`` is given, ``preprocess(texts)``. Preprocessing is
    per-statement and learns nothing, so it runs once up front; the
    vocabulary, idf and classifier are refit inside every fold.
    """
    if plan.n != len(corpus):
        raise ValueError(f"plan covers {plan.n} samples, corpus has {len(corpus)}")
    if docs is None:
        docs = pipeline.preprocess(corpus.texts)
    labels = corpus.labels

    def run_fold(fold):
        train_idx, val_idx = fold
        train_labels = [labels[i] for i in train_idx]
        truth = [labels[i] for i in val_idx]
        if len(set(train_labels)) < 2:
            constant = train_labels[0]
            preds = [constant] * len(val_idx)
            flagged = True
        else:
            preds = pipeline.fit_predict(
                [docs[i] for i in train_idx], train_labels, [docs[i] for i in val_idx]
            )
            flagged = False
        correct = sum(p is t for p, t in zip(preds, truth))
        return correct / len(truth), flagged

    workers = worker_count(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_fold, plan.folds))
    else:
        results = [run_fold(f) for f in plan.folds]

    acc = [a for a, _ in results]
    flagged = tuple(i for i, (_, f) in enumerate(results) if f)
    if flagged:
        log.warning("%d fold(s) trained on a single class; scored as constant predictions", len(flagged))
    pipe_desc, plan_desc = _describe(pipeline), plan.describe()
    return CvResult(
        tuple(acc),
        statistics.fmean(acc),
        statistics.pstdev(acc),
        config_fingerprint(pipe_desc, plan_desc),
        plan_desc,
        pipe_desc,
        flagged,
    )

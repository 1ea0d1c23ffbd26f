"""Acceptance criteria, one PASS/FAIL line each.

Criteria 1-6 need the published dataset: set MYTHLAB_DATASET to its CSV path.
Without it they are skipped and criteria 7-12 run on the bundled synthetic corpus.
"""
import itertools
import re
import time

import numpy as np
import pytest
import scipy.sparse as sp

from mythlab import classify
from mythlab.classify import LrConfig, ModelKind, logistic
from mythlab.dataset import Label, SplitSpec, corpus_stats, load_corpus, split_indices
from mythlab.evaluate import full_report
from mythlab.experiment import CvSpec, ExperimentConfig, crossval_only, run_experiment, strip_timestamps
from mythlab.parallel import ENV_THREADS
from mythlab.pipeline import Pipeline
from mythlab.porter import stem
from mythlab.validate import make_kfold, make_loo
from mythlab.vectorize import FeatureKind, Vectorizer

from conftest import matrix, real_dataset_path, synthetic_corpus_path
from oracles import nb_posterior_oracle, report_oracle
from test_porter import reference_pairs

F, M = Label.FACT, Label.MYTH


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} | {detail}")
        assert ok, detail

    return emit


@pytest.fixture
def needs_dataset(request, capsys):
    if real_dataset_path() is None:
        number = re.search(r"criterion_(\d+)", request.node.name).group(1)
        with capsys.disabled():
            print(f"\nCRITERION {number}: SKIP | published dataset not available (set MYTHLAB_DATASET)")
        pytest.skip("published dataset not available (set MYTHLAB_DATASET)")


# --- criteria 1-6: published dataset ------------------------------------------

@pytest.fixture(scope="module")
def paper_grid(tmp_path_factory):
    if real_dataset_path() is None:
        return None  # the needs_dataset fixture reports the skip
    out = tmp_path_factory.mktemp("paper_grid")
    start = time.perf_counter()
    bundle = run_experiment(ExperimentConfig(real_dataset_path(), bench_repeats=5, output_dir=str(out)))
    return bundle, time.perf_counter() - start, out


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_1_dataset_stats(verdict):
    start = time.perf_counter()
    stats = corpus_stats(load_corpus(real_dataset_path()))
    elapsed = time.perf_counter() - start
    ok = stats == {F: 953, M: 436} and elapsed < 1.0
    verdict(1, ok, f"stats={ {k.value: v for k, v in stats.items()} } in {elapsed:.3f}s (want 953/436, <1s)")


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_2_table3_headline(verdict, paper_grid):
    bundle, elapsed, _ = paper_grid
    acc = bundle.accuracy_grid[(ModelKind.LR, FeatureKind.BOW, 0.8)]
    ok = abs(acc - 0.90) <= 0.05 and len(bundle.accuracy_grid) == 36 and elapsed < 600
    verdict(2, ok, f"LR/BoW/80-20 accuracy {acc:.4f} (target 0.90 +/- 0.05); grid {elapsed:.0f}s")


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_3_table3_orderings(verdict, paper_grid):
    g = paper_grid[0].accuracy_grid
    nb = g[(ModelKind.NB, FeatureKind.BOW, 0.8)] - g[(ModelKind.NB, FeatureKind.TFIDF, 0.8)]
    knn = g[(ModelKind.KNN, FeatureKind.TFIDF, 0.8)] - g[(ModelKind.KNN, FeatureKind.BOW, 0.8)]
    best = max(v for (m, f, s), v in g.items() if s == 0.8)
    gap = best - g[(ModelKind.LR, FeatureKind.BOW, 0.8)]
    ok = nb >= 0.05 and knn >= 0.05 and gap <= 0.03
    verdict(3, ok, f"NB BoW-TFIDF {nb:+.4f} (>=0.05); KNN TFIDF-BoW {knn:+.4f} (>=0.05); "
                   f"best-LR/BoW {gap:.4f} (<=0.03)")


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_4_loo(verdict):
    cfg = ExperimentConfig(real_dataset_path(), models=("LR",), features=("BoW",),
                           cv=CvSpec(k_values=(), loo=True))
    start = time.perf_counter()
    (res,) = crossval_only(cfg)
    elapsed = time.perf_counter() - start
    ok = abs(res.mean_accuracy - 0.86) <= 0.05 and elapsed < 1800
    verdict(4, ok, f"LOO LR/BoW mean {res.mean_accuracy:.4f} (target 0.86 +/- 0.05) in {elapsed:.0f}s")


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_5_timing_order(verdict, paper_grid):
    per = {(r.model_kind, r.feature_kind): r.per_statement for r in paper_grid[0].bench_results}
    chain = [per[("LR", "BoW")], per[("DT", "BoW")], per[("RF", "BoW")], per[("SVM", "BoW")],
             per[("KNN", "TF-IDF")]]
    ordered = all(a < b for a, b in zip(chain, chain[1:]))
    ratio = chain[-1] / chain[0]
    verdict(5, ordered and ratio >= 100,
            "per-statement us LR,DT,RF,SVM,KNN(TF-IDF) = "
            + ", ".join(f"{v:.3f}" for v in chain) + f"; KNN/LR ratio {ratio:.0f} (>=100)")


@pytest.mark.usefixtures("needs_dataset")
def test_criterion_6_wordfreq_top(verdict, paper_grid):
    first = (paper_grid[2] / "wordfreq.csv").read_text().splitlines()[1].split(",")[0]
    verdict(6, first == "develop", f"top wordfreq token {first!r} (want 'develop')")


# --- criteria 7-12: properties on synthetic data -------------------------------

def test_criterion_7_metric_oracle(verdict):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 201))
        y_true = [F if b else M for b in rng.integers(0, 2, n)]
        y_pred = [F if b else M for b in rng.integers(0, 2, n)]
        r = full_report(y_true, y_pred)
        o = report_oracle([t.value for t in y_true], [p.value for p in y_pred])
        diffs = [abs(r.accuracy - o["accuracy"])]
        for cls in (F, M):
            diffs += [abs(getattr(r.per_class[cls], k) - o[cls.value][k]) for k in ("precision", "recall", "f1")]
            diffs.append(abs(r.per_class[cls].support - o[cls.value]["support"]))
        for k in ("precision", "recall", "f1"):
            diffs.append(abs(getattr(r.macro_avg, k) - o["macro"][k]))
            diffs.append(abs(getattr(r.weighted_avg, k) - o["weighted"][k]))
        worst = max(worst, max(diffs))
    equal_exact = True
    for _ in range(300):
        half = int(rng.integers(1, 101))
        y_true = [F] * half + [M] * half
        y_pred = [F if b else M for b in rng.integers(0, 2, 2 * half)]
        r = full_report(y_true, y_pred)
        equal_exact &= all(getattr(r.macro_avg, k) == getattr(r.weighted_avg, k)
                           for k in ("precision", "recall", "f1"))
    verdict(7, worst <= 1e-12 and equal_exact,
            f"max |report - oracle| = {worst:.2e} over 1000 vectors (<=1e-12); "
            f"macro==weighted under equal supports: {equal_exact}")


def test_criterion_8_fold_plans(verdict):
    rng = np.random.default_rng(8)
    failures = []
    for trial in range(200):
        n = int(rng.integers(2, 300))
        k = int(rng.integers(2, min(n, 20) + 1))
        seed = int(rng.integers(0, 2**32))
        stratified = bool(rng.integers(0, 2))
        n_myth = int(rng.integers(1, n)) if stratified else int(rng.integers(0, n + 1))
        labels = [M] * n_myth + [F] * (n - n_myth)
        labels = [labels[i] for i in rng.permutation(n)]
        plan = make_kfold(labels, k, stratified, seed)
        vals = plan.validation_sets()
        sizes = [len(v) for v in vals]
        ok = np.array_equal(np.sort(np.concatenate(vals)), np.arange(n)) and max(sizes) - min(sizes) <= 1
        ok &= all(len(np.intersect1d(t, v)) == 0 and len(t) + len(v) == n for t, v in plan.folds)
        if stratified:
            for c in (F, M):
                n_c = sum(l is c for l in labels)
                ok &= all(abs(sum(labels[i] is c for i in v) - n_c / k) < 1 + 1e-9 for v in vals)
        loo = make_loo(n)
        ok &= loo.k == n and all(len(v) == 1 for v in loo.validation_sets())
        ok &= np.array_equal(np.sort(np.concatenate(loo.validation_sets())), np.arange(n))
        if not ok:
            failures.append((n, k, seed, stratified))
    verdict(8, not failures, f"200 random (n, k, seed, stratified) tuples; failures: {failures[:3]}")


def _nb_instances():
    """Every multiset of n <= 6 labelled documents over V <= 4 terms.

    Documents are single tokens for all V, plus every non-empty binary
    presence pattern for V <= 2; training order does not matter to NB.
    """
    for V in range(1, 5):
        doc_types = [tuple(int(j == t) for j in range(V)) for t in range(V)]
        if V <= 2:
            doc_types = [p for p in itertools.product((0, 1), repeat=V) if any(p)]
        labelled = [(d, c) for d in doc_types for c in (0, 1)]
        queries = [q for q in itertools.product(range(4), repeat=V) if sum(q) <= 3]
        for n in range(1, 7):
            for combo in itertools.combinations_with_replacement(labelled, n):
                X = np.array([d for d, _ in combo])
                y = np.array([c for _, c in combo])
                yield X, y, queries


def test_criterion_9_naive_bayes_enumeration(verdict):
    instances = disagreements = checked = 0
    for X, y, queries in _nb_instances():
        model = classify.fit_naive_bayes(matrix(X, y), classify.NbConfig(alpha=1.0))
        got = classify.predict_codes(model, sp.csr_matrix(np.array(queries, dtype=float)))
        for q, g in zip(queries, got):
            checked += 1
            disagreements += int(g != nb_posterior_oracle(X, y, q, alpha=1))
        instances += 1
    verdict(9, disagreements == 0,
            f"{instances} training sets x queries = {checked} predictions; {disagreements} disagree with exact Bayes rule")


def test_criterion_10_lr_gradient_and_descent(verdict):
    from test_classify_linear import finite_difference_error

    rng = np.random.default_rng(10)
    worst = max(finite_difference_error(rng) for _ in range(50))
    corpus = load_corpus(synthetic_corpus_path())
    pipe = Pipeline("BoW", "LR")
    train_idx, _ = split_indices(corpus.labels, SplitSpec(0.8))
    docs = pipe.preprocess([corpus.texts[i] for i in train_idx])
    fm = Vectorizer.fit(docs, "BoW").transform(docs, [corpus.labels[i] for i in train_idx])
    history = []
    logistic.gradient_descent(fm.X, fm.y, LrConfig(), history)
    rises = sum(b > a + 1e-12 for a, b in zip(history, history[1:]))
    verdict(10, worst < 1e-6 and rises == 0,
            f"max FD error {worst:.2e} over 50 instances (<1e-6); "
            f"{len(history) - 1} epochs on corpus, {rises} loss increases")


def test_criterion_11_porter_reference(verdict):
    pairs = reference_pairs()
    wrong = [(w, s, stem(w)) for w, s in pairs if stem(w) != s]
    verdict(11, len(pairs) >= 30 and not wrong, f"{len(pairs) - len(wrong)}/{len(pairs)} reference pairs exact")


def test_criterion_12_determinism(verdict, tmp_path, monkeypatch):
    texts = []
    for threads, name in (("1", "a"), ("2", "b")):
        monkeypatch.setenv(ENV_THREADS, threads)
        out = tmp_path / name
        bundle = run_experiment(ExperimentConfig(synthetic_corpus_path(), output_dir=str(out)))
        assert len(bundle.accuracy_grid) == 36
        texts.append(strip_timestamps((out / "bundle.json").read_text(encoding="utf-8")))
    verdict(12, texts[0] == texts[1],
            "36-cell grid, MYTHLAB_THREADS=1 vs 2: bundle.json identical outside timestamps = "
            f"{texts[0] == texts[1]}")

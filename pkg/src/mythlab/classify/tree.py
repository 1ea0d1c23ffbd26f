"""Gini decision trees and bootstrap random forests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .base import ModelKind, TrainedModel

# Slack when checking that a split does not raise weighted impurity.
IMPURITY_EPS = 1e-12
# Feature columns evaluated per vectorized block.
_BLOCK = 512


@dataclass(frozen=True)
class TreeConfig:
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_split: int = 2

    def __post_init__(self):
        if self.criterion != "gini":
            raise ValueError("only the gini criterion is supported")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    seed: int = 42
    tree: TreeConfig = field(default_factory=TreeConfig)
    # None means floor(sqrt(V)), clamped to at least 1
    max_features: int | None = None
    bootstrap: bool = True
    balance: bool = False

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")

    def features_per_split(self, n_features):
        if self.max_features is not None:
            return max(1, min(self.max_features, n_features))
        return max(1, math.isqrt(n_features))


def gini(n_myth, n):
    """Gini impurity of a binary node."""
    if n == 0:
        return 0.0
    p = n_myth / n
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def majority(n_myth, n):
    # ties go to Fact
    return 1 if 2 * n_myth > n else 0


def _non_constant_features(Xn):
    """Columns of the node submatrix ``Xn`` that take more than one value."""
    n = Xn.shape[0]
    nnz = np.bincount(Xn.indices, minlength=Xn.shape[1])
    cols = np.flatnonzero(nnz)
    partial = cols[nnz[cols] < n]
    full = cols[nnz[cols] == n]
    if len(full):
        block = Xn[:, full].toarray()
        varying = block.min(axis=0) < block.max(axis=0)
        partial = np.union1d(partial, full[varying])
    return partial


def best_split(block, y):
    """Best Gini split over the columns of a dense ``block``.

    Returns ``(weighted_gini, column, threshold)`` or ``None`` when no column
    has two distinct values. Thresholds are midpoints between consecutive
    distinct sorted values; ties prefer the lower column, then the lower
    threshold.
    """
    n, f = block.shape
    if n < 2 or f == 0:
        return None
    order = np.argsort(block, axis=0, kind="stable")
    sorted_vals = np.take_along_axis(block, order, axis=0)
    sorted_y = y[order]
    left_myth = np.cumsum(sorted_y, axis=0)[:-1].astype(np.float64)
    total_myth = float(y.sum())
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    right_myth = total_myth - left_myth
    weighted = (
        2.0 * left_myth * (n_left - left_myth) / n_left
        + 2.0 * right_myth * (n_right - right_myth) / n_right
    ) / n
    valid = sorted_vals[:-1] < sorted_vals[1:]
    if not valid.any():
        return None
    weighted = np.where(valid, weighted, np.inf)
    flat = np.argmin(weighted.T)
    col, pos = divmod(int(flat), n - 1)
    threshold = 0.5 * (sorted_vals[pos, col] + sorted_vals[pos + 1, col])
    return float(weighted[pos, col]), col, float(threshold)


class _Builder:
    def __init__(self, X, y, cfg, n_candidates=None, rng=None):
        self.X = X
        self.y = np.asarray(y, dtype=np.int64)
        self.cfg = cfg
        self.n_candidates = n_candidates
        self.rng = rng
        self.feature, self.threshold = [], []
        self.left, self.right, self.label = [], [], []
        self.n_samples, self.impurity = [], []

    def _new_node(self, rows):
        n_myth = int(self.y[rows].sum())
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.label.append(majority(n_myth, len(rows)))
        self.n_samples.append(len(rows))
        self.impurity.append(gini(n_myth, len(rows)))
        return len(self.feature) - 1

    def _find_split(self, rows):
        Xn = self.X[rows]
        candidates = _non_constant_features(Xn)
        if self.n_candidates is not None and len(candidates) > self.n_candidates:
            candidates = np.sort(
                self.rng.choice(candidates, size=self.n_candidates, replace=False)
            )
        if len(candidates) == 0:
            return None, Xn
        y = self.y[rows]
        best = None
        for start in range(0, len(candidates), _BLOCK):
            cols = candidates[start : start + _BLOCK]
            found = best_split(Xn[:, cols].toarray(), y)
            if found is not None and (best is None or found[0] < best[0]):
                best = (found[0], int(cols[found[1]]), found[2])
        return best, Xn

    def build(self, rows):
        root = self._new_node(rows)
        stack = [(root, rows, 0)]
        while stack:
            node, rows, depth = stack.pop()
            impurity = self.impurity[node]
            if (
                impurity == 0.0
                or len(rows) < self.cfg.min_samples_split
                or (self.cfg.max_depth is not None and depth >= self.cfg.max_depth)
            ):
                continue
            split, Xn = self._find_split(rows)
            # zero-gain splits are taken (XOR needs one at the root); gini is
            # concave, so a split never raises the weighted impurity
            if split is None or split[0] > impurity + IMPURITY_EPS:
                continue
            _, feat, thr = split
            col = Xn[:, feat].toarray().ravel()
            go_left = col <= thr
            left_rows, right_rows = rows[go_left], rows[~go_left]
            self.feature[node] = feat
            self.threshold[node] = thr
            self.left[node] = self._new_node(left_rows)
            self.right[node] = self._new_node(right_rows)
            stack.append((self.right[node], right_rows, depth + 1))
            stack.append((self.left[node], left_rows, depth + 1))
        return {
            "feature": np.array(self.feature, dtype=np.int64),
            "threshold": np.array(self.threshold, dtype=np.float64),
            "left": np.array(self.left, dtype=np.int64),
            "right": np.array(self.right, dtype=np.int64),
            "label": np.array(self.label, dtype=np.int8),
            "n_samples": np.array(self.n_samples, dtype=np.int64),
            "impurity": np.array(self.impurity, dtype=np.float64),
        }


def grow_tree(X, y, rows, cfg, n_candidates=None, rng=None):
    X = sp.csr_matrix(X)
    return _Builder(X, y, cfg, n_candidates, rng).build(np.asarray(rows, dtype=np.int64))


def fit_decision_tree(train, cfg=None):
    cfg = cfg or TreeConfig()
    if train.n_rows == 0:
        raise ValueError("cannot fit a tree on an empty training set")
    tree = grow_tree(train.X, train.y, np.arange(train.n_rows), cfg)
    return TrainedModel(ModelKind.DT, {"tree": tree}, train.fingerprint, train.X.shape[1])


def tree_rng(seed, tree_index):
    """Independent RNG stream for one tree of a forest."""
    return np.random.default_rng([seed, tree_index])


def _bootstrap_rows(y, rng, balance):
    n = len(y)
    if not balance:
        return rng.integers(0, n, size=n)
    classes = [np.flatnonzero(y == c) for c in (0, 1)]
    present = [c for c in classes if len(c)]
    m = min(len(c) for c in present)
    return np.concatenate([rng.choice(c, size=m, replace=True) for c in present])


def fit_random_forest(train, cfg=None):
    cfg = cfg or ForestConfig()
    if train.n_rows == 0:
        raise ValueError("cannot fit a forest on an empty training set")
    X = sp.csr_matrix(train.X)
    y = np.asarray(train.y)
    mtry = cfg.features_per_split(X.shape[1])
    trees = []
    for i in range(cfg.n_trees):
        rng = tree_rng(cfg.seed, i)
        if cfg.bootstrap:
            rows = np.sort(_bootstrap_rows(y, rng, cfg.balance))
        else:
            rows = np.arange(train.n_rows)
        trees.append(grow_tree(X, y, rows, cfg.tree, n_candidates=mtry, rng=rng))
    return TrainedModel(
        ModelKind.RF,
        {"trees": trees, "features_per_split": mtry},
        train.fingerprint,
        X.shape[1],
    )


def tree_predict_dense(tree, Xd):
    node = np.zeros(Xd.shape[0], dtype=np.int64)
    rows = np.arange(Xd.shape[0])
    feature, threshold = tree["feature"], tree["threshold"]
    left, right = tree["left"], tree["right"]
    while True:
        f = feature[node]
        internal = f >= 0
        if not internal.any():
            break
        vals = Xd[rows, np.where(internal, f, 0)]
        nxt = np.where(vals <= threshold[node], left[node], right[node])
        node = np.where(internal, nxt, node)
    return tree["label"][node]


def predict_codes_tree(params, X):
    Xd = X.toarray() if sp.issparse(X) else np.asarray(X)
    return tree_predict_dense(params["tree"], Xd).astype(np.int8)


def forest_votes(params, X):
    Xd = X.toarray() if sp.issparse(X) else np.asarray(X)
    votes = np.zeros(Xd.shape[0], dtype=np.int64)
    for tree in params["trees"]:
        votes += tree_predict_dense(tree, Xd)
    return votes


def predict_codes_forest(params, X):
    votes = forest_votes(params, X)
    # strict majority for Myth; ties go to Fact
    return (2 * votes > len(params["trees"])).astype(np.int8)

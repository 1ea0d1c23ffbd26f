"""k-nearest-neighbour voting with Euclidean distance on dense rows."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..dataset import Label
from ..vectorize import FingerprintMismatch
from .base import ModelKind, TrainedModel, vector_as_row


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5
    metric: str = "euclidean"

    def __post_init__(self):
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError("k must be a positive odd integer")
        if self.metric != "euclidean":
            raise ValueError("only the euclidean metric is supported")


def fit_knn(train, cfg=None):
    cfg = cfg or KnnConfig()
    if train.n_rows == 0:
        raise ValueError("KNN needs a non-empty training set")
    if cfg.k > train.n_rows:
        raise ValueError(f"k={cfg.k} exceeds the {train.n_rows} training rows")
    return TrainedModel(
        ModelKind.KNN,
        {"X": sp.csr_matrix(train.X), "y": np.asarray(train.y, dtype=np.int8), "k": cfg.k},
        train.fingerprint,
        train.X.shape[1],
    )


def neighbours(train_dense, q, k):
    """Indices of the ``k`` nearest rows; equal distances keep index order."""
    diff = train_dense - q
    d2 = np.einsum("ij,ij->i", diff, diff)
    return np.argsort(d2, kind="stable")[:k]


def vote(labels):
    return 1 if 2 * int(np.sum(labels)) > len(labels) else 0


def predict_codes(params, X):
    k = int(params["k"])
    y = params["y"]
    if len(y) == 0:
        raise ValueError("KNN model has an empty training set")
    train_dense = params["X"].toarray()
    Q = X.toarray() if sp.issparse(X) else np.asarray(X)
    out = np.empty(Q.shape[0], dtype=np.int8)
    for i, q in enumerate(Q):
        out[i] = vote(y[neighbours(train_dense, q, k)])
    return out


def knn_predict(train, query, cfg=None):
    """Label for one query vector against a training matrix."""
    cfg = cfg or KnnConfig()
    if train.n_rows == 0:
        raise ValueError("KNN needs a non-empty training set")
    if cfg.k > train.n_rows:
        raise ValueError(f"k={cfg.k} exceeds the {train.n_rows} training rows")
    if query.fingerprint != train.fingerprint:
        raise FingerprintMismatch("query built with a different vocabulary")
    code = predict_codes(
        {"X": train.X, "y": np.asarray(train.y), "k": cfg.k}, vector_as_row(query)
    )[0]
    return Label.from_code(code)

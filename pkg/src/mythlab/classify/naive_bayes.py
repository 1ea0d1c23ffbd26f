"""Multinomial naive Bayes with Laplace smoothing."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .base import ModelKind, TrainedModel

# Relative margin under which two class scores count as tied (tie -> Fact).
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class NbConfig:
    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")


def fit_naive_bayes(train, cfg=None):
    cfg = cfg or NbConfig()
    X = train.X
    if X.nnz and X.data.min() < 0:
        raise ValueError("naive Bayes needs nonnegative feature values")
    if X.nnz and not np.all(X.data == np.round(X.data)):
        warnings.warn(
            "naive Bayes fitted on non-integer features; treating them as fractional counts",
            stacklevel=2,
        )
    n, V = X.shape
    y = np.asarray(train.y)
    log_prior = np.empty(2)
    log_lik = np.empty((2, V))
    with np.errstate(divide="ignore"):
        for c in (0, 1):
            rows = y == c
            log_prior[c] = np.log(rows.sum() / n)
            counts = np.asarray(X[rows].sum(axis=0)).ravel()
            log_lik[c] = np.log((counts + cfg.alpha) / (counts.sum() + cfg.alpha * V))
    return TrainedModel(
        ModelKind.NB,
        {"log_prior": log_prior, "log_likelihood": log_lik},
        train.fingerprint,
        V,
    )


def class_scores(params, X):
    """Unnormalized log posteriors, one column per class (Fact, Myth)."""
    return np.asarray(X @ params["log_likelihood"].T) + params["log_prior"]


def predict_codes(params, X):
    s = class_scores(params, X)
    fact, myth = s[:, 0], s[:, 1]
    scale = np.maximum(np.abs(fact), np.abs(myth))
    # an absent class has a -inf prior; keep the margin finite for it
    scale = np.where(np.isfinite(scale), scale, 1.0)
    margin = TIE_RTOL * np.maximum(1.0, scale)
    return (myth - fact > margin).astype(np.int8)

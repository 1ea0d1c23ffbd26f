"""Linear SVM solved in the primal with Pegasos stochastic subgradient steps."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import ModelKind, TrainedModel, require_both_classes


@dataclass(frozen=True)
class SvmConfig:
    l2_lambda: float = 1e-4
    epochs: int = 100
    seed: int = 42

    def __post_init__(self):
        if self.l2_lambda <= 0:
            raise ValueError("l2_lambda must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def objective(w, b, X, y_pm, l2_lambda):
    """``l2/2 * (|w|^2 + b^2) + mean hinge loss``; labels in {-1, +1}.

    The bias is the weight of an implicit constant feature and is
    regularized with the rest, as in the augmented Pegasos formulation.
    """
    margins = y_pm * (np.asarray(X @ w).ravel() + b)
    hinge = np.maximum(0.0, 1.0 - margins).mean()
    return 0.5 * l2_lambda * (float(w @ w) + b * b) + float(hinge)


def pegasos(X, y_pm, cfg, trace=None):
    """Return the average of the iterates over the final half of training.

    The weight vector is stored as ``scale * v`` so each step touches only
    the nonzeros of one row; the running average is recovered lazily.
    ``trace``, if a list, receives ``(t, w, b)`` after the first step.
    """
    n, V = X.shape
    lam = cfg.l2_lambda
    radius = 1.0 / math.sqrt(lam)
    rng = np.random.default_rng(cfg.seed)
    indptr, indices, data = X.indptr, X.indices, X.data

    v = np.zeros(V + 1)  # last slot is the bias weight
    scale = 1.0
    sq_norm = 0.0  # |v|^2
    total = cfg.epochs * n
    avg_from = total - max(1, total // 2) + 1
    sigma = 0.0  # sum of scales over averaged steps
    correction = np.zeros(V + 1)  # lazy-average bookkeeping

    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            lo, hi = indptr[i], indptr[i + 1]
            cols = indices[lo:hi]
            vals = data[lo:hi]
            yi = y_pm[i]
            margin = yi * scale * (float(v[cols] @ vals) + v[V])

            if t == 1:
                # (1 - eta*lam) == 0 on the first step wipes the iterate
                v[:] = 0.0
                scale, sq_norm = 1.0, 0.0
            else:
                scale *= 1.0 - 1.0 / t

            if margin < 1.0:
                step = eta * yi / scale
                old = v[cols]
                delta = step * vals
                sq_norm += float(2.0 * old @ delta + delta @ delta)
                sq_norm += 2.0 * v[V] * step + step * step
                v[cols] = old + delta
                v[V] += step
                if sigma:
                    correction[cols] += sigma * delta
                    correction[V] += sigma * step

            norm = scale * math.sqrt(max(sq_norm, 0.0))
            if norm > radius:
                scale *= radius / norm

            if trace is not None and t == 1:
                w1 = scale * v
                trace.append((t, w1[:V].copy(), float(w1[V])))
            if t >= avg_from:
                sigma += scale
    w_avg = (sigma * v - correction) / (total - avg_from + 1)
    return w_avg[:V], float(w_avg[V])


def fit_linear_svm(train, cfg=None):
    cfg = cfg or SvmConfig()
    require_both_classes(train.y)
    y_pm = np.where(np.asarray(train.y) == 1, 1.0, -1.0)
    w, b = pegasos(train.X.tocsr(), y_pm, cfg)
    return TrainedModel(
        ModelKind.SVM, {"weights": w, "bias": b}, train.fingerprint, train.X.shape[1]
    )


def decision_scores(params, X):
    return np.asarray(X @ params["weights"]).ravel() + params["bias"]


def predict_codes(params, X):
    # zero score is a tie and goes to Fact
    return (decision_scores(params, X) > 0.0).astype(np.int8)

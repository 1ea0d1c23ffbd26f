"""Binary logistic regression trained by full-batch gradient descent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ModelKind, TrainedModel, WrongModelKind, require_both_classes, vector_as_row


@dataclass(frozen=True)
class LrConfig:
    learning_rate: float = 0.1
    l2_lambda: float = 1e-4
    max_epochs: int = 1000
    tol: float = 1e-6

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be nonnegative")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not 0 < self.tol < 1:
            raise ValueError("tol must lie in (0, 1)")


def sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=np.float64)))


def objective(w, b, X, y, l2_lambda):
    """Mean negative log-likelihood plus ``l2/2 * |w|^2`` and its gradient.

    ``y`` holds 1 for Myth and 0 for Fact. The bias is not regularized.
    Returns ``(loss, grad_w, grad_b)``.
    """
    n = X.shape[0]
    z = X @ w + b
    loss = float(np.sum(np.logaddexp(0.0, z) - y * z)) / n + 0.5 * l2_lambda * float(w @ w)
    residual = sigmoid(z) - y
    grad_w = np.asarray(X.T @ residual).ravel() / n + l2_lambda * w
    grad_b = float(residual.sum()) / n
    return loss, grad_w, grad_b


def gradient_descent(X, y, cfg, history=None):
    """Run gradient descent from zero weights.

    Stops when the largest gradient component drops below ``cfg.tol``. If
    ``history`` is a list, the loss before every update is appended to it.
    """
    y = np.asarray(y, dtype=np.float64)
    w = np.zeros(X.shape[1])
    b = 0.0
    epochs = 0
    for epochs in range(1, cfg.max_epochs + 1):
        loss, gw, gb = objective(w, b, X, y, cfg.l2_lambda)
        if history is not None:
            history.append(loss)
        if max(float(np.max(np.abs(gw), initial=0.0)), abs(gb)) < cfg.tol:
            break
        w -= cfg.learning_rate * gw
        b -= cfg.learning_rate * gb
    if history is not None:
        history.append(objective(w, b, X, y, cfg.l2_lambda)[0])
    return w, b, epochs


def fit_logistic(train, cfg=None):
    cfg = cfg or LrConfig()
    require_both_classes(train.y)
    w, b, epochs = gradient_descent(train.X, train.y, cfg)
    return TrainedModel(
        ModelKind.LR,
        {"weights": w, "bias": b, "epochs": epochs},
        train.fingerprint,
        train.X.shape[1],
    )


def decision_scores(params, X):
    return np.asarray(X @ params["weights"]).ravel() + params["bias"]


def predict_codes(params, X):
    return (sigmoid(decision_scores(params, X)) >= 0.5).astype(np.int8)


def predict_proba(model, x):
    """Probability that ``x`` is a Myth."""
    if model.kind is not ModelKind.LR:
        raise WrongModelKind(f"predict_proba needs an LR model, got {model.kind}")
    model.check_vector(x)
    z = float(decision_scores(model.parameters, vector_as_row(x))[0])
    return float(sigmoid(z))

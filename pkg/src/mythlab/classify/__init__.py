"""The six classifiers behind one fit/predict/persist contract."""
from __future__ import annotations

import json

import numpy as np

from ..dataset import Label
from .base import (
    FORMAT_VERSION,
    ModelKind,
    SingleClassError,
    TrainedModel,
    WrongModelKind,
    csr_from_json,
    csr_to_json,
    vector_as_row,
)
from . import knn, logistic, naive_bayes, svm, tree
from .knn import KnnConfig, fit_knn, knn_predict
from .logistic import LrConfig, fit_logistic, predict_proba
from .naive_bayes import NbConfig, fit_naive_bayes
from .svm import SvmConfig, fit_linear_svm
from .tree import ForestConfig, TreeConfig, fit_decision_tree, fit_random_forest

# Row order of the result tables.
MODEL_ORDER = (ModelKind.LR, ModelKind.RF, ModelKind.SVM, ModelKind.NB, ModelKind.DT, ModelKind.KNN)

_FITTERS = {
    ModelKind.LR: (fit_logistic, LrConfig),
    ModelKind.NB: (fit_naive_bayes, NbConfig),
    ModelKind.SVM: (fit_linear_svm, SvmConfig),
    ModelKind.DT: (fit_decision_tree, TreeConfig),
    ModelKind.RF: (fit_random_forest, ForestConfig),
    ModelKind.KNN: (fit_knn, KnnConfig),
}

_PREDICTORS = {
    ModelKind.LR: logistic.predict_codes,
    ModelKind.NB: naive_bayes.predict_codes,
    ModelKind.SVM: svm.predict_codes,
    ModelKind.DT: tree.predict_codes_tree,
    ModelKind.RF: tree.predict_codes_forest,
    ModelKind.KNN: knn.predict_codes,
}


def default_config(kind):
    return _FITTERS[ModelKind.parse(kind)][1]()


def fit(kind, train, cfg=None):
    fitter, cfg_type = _FITTERS[ModelKind.parse(kind)]
    return fitter(train, cfg if cfg is not None else cfg_type())


def predict_codes(model, X):
    """Batch prediction over a CSR matrix: 1 for Myth, 0 for Fact."""
    return _PREDICTORS[model.kind](model.parameters, X)


def predict_matrix(model, fm):
    model.check_matrix(fm)
    return predict_codes(model, fm.X)


def predict(model, x):
    model.check_vector(x)
    return Label.from_code(predict_codes(model, vector_as_row(x))[0])


# --- persistence -----------------------------------------------------------

def _tree_to_json(t):
    return {k: v.tolist() for k, v in t.items()}


_TREE_DTYPES = {
    "feature": np.int64, "threshold": np.float64, "left": np.int64,
    "right": np.int64, "label": np.int8, "n_samples": np.int64, "impurity": np.float64,
}


def _tree_from_json(d):
    return {k: np.array(d[k], dtype=dt) for k, dt in _TREE_DTYPES.items()}


def _params_to_json(kind, p):
    if kind in (ModelKind.LR, ModelKind.SVM):
        out = {"weights": p["weights"].tolist(), "bias": float(p["bias"])}
        if "epochs" in p:
            out["epochs"] = int(p["epochs"])
        return out
    if kind is ModelKind.NB:
        return {
            "log_prior": p["log_prior"].tolist(),
            "log_likelihood": p["log_likelihood"].tolist(),
        }
    if kind is ModelKind.DT:
        return {"tree": _tree_to_json(p["tree"])}
    if kind is ModelKind.RF:
        return {
            "features_per_split": int(p["features_per_split"]),
            "trees": [_tree_to_json(t) for t in p["trees"]],
        }
    return {"X": csr_to_json(p["X"]), "y": p["y"].tolist(), "k": int(p["k"])}


def _params_from_json(kind, d):
    if kind in (ModelKind.LR, ModelKind.SVM):
        out = {"weights": np.array(d["weights"], dtype=np.float64), "bias": float(d["bias"])}
        if "epochs" in d:
            out["epochs"] = int(d["epochs"])
        return out
    if kind is ModelKind.NB:
        return {
            "log_prior": np.array(d["log_prior"], dtype=np.float64),
            "log_likelihood": np.array(d["log_likelihood"], dtype=np.float64),
        }
    if kind is ModelKind.DT:
        return {"tree": _tree_from_json(d["tree"])}
    if kind is ModelKind.RF:
        return {
            "features_per_split": int(d["features_per_split"]),
            "trees": [_tree_from_json(t) for t in d["trees"]],
        }
    return {"X": csr_from_json(d["X"]), "y": np.array(d["y"], dtype=np.int8), "k": int(d["k"])}


def model_to_dict(model):
    return {
        "format_version": FORMAT_VERSION,
        "kind": model.kind.value,
        "vocabulary_fingerprint": model.vocabulary_fingerprint,
        "dimension": model.dimension,
        "parameters": _params_to_json(model.kind, model.parameters),
    }


def model_from_dict(d):
    if d.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format {d.get('format_version')!r}")
    kind = ModelKind.parse(d["kind"])
    return TrainedModel(
        kind,
        _params_from_json(kind, d["parameters"]),
        d["vocabulary_fingerprint"],
        int(d["dimension"]),
    )


def dumps_model(model):
    return json.dumps(model_to_dict(model))


def loads_model(text):
    return model_from_dict(json.loads(text))


__all__ = [
    "ForestConfig", "KnnConfig", "LrConfig", "MODEL_ORDER", "ModelKind", "NbConfig",
    "SingleClassError", "SvmConfig", "TrainedModel", "TreeConfig", "WrongModelKind",
    "default_config", "dumps_model", "fit", "fit_decision_tree", "fit_knn",
    "fit_linear_svm", "fit_logistic", "fit_naive_bayes", "fit_random_forest",
    "knn_predict", "loads_model", "model_from_dict", "model_to_dict", "predict",
    "predict_codes", "predict_matrix", "predict_proba",
]

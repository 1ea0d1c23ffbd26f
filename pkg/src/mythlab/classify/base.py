"""Shared model container, errors and JSON persistence helpers."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np
import scipy.sparse as sp

from ..vectorize import FeatureVector, FingerprintMismatch

FORMAT_VERSION = 1


class ModelKind(str, enum.Enum):
    LR = "LR"
    RF = "RF"
    SVM = "SVM"
    NB = "NB"
    DT = "DT"
    KNN = "KNN"

    @classmethod
    def parse(cls, value):
        if isinstance(value, ModelKind):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown model kind {value!r}") from None

    def __str__(self):
        return self.value


class SingleClassError(ValueError):
    """Training data contains only one class."""


class WrongModelKind(TypeError):
    pass


def _freeze(value):
    if isinstance(value, np.ndarray):
        value = value.copy()
        value.setflags(write=False)
        return value
    if isinstance(value, dict):
        return MappingProxyType({k: _freeze(v) for k, v in value.items()})
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    if sp.issparse(value):
        value = value.tocsr(copy=True)
        for arr in (value.data, value.indices, value.indptr):
            arr.setflags(write=False)
        return value
    return value


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: ModelKind
    parameters: MappingProxyType
    vocabulary_fingerprint: str
    dimension: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        object.__setattr__(self, "parameters", _freeze(dict(self.parameters)))

    def check_vector(self, x):
        if x.fingerprint != self.vocabulary_fingerprint:
            raise FingerprintMismatch(
                f"vector fingerprint {x.fingerprint} != model {self.vocabulary_fingerprint}"
            )

    def check_matrix(self, fm):
        if fm.fingerprint != self.vocabulary_fingerprint:
            raise FingerprintMismatch(
                f"matrix fingerprint {fm.fingerprint} != model {self.vocabulary_fingerprint}"
            )


def require_both_classes(y):
    if len(np.unique(y)) < 2:
        raise SingleClassError("training data contains a single class")


def vector_as_row(x: FeatureVector):
    return sp.csr_matrix(
        (x.values, x.indices, np.array([0, len(x.indices)])), shape=(1, x.dimension)
    )


def csr_to_json(X):
    X = sp.csr_matrix(X)
    return {
        "shape": list(X.shape),
        "indptr": X.indptr.tolist(),
        "indices": X.indices.tolist(),
        "data": X.data.tolist(),
    }


def csr_from_json(d):
    return sp.csr_matrix(
        (
            np.array(d["data"], dtype=np.float64),
            np.array(d["indices"], dtype=np.int32),
            np.array(d["indptr"], dtype=np.int32),
        ),
        shape=tuple(d["shape"]),
    )

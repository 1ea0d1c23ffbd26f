"""Bag-of-words and TF-IDF features over a vocabulary fitted on training docs."""
from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dataset import Label

FORMAT_VERSION = 1


class FeatureKind(str, enum.Enum):
    BOW = "BoW"
    TFIDF = "TF-IDF"

    @classmethod
    def parse(cls, value):
        if isinstance(value, FeatureKind):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for kind in cls:
            if kind.value.replace("-", "").lower() == key:
                return kind
        raise ValueError(f"unknown feature kind {value!r}")

    def __str__(self):
        return self.value


class FingerprintMismatch(ValueError):
    """Features were built with a different vocabulary than the model."""


@dataclass(frozen=True, eq=False)
class Vocabulary:
    tokens: tuple

    def __post_init__(self):
        tokens = tuple(self.tokens)
        if list(tokens) != sorted(set(tokens)):
            raise ValueError("vocabulary tokens must be unique and sorted")
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "index_of", {t: i for i, t in enumerate(tokens)})
        digest = hashlib.sha256("\n".join(tokens).encode("utf-8")).hexdigest()
        object.__setattr__(self, "fingerprint", digest[:16])

    def __len__(self):
        return len(self.tokens)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.tokens == other.tokens

    def __hash__(self):
        return hash(self.fingerprint)


def build_vocabulary(docs):
    tokens = set()
    for doc in docs:
        tokens.update(doc)
    if not tokens:
        raise ValueError("cannot build a vocabulary: all documents are empty")
    return Vocabulary(tuple(sorted(tokens)))


@dataclass(frozen=True)
class FeatureVector:
    indices: np.ndarray
    values: np.ndarray
    dimension: int
    fingerprint: str

    def as_dict(self):
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}

    def to_dense(self):
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def norm(self):
        return float(np.sqrt(np.sum(self.values**2)))


@dataclass(frozen=True, eq=False)
class IdfModel:
    n_docs: int
    doc_freq: np.ndarray
    idf: np.ndarray


def _counts(doc, vocab):
    cols = {}
    index_of = vocab.index_of
    for tok in doc:
        j = index_of.get(tok)
        if j is not None:
            cols[j] = cols.get(j, 0) + 1
    idx = np.array(sorted(cols), dtype=np.int64)
    vals = np.array([cols[j] for j in idx], dtype=np.float64)
    return idx, vals


def bow_transform(doc, vocab):
    idx, vals = _counts(doc, vocab)
    return FeatureVector(idx, vals, len(vocab), vocab.fingerprint)


def tfidf_fit(docs, vocab):
    docs = list(docs)
    if not docs:
        raise ValueError("tfidf_fit needs at least one document")
    df = np.zeros(len(vocab), dtype=np.int64)
    for doc in docs:
        for tok in set(doc):
            j = vocab.index_of.get(tok)
            if j is not None:
                df[j] += 1
    n = len(docs)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return IdfModel(n, df, idf)


def tfidf_transform(doc, vocab, idf):
    idx, vals = _counts(doc, vocab)
    vals = vals * idf.idf[idx]
    norm = math.sqrt(float(np.dot(vals, vals)))
    if norm > 0:
        vals = vals / norm
    return FeatureVector(idx, vals, len(vocab), vocab.fingerprint)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Rows of sparse features with aligned labels (Myth = 1)."""

    X: sp.csr_matrix
    y: np.ndarray
    vocabulary: Vocabulary
    kind: FeatureKind = FeatureKind.BOW

    def __post_init__(self):
        if self.X.shape[1] != len(self.vocabulary):
            raise ValueError("matrix width does not match vocabulary size")
        if self.X.shape[0] != len(self.y):
            raise ValueError("labels length does not match row count")

    @property
    def fingerprint(self):
        return self.vocabulary.fingerprint

    @property
    def labels(self):
        return [Label.from_code(c) for c in self.y]

    @property
    def n_rows(self):
        return self.X.shape[0]

    def row(self, i):
        start, stop = self.X.indptr[i], self.X.indptr[i + 1]
        return FeatureVector(
            self.X.indices[start:stop].copy(),
            self.X.data[start:stop].copy(),
            self.X.shape[1],
            self.fingerprint,
        )

    def rows(self):
        return [self.row(i) for i in range(self.n_rows)]

    def take(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return FeatureMatrix(self.X[indices], self.y[indices], self.vocabulary, self.kind)


def stack(vectors, labels, vocab, kind=FeatureKind.BOW):
    """Assemble feature vectors into a CSR matrix."""
    indptr = [0]
    indices, data = [], []
    for v in vectors:
        if v.fingerprint != vocab.fingerprint:
            raise FingerprintMismatch("vector built with a different vocabulary")
        indices.append(v.indices)
        data.append(v.values)
        indptr.append(indptr[-1] + len(v.indices))
    X = sp.csr_matrix(
        (
            np.concatenate(data) if data else np.zeros(0),
            np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64),
            np.array(indptr),
        ),
        shape=(len(indptr) - 1, len(vocab)),
    )
    y = np.array([Label.parse(l).code for l in labels], dtype=np.int8)
    return FeatureMatrix(X, y, vocab, FeatureKind.parse(kind))


@dataclass(frozen=True, eq=False)
class Vectorizer:
    """A fitted feature extractor: vocabulary plus idf weights for TF-IDF."""

    kind: FeatureKind
    vocabulary: Vocabulary
    idf: IdfModel | None = None

    @classmethod
    def fit(cls, docs, kind):
        kind = FeatureKind.parse(kind)
        docs = list(docs)
        vocab = build_vocabulary(docs)
        idf = tfidf_fit(docs, vocab) if kind is FeatureKind.TFIDF else None
        return cls(kind, vocab, idf)

    def transform_one(self, doc):
        if self.kind is FeatureKind.TFIDF:
            return tfidf_transform(doc, self.vocabulary, self.idf)
        return bow_transform(doc, self.vocabulary)

    def transform(self, docs, labels=None):
        docs = list(docs)
        if labels is None:
            labels = [Label.FACT] * len(docs)
        return stack([self.transform_one(d) for d in docs], labels, self.vocabulary, self.kind)

    def to_dict(self):
        out = {
            "format_version": FORMAT_VERSION,
            "kind": self.kind.value,
            "tokens": list(self.vocabulary.tokens),
            "fingerprint": self.vocabulary.fingerprint,
        }
        if self.idf is not None:
            out["n_docs"] = self.idf.n_docs
            out["doc_freq"] = self.idf.doc_freq.tolist()
            out["idf"] = self.idf.idf.tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported vectorizer format {data.get('format_version')!r}")
        vocab = Vocabulary(tuple(data["tokens"]))
        if vocab.fingerprint != data["fingerprint"]:
            raise FingerprintMismatch("stored fingerprint does not match tokens")
        idf = None
        if "idf" in data:
            idf = IdfModel(
                int(data["n_docs"]),
                np.array(data["doc_freq"], dtype=np.int64),
                np.array(data["idf"], dtype=np.float64),
            )
        return cls(FeatureKind.parse(data["kind"]), vocab, idf)

    def dumps(self):
        return json.dumps(self.to_dict())

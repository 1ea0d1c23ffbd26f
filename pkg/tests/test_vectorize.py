import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mythlab.dataset import Label
from mythlab.textprep import TokenizedDoc
from mythlab.vectorize import (
    FeatureKind,
    FingerprintMismatch,
    Vectorizer,
    Vocabulary,
    bow_transform,
    build_vocabulary,
    stack,
    tfidf_fit,
    tfidf_transform,
)


def docs(*lists):
    return [TokenizedDoc(l) for l in lists]


def test_vocabulary_is_sorted_set():
    v = build_vocabulary(docs(["play", "brain"], ["play"]))
    assert v.tokens == ("brain", "play")
    assert v.index_of == {"brain": 0, "play": 1}
    assert build_vocabulary(docs(["a", "a", "a"])).tokens == ("a",)


def test_vocabulary_rejects_unsorted_and_empty():
    with pytest.raises(ValueError):
        Vocabulary(("b", "a"))
    with pytest.raises(ValueError):
        build_vocabulary(docs([], []))


_words = st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=3).map("".join)
_docs = st.lists(st.lists(_words, max_size=8), min_size=1, max_size=100).filter(
    lambda ds: any(ds)
)


@settings(max_examples=80, deadline=None)
@given(_docs, st.randoms())
def test_vocabulary_order_independent(lists, rnd):
    shuffled = list(lists)
    rnd.shuffle(shuffled)
    a = build_vocabulary(docs(*lists))
    b = build_vocabulary(docs(*shuffled))
    assert a == b and a.fingerprint == b.fingerprint


def test_bow_examples():
    v = build_vocabulary(docs(["brain", "play"]))
    assert bow_transform(TokenizedDoc(["play", "play", "brain"]), v).as_dict() == {0: 1.0, 1: 2.0}
    assert bow_transform(TokenizedDoc([]), v).as_dict() == {}
    assert bow_transform(TokenizedDoc(["zebra", "yak"]), v).as_dict() == {}


@settings(max_examples=100, deadline=None)
@given(st.lists(_words, max_size=10), st.lists(_words, max_size=10))
def test_bow_is_additive(a, b):
    v = build_vocabulary(docs(a + b + ["x"]))
    lhs = bow_transform(TokenizedDoc(a + b), v).to_dense()
    rhs = bow_transform(TokenizedDoc(a), v).to_dense() + bow_transform(TokenizedDoc(b), v).to_dense()
    assert np.array_equal(lhs, rhs)


def test_idf_values():
    ds = docs(["play", "brain"], ["play"])
    v = build_vocabulary(ds)
    idf = tfidf_fit(ds, v)
    assert idf.idf[v.index_of["play"]] == 1.0
    assert idf.idf[v.index_of["brain"]] == pytest.approx(math.log(1.5) + 1, abs=1e-12)
    assert round(idf.idf[v.index_of["brain"]], 6) == 1.405465


def test_tfidf_examples():
    ds = docs(["play", "brain"], ["play"])
    v = build_vocabulary(ds)
    idf = tfidf_fit(ds, v)
    single = tfidf_transform(TokenizedDoc(["play"]), v, idf)
    assert single.as_dict() == {1: 1.0}
    w = tfidf_transform(TokenizedDoc(["play", "play", "brain"]), v, idf).as_dict()
    assert w[1] == pytest.approx(0.81818, abs=1e-5)
    assert w[0] == pytest.approx(0.57496, abs=1e-5)
    empty = tfidf_transform(TokenizedDoc([]), v, idf)
    assert empty.norm() == 0.0


@settings(max_examples=80, deadline=None)
@given(_docs)
def test_tfidf_properties(lists):
    ds = docs(*lists)
    v = build_vocabulary(ds)
    idf = tfidf_fit(ds, v)
    assert np.all(idf.idf > 0)
    # strictly decreasing in document frequency
    order = np.argsort(idf.doc_freq, kind="stable")
    df, w = idf.doc_freq[order], idf.idf[order]
    for i in range(len(df) - 1):
        if df[i] < df[i + 1]:
            assert w[i] > w[i + 1]
        elif df[i] == df[i + 1]:
            assert w[i] == w[i + 1]
    if (idf.doc_freq == len(ds)).any():
        assert idf.idf[idf.doc_freq == len(ds)][0] == idf.idf.min()
    for d in ds:
        vec = tfidf_transform(d, v, idf)
        if len(vec.values):
            assert abs(vec.norm() - 1) < 1e-9


def test_vectorizer_ignores_test_tokens():
    train = docs(["play", "brain"], ["play"])
    vec = Vectorizer.fit(train, FeatureKind.TFIDF)
    fm = vec.transform(docs(["play", "unseen", "words"]), [Label.MYTH])
    assert fm.X.shape == (1, 2)
    assert fm.labels == [Label.MYTH]


def test_vectorizer_round_trip():
    vec = Vectorizer.fit(docs(["a", "b"], ["b", "c"]), "TF-IDF")
    again = Vectorizer.from_dict(vec.to_dict())
    d = TokenizedDoc(["b", "c", "c"])
    assert np.array_equal(again.transform_one(d).to_dense(), vec.transform_one(d).to_dense())
    bad = vec.to_dict()
    bad["fingerprint"] = "0" * 16
    with pytest.raises(FingerprintMismatch):
        Vectorizer.from_dict(bad)


def test_stack_checks_fingerprint():
    v1 = build_vocabulary(docs(["a"]))
    v2 = build_vocabulary(docs(["b"]))
    with pytest.raises(FingerprintMismatch):
        stack([bow_transform(TokenizedDoc(["a"]), v1)], [Label.FACT], v2)


def test_feature_kind_parse():
    assert FeatureKind.parse("tfidf") is FeatureKind.TFIDF
    assert FeatureKind.parse("bow") is FeatureKind.BOW
    with pytest.raises(ValueError):
        FeatureKind.parse("word2vec")

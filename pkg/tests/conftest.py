import os
from importlib import resources
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp

from mythlab.dataset import Label
from mythlab.vectorize import FeatureKind, FeatureMatrix, Vocabulary

DATA_DIR = Path(__file__).parent / "data"

TABLE1_CSV = """label,statement
Fact,Play is like children's work.
Fact,Children communicate to express their needs.
Fact,Young babies need consistent responsive care.
Myth,Lifting weights stunts growth.
Myth,It's too late for my kid.
Myth,"Little Brain, Little Activity."
"""


def synthetic_corpus_path():
    return str(resources.files("mythlab.data") / "synthetic_corpus.csv")


def real_dataset_path():
    """Path of the published dataset if the caller pointed us at it."""
    path = os.environ.get("MYTHLAB_DATASET")
    return path if path and os.path.exists(path) else None


def vocab_of(n_features):
    return Vocabulary(tuple(f"t{i:04d}" for i in range(n_features)))


def matrix(rows, labels, kind=FeatureKind.BOW):
    """FeatureMatrix from a dense array and Label/str/int labels."""
    X = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    codes = [l if isinstance(l, (int, np.integer)) else Label.parse(l).code for l in labels]
    return FeatureMatrix(sp.csr_matrix(X), np.array(codes, dtype=np.int8), vocab_of(X.shape[1]), kind)


@pytest.fixture
def table1_path(tmp_path):
    p = tmp_path / "table1.csv"
    p.write_text(TABLE1_CSV, encoding="utf-8")
    return str(p)


@pytest.fixture(scope="session")
def synthetic_path():
    return synthetic_corpus_path()

"""Text -> features -> classifier, fitted as one unit."""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field, is_dataclass

from . import classify
from .classify import ModelKind
from .dataset import Label
from .textprep import PrepConfig, preprocess
from .vectorize import FeatureKind, Vectorizer

MODEL_FORMAT = 1


def _config_dict(cfg):
    if cfg is None:
        return None
    return json.loads(json.dumps(asdict(cfg) if is_dataclass(cfg) else cfg, default=str))


@dataclass(frozen=True)
class Pipeline:
    """An experiment recipe: preprocessing, feature kind, classifier and its config."""

    feature: FeatureKind
    model: ModelKind
    model_config: object = None
    prep: PrepConfig = field(default_factory=PrepConfig)

    def __post_init__(self):
        object.__setattr__(self, "feature", FeatureKind.parse(self.feature))
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        if self.model_config is None:
            object.__setattr__(self, "model_config", classify.default_config(self.model))

    def describe(self):
        return {
            "feature": self.feature.value,
            "model": self.model.value,
            "model_config": _config_dict(self.model_config),
            "prep": self.prep.describe(),
        }

    def preprocess(self, texts):
        return [preprocess(t, self.prep) for t in texts]

    def fit(self, docs, labels):
        vectorizer = Vectorizer.fit(docs, self.feature)
        train = vectorizer.transform(docs, labels)
        with warnings.catch_warnings():
            # NB on TF-IDF weights is a deliberate grid cell
            warnings.simplefilter("ignore", UserWarning)
            model = classify.fit(self.model, train, self.model_config)
        return FittedPipeline(self, vectorizer, model)

    def fit_predict(self, train_docs, train_labels, test_docs):
        return self.fit(train_docs, train_labels).predict_docs(test_docs)


@dataclass(frozen=True, eq=False)
class FittedPipeline:
    pipeline: Pipeline
    vectorizer: Vectorizer
    model: classify.TrainedModel

    def features(self, docs, labels=None):
        return self.vectorizer.transform(docs, labels)

    def predict_docs(self, docs):
        fm = self.features(docs)
        return [Label.from_code(c) for c in classify.predict_matrix(self.model, fm)]

    def predict_texts(self, texts):
        """Labels and, for LR, P(predicted label) for raw statements."""
        docs = self.pipeline.preprocess(texts)
        fm = self.features(docs)
        codes = classify.predict_matrix(self.model, fm)
        probs = [None] * len(codes)
        if self.model.kind is ModelKind.LR:
            p_myth = classify.logistic.sigmoid(
                classify.logistic.decision_scores(self.model.parameters, fm.X)
            )
            probs = [float(p if c == 1 else 1.0 - p) for p, c in zip(p_myth, codes)]
        return [(Label.from_code(c), p) for c, p in zip(codes, probs)]

    def to_dict(self):
        prep = self.pipeline.prep
        return {
            "format_version": MODEL_FORMAT,
            "pipeline": self.pipeline.describe(),
            "prep": {
                "stopwords": sorted(prep.stopwords),
                "contractions": [list(p) for p in prep.contractions],
                "do_lemmatize": prep.do_lemmatize,
                "do_stem": prep.do_stem,
                "min_token_len": prep.min_token_len,
            },
            "vectorizer": self.vectorizer.to_dict(),
            "model": classify.model_to_dict(self.model),
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != MODEL_FORMAT:
            raise ValueError(f"unsupported model file format {d.get('format_version')!r}")
        p = d["prep"]
        prep = PrepConfig(
            stopwords=frozenset(p["stopwords"]),
            contractions=tuple(tuple(x) for x in p["contractions"]),
            do_lemmatize=p["do_lemmatize"],
            do_stem=p["do_stem"],
            min_token_len=p["min_token_len"],
        )
        vectorizer = Vectorizer.from_dict(d["vectorizer"])
        model = classify.model_from_dict(d["model"])
        if model.vocabulary_fingerprint != vectorizer.vocabulary.fingerprint:
            raise ValueError("model and vectorizer fingerprints disagree")
        pipeline = Pipeline(vectorizer.kind, model.kind, None, prep)
        return cls(pipeline, vectorizer, model)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


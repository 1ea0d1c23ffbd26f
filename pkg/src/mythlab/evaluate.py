"""Confusion matrix and classification-report metrics."""
from __future__ import annotations

import io
from dataclasses import dataclass

from .dataset import LABELS, Label


@dataclass(frozen=True)
class ClassView:
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed ``[actual][predicted]`` in label order (Fact, Myth)."""

    counts: tuple

    @property
    def total(self):
        return sum(sum(row) for row in self.counts)

    def view(self, cls):
        """tp/fp/fn/tn with ``cls`` treated as the positive class."""
        p = LABELS.index(Label.parse(cls))
        q = 1 - p
        c = self.counts
        return ClassView(tp=c[p][p], fp=c[q][p], fn=c[p][q], tn=c[q][q])

    def to_csv(self):
        lines = ["actual\\predicted," + ",".join(l.value for l in LABELS)]
        for label, row in zip(LABELS, self.counts):
            lines.append(label.value + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_dict(self):
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass(frozen=True)
class EvaluationReport:
    per_class: dict
    accuracy: float
    macro_avg: ClassMetrics
    weighted_avg: ClassMetrics
    confusion: ConfusionMatrix
    zero_division: bool = False

    def to_dict(self):
        return {
            "per_class": {l.value: self.per_class[l].to_dict() for l in LABELS},
            "accuracy": self.accuracy,
            "macro_avg": self.macro_avg.to_dict(),
            "weighted_avg": self.weighted_avg.to_dict(),
            "confusion": {
                "labels": [l.value for l in LABELS],
                "counts": [list(r) for r in self.confusion.counts],
            },
            "zero_division": self.zero_division,
        }

    def to_text(self, digits=2):
        """Plain-text table in the usual classification-report layout."""
        rows = [(l.value, self.per_class[l]) for l in LABELS]
        width = max(len("weighted avg"), *(len(name) for name, _ in rows))
        head = f"{'':>{width}} {'precision':>9} {'recall':>9} {'f1-score':>9} {'support':>9}"
        out = io.StringIO()
        out.write(head + "\n\n")

        def line(name, m):
            return (
                f"{name:>{width}} {m.precision:>9.{digits}f} {m.recall:>9.{digits}f}"
                f" {m.f1:>9.{digits}f} {m.support:>9}\n"
            )

        for name, m in rows:
            out.write(line(name, m))
        out.write("\n")
        total = self.confusion.total
        out.write(f"{'accuracy':>{width}} {'':>9} {'':>9} {self.accuracy:>9.{digits}f} {total:>9}\n")
        out.write(line("macro avg", self.macro_avg))
        out.write(line("weighted avg", self.weighted_avg))
        return out.getvalue()


def confusion(y_true, y_pred):
    y_true = [Label.parse(v) for v in y_true]
    y_pred = [Label.parse(v) for v in y_pred]
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise ValueError("cannot evaluate an empty prediction list")
    counts = [[0, 0], [0, 0]]
    for a, p in zip(y_true, y_pred):
        counts[LABELS.index(a)][LABELS.index(p)] += 1
    return ConfusionMatrix(tuple(tuple(r) for r in counts))


def _ratio(num, den):
    return num / den if den else 0.0


def harmonic_f1(precision, recall):
    s = precision + recall
    return 2.0 * precision * recall / s if s else 0.0


def class_metrics(cm, cls):
    v = cm.view(cls)
    precision = _ratio(v.tp, v.tp + v.fp)
    recall = _ratio(v.tp, v.tp + v.fn)
    return ClassMetrics(precision, recall, harmonic_f1(precision, recall), v.tp + v.fn)


def _has_zero_division(cm):
    for cls in LABELS:
        v = cm.view(cls)
        if v.tp + v.fp == 0 or v.tp + v.fn == 0:
            return True
        p, r = _ratio(v.tp, v.tp + v.fp), _ratio(v.tp, v.tp + v.fn)
        if p + r == 0:
            return True
    return False


def full_report(y_true, y_pred):
    cm = confusion(y_true, y_pred)
    per_class = {cls: class_metrics(cm, cls) for cls in LABELS}
    total = cm.total
    fact, myth = per_class[Label.FACT], per_class[Label.MYTH]
    macro = ClassMetrics(
        (fact.precision + myth.precision) / 2,
        (fact.recall + myth.recall) / 2,
        (fact.f1 + myth.f1) / 2,
        total,
    )
    # support shares; equal supports give exactly 0.5 each, so weighted == macro
    wf, wm = fact.support / total, myth.support / total
    weighted = ClassMetrics(
        fact.precision * wf + myth.precision * wm,
        fact.recall * wf + myth.recall * wm,
        fact.f1 * wf + myth.f1 * wm,
        total,
    )
    accuracy = (cm.counts[0][0] + cm.counts[1][1]) / total
    return EvaluationReport(per_class, accuracy, macro, weighted, cm, _has_zero_division(cm))

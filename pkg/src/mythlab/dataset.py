"""Loading, saving and splitting the labelled fact/myth corpus."""
from __future__ import annotations

import csv
import enum
import io
import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class CorpusError(ValueError):
    """Malformed or unusable corpus input."""


class Label(str, enum.Enum):
    FACT = "Fact"
    MYTH = "Myth"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Label):
            return value
        key = str(value).strip().lower()
        for label in cls:
            if label.value.lower() == key:
                return label
        raise ValueError(f"unrecognized label {value!r}")

    @property
    def code(self):
        """Binary encoding with Myth as the positive class."""
        return 1 if self is Label.MYTH else 0

    @classmethod
    def from_code(cls, code):
        return cls.MYTH if int(code) == 1 else cls.FACT

    def __str__(self):
        return self.value


# Report and tie-break order: lexicographic by canonical name.
LABELS = (Label.FACT, Label.MYTH)


@dataclass(frozen=True)
class LabeledStatement:
    label: Label
    text: str

    def __post_init__(self):
        if not any(ch.isalpha() for ch in self.text):
            raise CorpusError(f"statement has no alphabetic character: {self.text!r}")


@dataclass(frozen=True)
class Corpus:
    statements: tuple
    source_path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))
        if not self.statements:
            raise CorpusError("empty corpus")

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)

    def __getitem__(self, i):
        return self.statements[i]

    @property
    def labels(self):
        return [s.label for s in self.statements]

    @property
    def texts(self):
        return [s.text for s in self.statements]

    def subset(self, indices):
        return Corpus(tuple(self.statements[i] for i in indices), self.source_path)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


_LABEL_COLUMNS = ("label",)
_TEXT_COLUMNS = ("statement", "statements")


def _locate_columns(header, path):
    names = [h.strip().lower() for h in header]
    try:
        label_col = next(i for i, h in enumerate(names) if h in _LABEL_COLUMNS)
        text_col = next(i for i, h in enumerate(names) if h in _TEXT_COLUMNS)
    except StopIteration:
        raise CorpusError(
            f"{path}:1: header must name a 'label' and a 'statement' column, got {header}"
        ) from None
    return label_col, text_col


def parse_corpus(stream, source_path="<stream>"):
    """Parse CSV text from an open text stream into a :class:`Corpus`."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusError(f"{source_path}: empty corpus") from None
    label_col, text_col = _locate_columns(header, source_path)
    width = len(header)
    statements = []
    line = reader.line_num
    for row in reader:
        start, line = line + 1, reader.line_num
        if not row:
            continue
        if len(row) != width:
            raise CorpusError(
                f"{source_path}:{start}: expected {width} columns, found {len(row)}"
            )
        text = row[text_col].strip()
        if not text:
            raise CorpusError(f"{source_path}:{start}: empty statement")
        try:
            label = Label.parse(row[label_col])
        except ValueError:
            raise CorpusError(
                f"{source_path}:{start}: unrecognized label {row[label_col]!r}"
            ) from None
        try:
            statements.append(LabeledStatement(label, text))
        except CorpusError as exc:
            raise CorpusError(f"{source_path}:{start}: {exc}") from None
    if not statements:
        raise CorpusError(f"{source_path}: empty corpus")
    return Corpus(tuple(statements), source_path)


def load_corpus(path):
    """Read a ``label,statement`` CSV file (UTF-8, header required)."""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise CorpusError(f"{path}: no such file")
    with open(path, encoding="utf-8-sig", newline="") as fh:
        return parse_corpus(fh, path)


def dumps_corpus(corpus):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "statement"])
    for s in corpus:
        writer.writerow([s.label.value, s.text])
    return buf.getvalue()


def save_corpus(corpus, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_corpus(corpus))


def corpus_stats(corpus):
    """Class counts in canonical label order."""
    counts = Counter(s.label for s in corpus)
    return {label: counts.get(label, 0) for label in LABELS}


def stats_json(stats):
    return {label.value: n for label, n in stats.items()}


def duplicate_count(corpus):
    """Number of statements whose text already occurred earlier in the corpus."""
    counts = Counter(s.text for s in corpus)
    return sum(c - 1 for c in counts.values())


def _round_half_up(x):
    return int(math.floor(x + Fraction(1, 2)))


def apportion(class_sizes, fraction):
    """Largest-remainder apportionment of ``round(fraction * n)`` train slots.

    ``class_sizes`` maps label to class size. Remainder ties go to the
    lexicographically smaller label.
    """
    frac = Fraction(str(fraction))
    n = sum(class_sizes.values())
    total = _round_half_up(frac * n)
    quotas = {c: frac * size for c, size in class_sizes.items()}
    counts = {c: math.floor(q) for c, q in quotas.items()}
    left = total - sum(counts.values())
    order = sorted(quotas, key=lambda c: (-(quotas[c] - counts[c]), c.value))
    for c in order[:left]:
        counts[c] += 1
    return counts


def split_indices(labels, spec):
    """Return ``(train_idx, test_idx)`` as sorted integer arrays."""
    labels = [Label.parse(l) for l in labels]
    n = len(labels)
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        by_class = {c: [i for i, l in enumerate(labels) if l is c] for c in LABELS}
        empty = [c.value for c, idx in by_class.items() if not idx]
        if empty:
            raise CorpusError(f"stratified split needs every class; missing {empty}")
        counts = apportion({c: len(idx) for c, idx in by_class.items()}, spec.train_fraction)
        train = []
        for c in LABELS:
            idx = np.array(by_class[c])
            rng.shuffle(idx)
            train.extend(idx[: counts[c]].tolist())
    else:
        total = _round_half_up(Fraction(str(spec.train_fraction)) * n)
        perm = rng.permutation(n)
        train = perm[:total].tolist()
    train = np.array(sorted(train), dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[train] = False
    return train, np.flatnonzero(mask)


def stratified_split(corpus, spec):
    """Split a corpus into train/test sub-corpora preserving file order."""
    train, test = split_indices(corpus.labels, spec)
    return corpus.subset(train), corpus.subset(test)

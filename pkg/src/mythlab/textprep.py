"""Statement normalization, tokenization, stopword removal, lemmatization
and stemming, plus corpus word frequencies."""
from __future__ import annotations

import hashlib
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import porter

_DATA = "mythlab.data"


def _read_lines(text):
    for line in text.splitlines():
        line = line.strip("\n\r")
        if line and not line.startswith("#"):
            yield line


def read_stopwords(path=None):
    if path is None:
        text = resources.files(_DATA).joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(w.strip().lower() for w in _read_lines(text) if w.strip())


def read_contractions(path=None):
    if path is None:
        text = resources.files(_DATA).joinpath("contractions_en.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    table = {}
    for line in _read_lines(text):
        src, dst = line.split("\t")
        table[src.strip().lower()] = dst.strip().lower()
    return table


@lru_cache(maxsize=None)
def default_stopwords():
    return read_stopwords()


@lru_cache(maxsize=None)
def default_contractions():
    return read_contractions()


@dataclass(frozen=True)
class PrepConfig:
    stopwords: frozenset = field(default_factory=default_stopwords)
    contractions: tuple = field(default_factory=lambda: tuple(sorted(default_contractions().items())))
    do_lemmatize: bool = True
    do_stem: bool = True
    min_token_len: int = 2

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        contractions = self.contractions
        if isinstance(contractions, dict):
            contractions = contractions.items()
        object.__setattr__(self, "contractions", tuple(sorted(contractions)))
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be positive")

    def describe(self):
        """JSON-friendly summary (tables are fingerprinted, not listed)."""
        return {
            "do_lemmatize": self.do_lemmatize,
            "do_stem": self.do_stem,
            "min_token_len": self.min_token_len,
            "n_stopwords": len(self.stopwords),
            "n_contractions": len(self.contractions),
            "tables_sha1": _tables_digest(self.stopwords, self.contractions),
        }


def _tables_digest(stopwords, contractions):
    h = hashlib.sha1()
    for w in sorted(stopwords):
        h.update(w.encode() + b"\n")
    h.update(b"--\n")
    for src, dst in contractions:
        h.update(f"{src}\t{dst}\n".encode())
    return h.hexdigest()


@lru_cache(maxsize=32)
def _contraction_pattern(contractions):
    if not contractions:
        return None
    keys = sorted((k for k, _ in contractions), key=len, reverse=True)
    alternation = "|".join(re.escape(k) for k in keys)
    return re.compile(rf"(?<![a-z'])(?:{alternation})(?![a-z'])")


_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'"})
_NON_LETTER = re.compile(r"[^a-z]+")


def _to_ascii(text):
    out = []
    for ch in unicodedata.normalize("NFKD", text):
        if ch.isascii():
            out.append(ch)
        elif unicodedata.category(ch) == "Mn":
            continue
        elif ch.isalpha():
            # letter without a single-character ASCII mapping
            continue
        else:
            out.append(" ")
    return "".join(out)


def normalize(text, cfg=None):
    cfg = cfg or PrepConfig()
    text = text.translate(_APOSTROPHES).lower()
    text = _to_ascii(text)
    pattern = _contraction_pattern(cfg.contractions)
    if pattern is not None:
        table = dict(cfg.contractions)
        text = pattern.sub(lambda m: table[m.group(0)], text)
    return _NON_LETTER.sub(" ", text).strip()


def tokenize(normalized, cfg=None):
    min_len = (cfg or PrepConfig()).min_token_len
    return [t for t in normalized.split(" ") if len(t) >= min_len]


def remove_stopwords(tokens, cfg=None):
    stop = (cfg or PrepConfig()).stopwords
    return [t for t in tokens if t not in stop]


IRREGULAR_LEMMAS = {
    "children": "child",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "people": "person",
    "lives": "life",
    "wives": "wife",
    "knives": "knife",
    "taught": "teach",
    "thought": "think",
    "brought": "bring",
    "bought": "buy",
    "grew": "grow",
    "grown": "grow",
    "went": "go",
    "gone": "go",
    "ran": "run",
    "ate": "eat",
    "eaten": "eat",
    "spoke": "speak",
    "spoken": "speak",
    "knew": "know",
    "known": "know",
    "made": "make",
    "said": "say",
    "told": "tell",
    "felt": "feel",
    "kept": "keep",
    "slept": "sleep",
    "built": "build",
    "learnt": "learn",
    "began": "begin",
    "begun": "begin",
}

_VOWEL = re.compile(r"[aeiouy]")


def _is_cvc(stem):
    return (
        len(stem) == 3
        and stem[0] not in "aeiou"
        and stem[1] in "aeiou"
        and stem[2] not in "aeiouwxy"
    )


def _undo_inflection(stem):
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "aeioulsz":
        return stem[:-1]
    if _is_cvc(stem):
        return stem + "e"
    return stem


def lemmatize(token):
    """Rule-based, POS-free lemmatizer for nouns and regular verb forms."""
    if token in IRREGULAR_LEMMAS:
        return IRREGULAR_LEMMAS[token]
    if len(token) > 4 and token.endswith("ies"):
        return token[:-3] + "y"
    if len(token) > 4 and token.endswith("ses"):
        return token[:-2]
    if token.endswith("ing"):
        stem = token[:-3]
        if len(stem) >= 3 and _VOWEL.search(stem):
            return _undo_inflection(stem)
        return token
    if token.endswith("ed") and not token.endswith("eed"):
        stem = token[:-2]
        if len(stem) >= 3 and _VOWEL.search(stem):
            return _undo_inflection(stem)
        return token
    if len(token) > 3 and token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def stem(token):
    return porter.stem(token)


@dataclass(frozen=True)
class TokenizedDoc:
    tokens: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def joined(self):
        return " ".join(self.tokens)


def preprocess(text, cfg=None):
    cfg = cfg or PrepConfig()
    tokens = remove_stopwords(tokenize(normalize(text, cfg), cfg), cfg)
    if cfg.do_lemmatize:
        tokens = [lemmatize(t) for t in tokens]
    if cfg.do_stem:
        tokens = [stem(t) for t in tokens]
    if cfg.do_lemmatize or cfg.do_stem:
        # a lemma or stem can itself be a stopword or too short ("others" -> "other")
        tokens = [t for t in remove_stopwords(tokens, cfg) if len(t) >= cfg.min_token_len]
    return TokenizedDoc(tokens)


def preprocess_corpus(corpus, cfg=None):
    cfg = cfg or PrepConfig()
    return [preprocess(s.text, cfg) for s in corpus]


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple

    @classmethod
    def from_counts(cls, counts):
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls(tuple((tok, n) for tok, n in ordered if n > 0))

    @property
    def total(self):
        return sum(n for _, n in self.entries)

    def top(self, n):
        return self.entries[:n]

    def to_csv(self):
        lines = ["token,count"]
        lines += [f"{tok},{n}" for tok, n in self.entries]
        return "\n".join(lines) + "\n"


def word_frequencies(corpus, cfg=None, docs=None):
    """Token counts over the preprocessed corpus, most frequent first."""
    if docs is None:
        docs = preprocess_corpus(corpus, cfg)
    counts = Counter()
    for doc in docs:
        counts.update(doc.tokens)
    return FrequencyTable.from_counts(counts)

"""Testing time per statement: median of timed prediction passes."""
from __future__ import annotations

import csv
import os
import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import classify

CSV_HEADER = ["model", "feature", "n", "per_statement_us", "total_us", "repeats"]


@dataclass(frozen=True)
class BenchResult:
    model_kind: str
    feature_kind: str
    n_statements: int
    total_testing_time: float  # microseconds
    per_statement: float  # microseconds
    repeats: int
    aggregation: str = "median"
    checksum: int = 0

    def to_dict(self):
        return {
            "model": self.model_kind,
            "feature": self.feature_kind,
            "n_statements": self.n_statements,
            "total_testing_time_us": self.total_testing_time,
            "per_statement_us": self.per_statement,
            "repeats": self.repeats,
            "aggregation": self.aggregation,
            "checksum": self.checksum,
        }

    def csv_row(self):
        return [
            self.model_kind,
            self.feature_kind,
            self.n_statements,
            f"{self.per_statement:.4f}",
            f"{self.total_testing_time:.4f}",
            self.repeats,
        ]


def measure_testing_time(model, test, repeats=5, clock=time.perf_counter):
    """Time full prediction passes over ``test`` (a FeatureMatrix).

    One untimed warm-up pass, then ``repeats`` timed passes; the median
    pass duration is the testing time. ``clock`` returns seconds.
    Vectorization is outside the timed region.
    """
    n = test.n_rows
    if n == 0:
        raise ValueError("cannot benchmark on an empty test set")
    if repeats < 3:
        raise ValueError("repeats must be at least 3")
    model.check_matrix(test)
    X = test.X
    checksum = int(np.sum(classify.predict_codes(model, X)))
    durations = []
    for _ in range(repeats):
        start = clock()
        codes = classify.predict_codes(model, X)
        stop = clock()
        durations.append((stop - start) * 1e6)
        # consume the predictions so the pass cannot be skipped
        if int(np.sum(codes)) != checksum:
            raise RuntimeError("prediction pass is not deterministic")
    total = statistics.median(durations)
    return BenchResult(
        model.kind.value,
        test.kind.value,
        n,
        total,
        total / n,
        repeats,
        "median",
        checksum,
    )


def append_csv(results, path):
    """Append rows to a results CSV, writing the header for a new file."""
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if new:
            writer.writerow(CSV_HEADER)
        for r in results:
            writer.writerow(r.csv_row())

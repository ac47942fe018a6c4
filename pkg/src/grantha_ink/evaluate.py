"""Confusion matrices, recognition-rate reports, and the DTW-vs-Euclidean
classifier comparison harness."""

from __future__ import annotations

import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .dtw import RecognitionModel, _euclidean_resampled, recognize
from .ink import InkSample

__all__ = [
    "VARIANTS",
    "EvaluationError",
    "ConfusionMatrix",
    "ClassMetrics",
    "EvalReport",
    "evaluate",
    "most_confused",
    "word_accuracy",
]

VARIANTS = ("dtw", "euclidean_resampled")
DEFAULT_RESAMPLE_LENGTH = 64


class EvaluationError(ValueError):
    """The test set cannot be evaluated against the model."""


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns are predictions, in model class order."""

    classes: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.classes), len(self.classes)):
            raise ValueError("counts must be square in class order")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)

    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def total(self) -> int:
        return int(self.counts.sum())

    def accuracy(self) -> float:
        total = self.total()
        return float(np.trace(self.counts)) / total if total else 0.0

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("true\\pred," + ",".join(self.classes) + "\n")
        for name, row in zip(self.classes, self.counts):
            out.write(name + "," + ",".join(str(int(v)) for v in row) + "\n")
        return out.getvalue()


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    variant: str
    accuracy_percent: float
    per_class: dict[str, ClassMetrics]
    most_confused: tuple[tuple[str, str, int], ...]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "accuracy_percent": self.accuracy_percent,
            "per_class": {
                name: {"precision": m.precision, "recall": m.recall, "support": m.support}
                for name, m in self.per_class.items()
            },
            "most_confused": [list(entry) for entry in self.most_confused],
        }

    def to_text(self) -> str:
        width = max([len(name) for name in self.per_class] + [5])
        lines = [
            f"variant: {self.variant}",
            f"overall accuracy: {self.accuracy_percent:.2f}%",
            f"{'class'.ljust(width)}  precision  recall  support",
        ]
        for name, m in self.per_class.items():
            lines.append(
                f"{name.ljust(width)}  {m.precision:9.3f}  {m.recall:6.3f}  {m.support:7d}")
        if self.most_confused:
            lines.append("most confused (true -> predicted: count):")
            for true_name, pred_name, count in self.most_confused:
                lines.append(f"  {true_name} -> {pred_name}: {count}")
        return "\n".join(lines) + "\n"


def most_confused(matrix: ConfusionMatrix, top: int = 10) -> list[tuple[str, str, int]]:
    """Largest off-diagonal cells, descending; ties follow class order."""
    entries = []
    n = len(matrix.classes)
    for i in range(n):
        for j in range(n):
            if i != j and matrix.counts[i, j] > 0:
                entries.append((-int(matrix.counts[i, j]), i, j))
    entries.sort()
    return [(matrix.classes[i], matrix.classes[j], -neg) for neg, i, j in entries[:top]]


def evaluate(
    model: RecognitionModel,
    test_samples: Sequence[InkSample],
    k: int = 3,
    variant: str = "dtw",
    resample_length: int = DEFAULT_RESAMPLE_LENGTH,
) -> tuple[ConfusionMatrix, EvalReport]:
    """Top-1 recognize every test sample and aggregate a confusion matrix and
    report.  The euclidean_resampled variant replaces the DTW metric with the
    fixed-length no-warping baseline."""
    if variant not in VARIANTS:
        raise EvaluationError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    test_samples = list(test_samples)
    if not test_samples:
        raise EvaluationError("empty test set")
    index = {cls.id: i for i, cls in enumerate(model.classes)}
    for sample in test_samples:
        if sample.label is None:
            raise EvaluationError("test sample without a label")
        if sample.label not in index:
            raise EvaluationError(f"test label {sample.label!r} is not a model class")

    distance_fn = _euclidean_resampled(resample_length) if variant == "euclidean_resampled" else None
    counts = np.zeros((len(model.classes), len(model.classes)), dtype=np.int64)
    for sample in test_samples:
        top = recognize(model, sample, n_best=1, k=k, distance_fn=distance_fn)[0]
        counts[index[sample.label], index[top.class_id]] += 1

    matrix = ConfusionMatrix(tuple(cls.id for cls in model.classes), counts)
    per_class = {}
    col_sums = counts.sum(axis=0)
    row_sums = counts.sum(axis=1)
    for i, cls in enumerate(model.classes):
        hits = int(counts[i, i])
        per_class[cls.id] = ClassMetrics(
            precision=hits / col_sums[i] if col_sums[i] else 0.0,
            recall=hits / row_sums[i] if row_sums[i] else 0.0,
            support=int(row_sums[i]),
        )
    report = EvalReport(
        variant=variant,
        accuracy_percent=matrix.accuracy() * 100.0,
        per_class=per_class,
        most_confused=tuple(most_confused(matrix)),
    )
    return matrix, report


def word_accuracy(
    model: RecognitionModel,
    words: Iterable[Sequence[InkSample]],
    k: int = 3,
) -> float:
    """Fraction of words whose every symbol is recognized top-1 correctly."""
    total = 0
    correct = 0
    for word in words:
        word = list(word)
        if not word:
            continue
        total += 1
        if all(recognize(model, s, n_best=1, k=k)[0].class_id == s.label for s in word):
            correct += 1
    if total == 0:
        raise EvaluationError("no words to evaluate")
    return correct / total

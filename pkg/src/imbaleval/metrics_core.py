"""Confusion matrices and pointwise rate metrics for binary classifiers.

The positive class is always the minority class of interest. A sample is
predicted positive when its score is greater than or equal to the threshold.
Metrics whose denominator is zero raise :class:`UndefinedMetricError` instead
of returning a conventional 0 or 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "UndefinedMetricError",
    "Label",
    "LabeledScore",
    "ScoredDataset",
    "ConfusionMatrix",
    "ImbalanceRatio",
    "confusion_at_threshold",
    "tpr",
    "fpr",
    "frr",
    "precision",
    "recall",
    "accuracy",
    "f_score",
    "harmonic_mean",
    "precision_from_roc_point",
]

Number = Union[int, float]


class UndefinedMetricError(ValueError):
    """A metric was requested whose denominator is zero."""


class Label(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class LabeledScore:
    score: float
    label: Label

    def __post_init__(self) -> None:
        if not math.isfinite(self.score):
            raise ValueError(f"score must be finite, got {self.score!r}")
        if not isinstance(self.label, Label):
            raise TypeError(f"label must be a Label, got {self.label!r}")


@dataclass(frozen=True)
class ScoredDataset:
    """Immutable evaluation set of scored, labelled samples."""

    samples: tuple[LabeledScore, ...]
    pos_count: int
    neg_count: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(self.samples))
        pos = sum(1 for s in self.samples if s.label is Label.POSITIVE)
        if pos != self.pos_count or len(self.samples) - pos != self.neg_count:
            raise ValueError(
                f"class counts ({self.pos_count}, {self.neg_count}) do not match samples "
                f"({pos}, {len(self.samples) - pos})"
            )

    @classmethod
    def from_samples(cls, samples: Iterable[LabeledScore]) -> "ScoredDataset":
        samples = tuple(samples)
        pos = sum(1 for s in samples if s.label is Label.POSITIVE)
        return cls(samples, pos, len(samples) - pos)

    @classmethod
    def from_arrays(cls, scores: Sequence[float], positive: Sequence[bool]) -> "ScoredDataset":
        """Build a dataset from parallel score and is-positive sequences."""
        if len(scores) != len(positive):
            raise ValueError("scores and labels differ in length")
        return cls.from_samples(
            LabeledScore(float(s), Label.POSITIVE if p else Label.NEGATIVE)
            for s, p in zip(scores, positive)
        )

    def __len__(self) -> int:
        return len(self.samples)

    @cached_property
    def scores(self) -> np.ndarray:
        arr = np.array([s.score for s in self.samples], dtype=np.float64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def is_positive(self) -> np.ndarray:
        arr = np.array([s.label is Label.POSITIVE for s in self.samples], dtype=bool)
        arr.setflags(write=False)
        return arr

    @property
    def p_test(self) -> float:
        """Minority (positive) prior of this evaluation set."""
        if not self.samples:
            raise ValueError("empty dataset")
        return self.pos_count / (self.pos_count + self.neg_count)


@dataclass(frozen=True)
class ConfusionMatrix:
    """TP/FP/TN/FN cells; integers for counted matrices, reals when reweighted."""

    tp: Number
    fp: Number
    tn: Number
    fn: Number

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
                raise TypeError(f"{name} must be a number, got {v!r}")
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")

    @property
    def positives(self) -> Number:
        return self.tp + self.fn

    @property
    def negatives(self) -> Number:
        return self.fp + self.tn

    @property
    def total(self) -> Number:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in (self.tp, self.fp, self.tn, self.fn))


@dataclass(frozen=True)
class ImbalanceRatio:
    """Minority-to-majority count ratio P/N; ``0.01`` means 1:100."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"imbalance ratio must be a positive finite number, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def coerce(cls, ir: "ImbalanceRatio | Number") -> "ImbalanceRatio":
        return ir if isinstance(ir, ImbalanceRatio) else cls(ir)

    @classmethod
    def from_prior(cls, p: float) -> "ImbalanceRatio":
        if not 0.0 < p < 1.0:
            raise ValueError(f"prior must lie in (0, 1), got {p!r}")
        return cls(p / (1.0 - p))

    @classmethod
    def from_counts(cls, pos_count: int, neg_count: int) -> "ImbalanceRatio":
        if pos_count <= 0 or neg_count <= 0:
            raise ValueError("imbalance ratio needs both classes present")
        return cls(pos_count / neg_count)

    @property
    def prior(self) -> float:
        """Minority prior ``IR / (1 + IR)``."""
        return self.value / (1.0 + self.value)

    @property
    def minority_positive(self) -> bool:
        return self.value <= 1.0


def confusion_at_threshold(dataset: ScoredDataset, threshold: float) -> ConfusionMatrix:
    """Count outcomes when every sample with ``score >= threshold`` is called positive.

    ``threshold=math.inf`` is the all-reject sentinel.
    """
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    predicted = dataset.scores >= threshold
    pos = dataset.is_positive
    tp = int(np.count_nonzero(predicted & pos))
    fp = int(np.count_nonzero(predicted & ~pos))
    return ConfusionMatrix(tp=tp, fp=fp, tn=dataset.neg_count - fp, fn=dataset.pos_count - tp)


def _ratio(num: Number, den: Number, what: str) -> float:
    if den == 0:
        raise UndefinedMetricError(what)
    return num / den


def tpr(cm: ConfusionMatrix) -> float:
    """True positive rate TP / (TP + FN)."""
    return _ratio(cm.tp, cm.tp + cm.fn, "tpr undefined: no positive samples")


def recall(cm: ConfusionMatrix) -> float:
    return tpr(cm)


def fpr(cm: ConfusionMatrix) -> float:
    """False positive rate FP / (FP + TN)."""
    return _ratio(cm.fp, cm.fp + cm.tn, "fpr undefined: no negative samples")


def frr(cm: ConfusionMatrix) -> float:
    """False rejection rate, ``1 - tpr``."""
    return 1.0 - tpr(cm)


def precision(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fp, "precision undefined: no detections")


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp + cm.tn, cm.total, "accuracy undefined: empty confusion matrix")


def harmonic_mean(p: float, r: float) -> float:
    if p + r == 0:
        raise UndefinedMetricError("F-score undefined: precision and recall are both zero")
    return 2.0 * p * r / (p + r)


def f_score(cm: ConfusionMatrix) -> float:
    """F1: harmonic mean of precision and recall."""
    return harmonic_mean(precision(cm), recall(cm))


def precision_from_roc_point(tpr: float, fpr: float, ir: ImbalanceRatio | Number) -> float:
    """Precision implied by an ROC operating point once the imbalance ratio is known.

    Computes ``tpr / (fpr / ir + tpr)``. An ROC point alone does not determine
    precision; ``ir`` supplies the missing class ratio.
    """
    ir = ImbalanceRatio.coerce(ir)
    for name, v in (("tpr", tpr), ("fpr", fpr)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
    if tpr == 0 and fpr == 0:
        raise UndefinedMetricError("precision undefined: no detections")
    return tpr / (fpr / ir.value + tpr)

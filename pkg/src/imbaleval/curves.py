"""Threshold-sweep construction of ROC, DET and PR curves.

Every distinct score is one vertex; tied scores collapse into a single step.
The sweep starts from a ``+inf`` sentinel (nothing predicted positive) and
walks the distinct scores in descending order, so points come out ordered by
x ascending with ties broken by threshold descending.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from statistics import NormalDist

import numpy as np

from .metrics_core import ScoredDataset, UndefinedMetricError

__all__ = [
    "CurveKind",
    "CurvePoint",
    "Curve",
    "SweepCounts",
    "sweep_counts",
    "roc_curve",
    "det_curve",
    "pr_curve",
    "pr_curve_at_prior",
    "det_probit",
]

PROBIT_CLAMP = 1e-6


class CurveKind(enum.Enum):
    ROC = "roc"
    DET = "det"
    PR = "pr"
    ADJUSTED_PRECISION = "adjprec"


@dataclass(frozen=True)
class CurvePoint:
    threshold: float | None
    x: float
    y: float


@dataclass(frozen=True)
class Curve:
    kind: CurveKind
    points: tuple[CurvePoint, ...]
    pos_count: float | None = None
    neg_count: float | None = None
    p_test: float | None = None
    p_real: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("curve has no points")
        for pt in self.points:
            if not (0.0 <= pt.x <= 1.0 and 0.0 <= pt.y <= 1.0):
                raise ValueError(f"{self.kind.value} point out of the unit square: {pt}")
        if self.kind is CurveKind.ROC:
            _check_roc(self.points)

    @classmethod
    def from_xy(cls, kind: CurveKind, xs, ys, thresholds=None, **meta) -> "Curve":
        if thresholds is None:
            thresholds = [None] * len(xs)
        pts = tuple(CurvePoint(t if t is None else float(t), float(x), float(y))
                    for t, x, y in zip(thresholds, xs, ys))
        return cls(kind, pts, **meta)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def x(self) -> np.ndarray:
        return np.array([p.x for p in self.points], dtype=np.float64)

    @cached_property
    def y(self) -> np.ndarray:
        return np.array([p.y for p in self.points], dtype=np.float64)

    def vertices(self) -> list[tuple[float, float]]:
        return [(p.x, p.y) for p in self.points]


def _check_roc(points: tuple[CurvePoint, ...]) -> None:
    first, last = points[0], points[-1]
    if (first.x, first.y) != (0.0, 0.0) or (last.x, last.y) != (1.0, 1.0):
        raise ValueError("ROC curve must start at (0, 0) and end at (1, 1)")
    for a, b in zip(points, points[1:]):
        if b.x < a.x or b.y < a.y:
            raise ValueError(f"ROC curve is not monotone between {a} and {b}")


@dataclass(frozen=True)
class SweepCounts:
    """Cumulative counts at each sweep threshold, sentinel first."""

    thresholds: np.ndarray
    tp: np.ndarray
    fp: np.ndarray
    pos_count: int
    neg_count: int


def sweep_counts(dataset: ScoredDataset) -> SweepCounts:
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    scores = dataset.scores
    pos = dataset.is_positive
    # stable sort on (score descending, positives first) so row order never matters
    order = np.lexsort((~pos, -scores))
    s = scores[order]
    p = pos[order].astype(np.int64)
    last_of_group = np.flatnonzero(np.append(s[1:] != s[:-1], True))
    tp = np.cumsum(p)[last_of_group]
    fp = (last_of_group + 1) - tp
    zero = np.zeros(1, dtype=np.int64)
    return SweepCounts(
        thresholds=np.concatenate(([math.inf], s[last_of_group])),
        tp=np.concatenate((zero, tp)),
        fp=np.concatenate((zero, fp)),
        pos_count=dataset.pos_count,
        neg_count=dataset.neg_count,
    )


def _need_both(dataset: ScoredDataset, what: str) -> None:
    if dataset.pos_count < 1 or dataset.neg_count < 1:
        raise ValueError(f"need both classes for {what}")


def _meta(dataset: ScoredDataset) -> dict:
    return dict(pos_count=dataset.pos_count, neg_count=dataset.neg_count, p_test=dataset.p_test)


def roc_curve(dataset: ScoredDataset) -> Curve:
    """(FPR, TPR) at every distinct score plus the all-reject sentinel."""
    _need_both(dataset, "ROC")
    c = sweep_counts(dataset)
    return Curve.from_xy(CurveKind.ROC, c.fp / c.neg_count, c.tp / c.pos_count, c.thresholds,
                         **_meta(dataset))


def det_curve(dataset: ScoredDataset) -> Curve:
    """(FPR, FRR) on the same thresholds as :func:`roc_curve`."""
    _need_both(dataset, "DET")
    roc = roc_curve(dataset)
    return Curve(
        CurveKind.DET,
        tuple(CurvePoint(p.threshold, p.x, 1.0 - p.y) for p in roc.points),
        **_meta(dataset),
    )


def det_probit(curve: Curve) -> tuple[list[float], list[float]]:
    """Standard-normal deviates of a DET curve's FPR and FRR.

    Rates are clamped to ``[1e-6, 1 - 1e-6]`` first so the endpoints stay finite.
    """
    if curve.kind is not CurveKind.DET:
        raise ValueError(f"expected a DET curve, got {curve.kind.value}")
    nd = NormalDist()

    def warp(v: float) -> float:
        return nd.inv_cdf(min(max(v, PROBIT_CLAMP), 1.0 - PROBIT_CLAMP))

    return [warp(p.x) for p in curve.points], [warp(p.y) for p in curve.points]


def pr_curve(dataset: ScoredDataset) -> Curve:
    """(recall, precision) at every threshold where something is detected."""
    if dataset.pos_count < 1:
        raise ValueError("need at least one positive sample for PR")
    c = sweep_counts(dataset)
    detected = (c.tp + c.fp) > 0
    if not detected.any():
        raise UndefinedMetricError("precision undefined at every threshold")
    tp, fp = c.tp[detected], c.fp[detected]
    return Curve.from_xy(CurveKind.PR, tp / c.pos_count, tp / (tp + fp), c.thresholds[detected],
                         **_meta(dataset))


def pr_curve_at_prior(dataset: ScoredDataset, p_real: float) -> Curve:
    """PR curve with precision re-targeted to deployment prior ``p_real``."""
    from .metrics_core import ConfusionMatrix
    from .prior_shift import PriorSpec, adjusted_precision

    if dataset.pos_count < 1:
        raise ValueError("need at least one positive sample for PR")
    priors = PriorSpec(p_test=dataset.p_test, p_real=p_real)
    c = sweep_counts(dataset)
    pts = []
    for t, tp, fp in zip(c.thresholds.tolist(), c.tp.tolist(), c.fp.tolist()):
        if tp + fp == 0:
            continue
        cm = ConfusionMatrix(tp=tp, fp=fp, tn=c.neg_count - fp, fn=c.pos_count - tp)
        pts.append(CurvePoint(t, tp / c.pos_count, adjusted_precision(cm, priors)))
    return Curve(CurveKind.PR, tuple(pts), p_real=priors.p_real, **_meta(dataset))

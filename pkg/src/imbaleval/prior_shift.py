"""Precision and F-score re-targeted from the test-set prior to a deployment prior."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import Curve, CurveKind, CurvePoint
from .metrics_core import (
    ConfusionMatrix,
    UndefinedMetricError,
    harmonic_mean,
    recall,
)

__all__ = [
    "PriorSpec",
    "PriorSweep",
    "adjusted_precision",
    "adjusted_f_score",
    "adjusted_precision_curve",
    "sweep_priors",
]

DEFAULT_POINTS_PER_DECADE = 50


def _check_prior(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {p!r}")
    return p


@dataclass(frozen=True)
class PriorSpec:
    """Minority prior of the evaluation set and the one expected in deployment."""

    p_test: float
    p_real: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_test", _check_prior("p_test", self.p_test))
        object.__setattr__(self, "p_real", _check_prior("p_real", self.p_real))

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix, p_real: float) -> "PriorSpec":
        """Take ``p_test`` from the matrix's own class marginals."""
        return cls(p_test=cm.positives / cm.total, p_real=p_real)

    @property
    def positive_weight(self) -> float:
        return self.p_real / self.p_test

    @property
    def negative_weight(self) -> float:
        return (1.0 - self.p_real) / (1.0 - self.p_test)


@dataclass(frozen=True)
class PriorSweep:
    p_min: float
    p_max: float
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE

    def __post_init__(self) -> None:
        _check_prior("p_min", self.p_min)
        _check_prior("p_max", self.p_max)
        if not self.p_min < self.p_max:
            raise ValueError(f"p_min must be below p_max, got {self.p_min!r} >= {self.p_max!r}")
        ppd = self.points_per_decade
        if isinstance(ppd, bool) or not isinstance(ppd, int) or ppd < 1:
            raise ValueError(f"points_per_decade must be a positive integer, got {self.points_per_decade!r}")


def sweep_priors(sweep: PriorSweep) -> list[float]:
    """Log-uniform grid on ``[p_min, p_max]``.

    Interior points sit at exponents ``k / points_per_decade`` so decade values
    such as 0.01 land exactly on the grid; both endpoints are always present.
    """
    ppd = int(sweep.points_per_decade)
    lo, hi = math.log10(sweep.p_min), math.log10(sweep.p_max)
    k_lo = math.floor(lo * ppd) + 1
    k_hi = math.ceil(hi * ppd) - 1
    grid = [sweep.p_min]
    for k in range(k_lo, k_hi + 1):
        p = 10.0 ** (k / ppd)
        # drop interior points that collapse onto an endpoint
        if p <= grid[-1] * (1 + 1e-9) or p >= sweep.p_max * (1 - 1e-9):
            continue
        grid.append(p)
    grid.append(sweep.p_max)
    return grid


def adjusted_precision(cm: ConfusionMatrix, priors: PriorSpec) -> float:
    """Precision the classifier would have if positives occurred at ``priors.p_real``.

    True positives are reweighted by ``p_real / p_test`` and false positives by
    ``(1 - p_real) / (1 - p_test)``. With ``p_real == p_test`` both weights are
    exactly 1 and the plain precision comes back unchanged.
    """
    if cm.tp == 0 and cm.fp == 0:
        raise UndefinedMetricError("precision undefined: no detections")
    wtp = priors.positive_weight * cm.tp
    wfp = priors.negative_weight * cm.fp
    return wtp / (wtp + wfp)


def adjusted_f_score(cm: ConfusionMatrix, priors: PriorSpec) -> float:
    """F1 from adjusted precision and the (prior-invariant) recall.

    Only beta = 1 is provided; an F-beta variant would weight the same two terms.
    """
    return harmonic_mean(adjusted_precision(cm, priors), recall(cm))


def adjusted_precision_curve(
    cm: ConfusionMatrix,
    sweep: PriorSweep,
    p_test: float | None = None,
    threshold: float | None = None,
) -> Curve:
    """Adjusted precision as a function of the deployment prior.

    ``p_test`` defaults to the positive share of ``cm``. ``threshold`` records
    the operating point ``cm`` was taken at and is copied onto every point.
    """
    if p_test is None:
        if cm.total == 0:
            raise ValueError("empty confusion matrix")
        p_test = cm.positives / cm.total
    p_test = _check_prior("p_test", p_test)
    points = [
        CurvePoint(
            threshold=threshold,
            x=p,
            y=adjusted_precision(cm, PriorSpec(p_test=p_test, p_real=p)),
        )
        for p in sweep_priors(sweep)
    ]
    return Curve(
        kind=CurveKind.ADJUSTED_PRECISION,
        points=tuple(points),
        pos_count=cm.positives,
        neg_count=cm.negatives,
        p_test=p_test,
    )

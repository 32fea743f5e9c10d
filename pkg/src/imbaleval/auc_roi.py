"""Full and partial area under ROC curves.

Areas are trapezoidal over the piecewise-linear curve through the sweep
vertices, which reproduces the pair-counting AUC with ties weighted 1/2.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .curves import Curve, CurveKind

__all__ = [
    "RegionOfInterest",
    "ComparisonResult",
    "auc",
    "partial_auc",
    "interpolate_tpr_at_fpr",
    "compare_roi",
]


@dataclass(frozen=True)
class RegionOfInterest:
    """FPR interval ``[fpr_min, fpr_max]`` a deployed system could operate in."""

    fpr_min: float
    fpr_max: float

    def __post_init__(self) -> None:
        lo, hi = float(self.fpr_min), float(self.fpr_max)
        if not (0.0 <= lo < 1.0 and 0.0 < hi <= 1.0 and lo < hi):
            raise ValueError(f"invalid region of interest [{self.fpr_min!r}, {self.fpr_max!r}]")
        object.__setattr__(self, "fpr_min", lo)
        object.__setattr__(self, "fpr_max", hi)

    @property
    def width(self) -> float:
        return self.fpr_max - self.fpr_min

    @classmethod
    def parse(cls, text: str) -> "RegionOfInterest":
        """Parse ``"MIN:MAX"``."""
        try:
            lo, hi = text.split(":")
            return cls(float(lo), float(hi))
        except ValueError as exc:
            raise ValueError(f"invalid ROI {text!r}: expected MIN:MAX with 0 <= MIN < MAX <= 1") from exc


FULL_RANGE = RegionOfInterest(0.0, 1.0)


def _require_roc(curve: Curve) -> None:
    if curve.kind is not CurveKind.ROC:
        raise ValueError(f"expected an ROC curve, got {curve.kind.value}")


def _trapezoid(xs: list[float], ys: list[float]) -> float:
    return math.fsum((x1 - x0) * (y0 + y1) / 2.0 for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:]))


def _between(xs: list[float], ys: list[float], fpr: float) -> float:
    """Linear interpolation for an ``fpr`` that is not a vertex abscissa."""
    i = bisect_left(xs, fpr)
    x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
    return y0 + (y1 - y0) * (fpr - x0) / (x1 - x0)


def interpolate_tpr_at_fpr(curve: Curve, fpr: float) -> float:
    """TPR of the ROC polyline at ``fpr``; on a vertical segment the top value wins."""
    _require_roc(curve)
    if not 0.0 <= fpr <= 1.0:
        raise ValueError(f"fpr must lie in [0, 1], got {fpr!r}")
    xs, ys = curve.x.tolist(), curve.y.tolist()
    hi = bisect_right(xs, fpr)
    if hi and xs[hi - 1] == fpr:
        return max(ys[bisect_left(xs, fpr):hi])
    return _between(xs, ys, fpr)


def _clip(curve: Curve, roi: RegionOfInterest) -> tuple[list[float], list[float]]:
    xs, ys = curve.x.tolist(), curve.y.tolist()
    a, b = roi.fpr_min, roi.fpr_max
    lo, hi = bisect_left(xs, a), bisect_right(xs, b)
    cx, cy = xs[lo:hi], ys[lo:hi]
    # every vertex on a boundary abscissa is kept, so vertical steps there add no area
    if not cx or cx[0] != a:
        cx.insert(0, a)
        cy.insert(0, _between(xs, ys, a))
    if cx[-1] != b:
        cx.append(b)
        cy.append(_between(xs, ys, b))
    return cx, cy


def partial_auc(curve: Curve, roi: RegionOfInterest, normalized: bool = False) -> float:
    """Area under the ROC curve for FPR in ``roi``.

    With ``normalized`` the area is divided by the ROI width, so a perfect
    classifier scores 1 and a random one scores the ROI's mean FPR.
    """
    _require_roc(curve)
    area = _trapezoid(*_clip(curve, roi))
    return area / roi.width if normalized else area


def auc(curve: Curve) -> float:
    return partial_auc(curve, FULL_RANGE)


def _winner(a: float, b: float) -> str:
    return "a" if a > b else "b" if b > a else "tie"


@dataclass(frozen=True)
class ComparisonResult:
    roi: RegionOfInterest
    auc_a: float
    auc_b: float
    pauc_a: float
    pauc_b: float
    pauc_normalized_a: float
    pauc_normalized_b: float

    @property
    def full_winner(self) -> str:
        return _winner(self.auc_a, self.auc_b)

    @property
    def roi_winner(self) -> str:
        return _winner(self.pauc_a, self.pauc_b)

    @property
    def inversion(self) -> bool:
        """True when each curve strictly wins one of the two comparisons."""
        return "tie" not in (self.full_winner, self.roi_winner) and self.full_winner != self.roi_winner


def compare_roi(curve_a: Curve, curve_b: Curve, roi: RegionOfInterest) -> ComparisonResult:
    pa, pb = partial_auc(curve_a, roi), partial_auc(curve_b, roi)
    return ComparisonResult(
        roi=roi,
        auc_a=auc(curve_a),
        auc_b=auc(curve_b),
        pauc_a=pa,
        pauc_b=pb,
        pauc_normalized_a=pa / roi.width,
        pauc_normalized_b=pb / roi.width,
    )

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from imbaleval.curves import CurveKind
from imbaleval.metrics_core import ConfusionMatrix, UndefinedMetricError, f_score, fpr, precision, tpr
from imbaleval.metrics_core import precision_from_roc_point
from imbaleval.prior_shift import (
    PriorSpec,
    PriorSweep,
    adjusted_f_score,
    adjusted_precision,
    adjusted_precision_curve,
    sweep_priors,
)

CM = ConfusionMatrix(tp=90, fp=10, tn=90, fn=10)
priors = st.floats(1e-6, 1 - 1e-6)


@st.composite
def matrices(draw, min_tp=0, min_fp=0):
    return ConfusionMatrix(
        tp=draw(st.integers(min_tp, 10_000)),
        fp=draw(st.integers(min_fp, 10_000)),
        tn=draw(st.integers(0, 10_000)),
        fn=draw(st.integers(0, 10_000)),
    )


def test_prior_spec_validation():
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            PriorSpec(p_test=bad, p_real=0.5)
        with pytest.raises(ValueError):
            PriorSpec(p_test=0.5, p_real=bad)


def test_sweep_validation():
    with pytest.raises(ValueError):
        PriorSweep(0.5, 0.1)
    with pytest.raises(ValueError):
        PriorSweep(0.1, 0.5, 0)


def test_equal_priors_give_plain_precision():
    assert adjusted_precision(CM, PriorSpec(0.5, 0.5)) == 0.9


def test_deployment_prior_matches_roc_point_formula():
    got = adjusted_precision(CM, PriorSpec(0.5, 0.01))
    assert got == pytest.approx(precision_from_roc_point(0.9, 0.1, 1 / 99), abs=1e-12)
    assert got == pytest.approx(1 / 12, abs=1e-12)


def test_no_false_positives_is_perfect():
    cm = ConfusionMatrix(tp=5, fp=0, tn=7, fn=3)
    for p_real in (1e-5, 0.3, 0.99):
        assert adjusted_precision(cm, PriorSpec(0.4, p_real)) == 1.0


def test_no_detections_is_undefined():
    with pytest.raises(UndefinedMetricError, match="no detections"):
        adjusted_precision(ConfusionMatrix(0, 0, 5, 5), PriorSpec(0.5, 0.1))


def test_adjusted_f_score():
    assert adjusted_f_score(CM, PriorSpec(0.5, 0.5)) == f_score(CM)
    ap = adjusted_precision(CM, PriorSpec(0.5, 0.01))
    expected = 2 * ap * 0.9 / (ap + 0.9)
    assert adjusted_f_score(CM, PriorSpec(0.5, 0.01)) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.152542372881356, abs=1e-12)


def test_adjusted_f_score_zero_recall():
    cm = ConfusionMatrix(tp=0, fp=4, tn=10, fn=3)
    assert adjusted_precision(cm, PriorSpec(0.2, 0.01)) == 0.0
    with pytest.raises(UndefinedMetricError, match="undefined"):
        adjusted_f_score(cm, PriorSpec(0.2, 0.01))


@given(matrices(), priors)
def test_reduction_to_precision(cm, p):
    assume(cm.tp + cm.fp > 0)
    assert abs(adjusted_precision(cm, PriorSpec(p, p)) - precision(cm)) <= 1e-15


@given(matrices(min_tp=1, min_fp=1), priors, priors, priors)
def test_strictly_increasing_in_deployment_prior(cm, p_test, a, b):
    assume(abs(a - b) > 1e-6 * max(a, b))
    lo, hi = sorted((a, b))
    assert adjusted_precision(cm, PriorSpec(p_test, lo)) < adjusted_precision(cm, PriorSpec(p_test, hi))


@given(matrices(min_tp=1, min_fp=1))
def test_limits(cm):
    p_test = cm.positives / cm.total
    assert adjusted_precision(cm, PriorSpec(p_test, 1e-12)) == pytest.approx(0.0, abs=1e-6)
    assert adjusted_precision(cm, PriorSpec(p_test, 1 - 1e-12)) == pytest.approx(1.0, abs=1e-6)


@given(matrices(min_fp=0), st.floats(1e-4, 1 - 1e-4))
def test_consistent_with_roc_point(cm, p_real):
    assume(cm.tp + cm.fn > 0 and cm.fp + cm.tn > 0 and cm.tp + cm.fp > 0)
    spec = PriorSpec.from_confusion(cm, p_real)
    expected = precision_from_roc_point(tpr(cm), fpr(cm), p_real / (1 - p_real))
    assert abs(adjusted_precision(cm, spec) - expected) <= 1e-12


@given(st.integers(1, 40), st.integers(0, 40), st.integers(1, 99), st.integers(1, 999))
def test_equivalent_to_replicating_cells(tp, fp, test_pct, real_permille):
    """Reweighting equals replicating positives by r and negatives by s (exact rationals)."""
    p_test, p_real = Fraction(test_pct, 100), Fraction(real_permille, 1000)
    r, s = p_real / p_test, (1 - p_real) / (1 - p_test)
    scale = math.lcm(r.denominator, s.denominator)
    rep_pos, rep_neg = int(r * scale), int(s * scale)
    exact = Fraction(rep_pos * tp, rep_pos * tp + rep_neg * fp)
    got = adjusted_precision(ConfusionMatrix(tp, fp, 0, 0), PriorSpec(float(p_test), float(p_real)))
    assert got == pytest.approx(float(exact), rel=1e-13, abs=0)


def test_sweep_grid():
    grid = sweep_priors(PriorSweep(1e-4, 1e-2, 50))
    assert len(grid) == 101
    assert grid[0] == 1e-4 and grid[-1] == 1e-2
    assert 1e-3 in grid
    ratios = np.diff(np.log10(grid))
    assert np.allclose(ratios, 1 / 50)


def test_sweep_grid_uneven_endpoints():
    grid = sweep_priors(PriorSweep(3e-4, 0.5, 10))
    assert grid[0] == 3e-4 and grid[-1] == 0.5
    assert all(a < b for a, b in zip(grid, grid[1:]))
    assert np.all(np.diff(np.log10(grid)) <= 0.1 + 1e-12)
    assert 0.01 in grid


def test_curve_endpoints_and_decade_point():
    curve = adjusted_precision_curve(CM, PriorSweep(1e-4, 0.5), p_test=0.5)
    assert curve.kind is CurveKind.ADJUSTED_PRECISION
    pts = {p.x: p.y for p in curve.points}
    assert pts[0.5] == 0.9
    assert pts[0.01] == pytest.approx(1 / 12, abs=1e-12)
    assert curve.points[0].x == 1e-4


def test_curve_p_test_defaults_to_matrix_marginals():
    cm = ConfusionMatrix(tp=8, fp=30, tn=160, fn=2)
    curve = adjusted_precision_curve(cm, PriorSweep(1e-3, 0.05))
    assert curve.p_test == 10 / 200
    pts = {p.x: p.y for p in curve.points}
    assert pts[0.05] == pytest.approx(precision(cm), abs=1e-15)


def test_curve_without_false_positives_is_flat():
    cm = ConfusionMatrix(tp=5, fp=0, tn=50, fn=5)
    curve = adjusted_precision_curve(cm, PriorSweep(1e-4, 0.5), p_test=0.5)
    assert all(p.y == 1.0 for p in curve.points)


@settings(max_examples=50)
@given(matrices(min_tp=1, min_fp=1))
def test_curve_monotone(cm):
    ys = [p.y for p in adjusted_precision_curve(cm, PriorSweep(1e-4, 0.5)).points]
    assert all(a < b for a, b in zip(ys, ys[1:]))

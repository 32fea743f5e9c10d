import math
from statistics import NormalDist

import pytest
from hypothesis import given, settings, strategies as st

from imbaleval.curves import (
    Curve,
    CurveKind,
    CurvePoint,
    det_curve,
    det_probit,
    pr_curve,
    pr_curve_at_prior,
    roc_curve,
)
from imbaleval.metrics_core import ScoredDataset, precision_from_roc_point
from oracles import brute_confusion, brute_roc_vertices, random_scored


def xy(curve):
    return [(p.x, p.y) for p in curve.points]


def test_roc_separable(separable):
    roc = roc_curve(separable)
    assert (0.0, 1.0) in xy(roc)
    assert xy(roc)[0] == (0.0, 0.0) and xy(roc)[-1] == (1.0, 1.0)
    assert roc.points[0].threshold == math.inf


def test_roc_identical_scores():
    ds = ScoredDataset.from_arrays([0.3] * 5, [True, False, True, False, False])
    assert xy(roc_curve(ds)) == [(0.0, 0.0), (1.0, 1.0)]


def test_roc_needs_both_classes():
    with pytest.raises(ValueError, match="need both classes for ROC"):
        roc_curve(ScoredDataset.from_arrays([0.1, 0.2], [True, True]))


@pytest.mark.parametrize("ties", [False, True])
def test_roc_vertices_match_brute_force(rng, ties):
    for _ in range(10):
        scores, positive = random_scored(rng, 12, 18, ties=ties)
        roc = roc_curve(ScoredDataset.from_arrays(scores, positive))
        expected = brute_roc_vertices(scores, positive)
        assert [(p.threshold, p.x, p.y) for p in roc.points] == expected
        assert len(roc) == len(set(scores)) + 1


def test_roc_independent_of_row_order(rng):
    scores, positive = random_scored(rng, 15, 25, ties=True)
    a = roc_curve(ScoredDataset.from_arrays(scores, positive))
    perm = rng.permutation(len(scores))
    b = roc_curve(ScoredDataset.from_arrays([scores[i] for i in perm], [positive[i] for i in perm]))
    assert a.points == b.points


def test_det_examples(separable):
    assert (0.0, 0.0) in xy(det_curve(separable))
    ds = ScoredDataset.from_arrays([0.3] * 4, [True, False, True, False])
    assert xy(det_curve(ds)) == [(0.0, 1.0), (1.0, 0.0)]


def test_det_is_complement_of_roc(rng):
    scores, positive = random_scored(rng, 20, 30, ties=True)
    ds = ScoredDataset.from_arrays(scores, positive)
    roc, det = roc_curve(ds), det_curve(ds)
    for r, d in zip(roc.points, det.points):
        assert r.threshold == d.threshold and r.x == d.x
        assert d.y == 1.0 - r.y


def test_det_probit_clamps():
    ds = ScoredDataset.from_arrays([0.9, 0.1], [True, False])
    xs, ys = det_probit(det_curve(ds))
    nd = NormalDist()
    assert xs[0] == nd.inv_cdf(1e-6)
    assert ys[0] == nd.inv_cdf(1 - 1e-6)
    assert all(math.isfinite(v) for v in xs + ys)
    with pytest.raises(ValueError):
        det_probit(roc_curve(ds))


def test_pr_examples(separable):
    assert (1.0, 1.0) in xy(pr_curve(separable))
    scores = [0.05] + [0.1 * i for i in range(1, 10)]
    ds = ScoredDataset.from_arrays(scores, [True] + [False] * 9)
    last = pr_curve(ds).points[-1]
    assert last.threshold == 0.05 and (last.x, last.y) == (1.0, 0.1)


def test_pr_omits_undefined_precision(separable):
    pr = pr_curve(separable)
    assert all(p.threshold != math.inf for p in pr.points)
    assert len(pr) == 4


def test_pr_needs_positives():
    with pytest.raises(ValueError):
        pr_curve(ScoredDataset.from_arrays([0.1, 0.2], [False, False]))


def test_pr_vertices_match_brute_force(rng):
    scores, positive = random_scored(rng, 10, 25, ties=True)
    pr = pr_curve(ScoredDataset.from_arrays(scores, positive))
    for p in pr.points:
        tp, fp, _, fn = brute_confusion(scores, positive, p.threshold)
        assert (p.x, p.y) == (tp / (tp + fn), tp / (tp + fp))
    xs = [p.x for p in pr.points]
    assert xs == sorted(xs)


def test_pr_consistent_with_roc(rng):
    scores, positive = random_scored(rng, 14, 40)
    ds = ScoredDataset.from_arrays(scores, positive)
    roc = {p.threshold: p for p in roc_curve(ds).points}
    for p in pr_curve(ds).points:
        r = roc[p.threshold]
        assert abs(p.y - precision_from_roc_point(r.y, r.x, ds.pos_count / ds.neg_count)) <= 1e-12


def test_pr_at_test_prior_is_plain_pr(rng):
    scores, positive = random_scored(rng, 14, 40, ties=True)
    ds = ScoredDataset.from_arrays(scores, positive)
    assert xy(pr_curve_at_prior(ds, ds.p_test)) == xy(pr_curve(ds))


def test_pr_at_prior_separable(separable):
    # vertices at or above the lowest positive score admit no negatives
    lowest_pos = 0.8
    for p_real in (1e-4, 0.02, 0.9):
        pts = [p for p in pr_curve_at_prior(separable, p_real).points if p.threshold >= lowest_pos]
        assert [p.x for p in pts] == [0.5, 1.0]
        assert all(p.y == 1.0 for p in pts)


def test_pr_at_prior_vertex_value():
    # threshold 0.5 gives tpr 0.9, fpr 0.1 on a balanced set
    scores = [1.0] * 9 + [0.0] + [1.0] + [0.0] * 9
    ds = ScoredDataset.from_arrays(scores, [True] * 10 + [False] * 10)
    pts = {p.threshold: p.y for p in pr_curve_at_prior(ds, 0.01).points}
    assert pts[1.0] == pytest.approx(1 / 12, abs=1e-12)


def test_curve_validates_roc_shape():
    with pytest.raises(ValueError):
        Curve(CurveKind.ROC, (CurvePoint(None, 0.0, 0.0), CurvePoint(None, 0.5, 0.6)))
    with pytest.raises(ValueError):
        Curve(CurveKind.ROC, (CurvePoint(None, 0.0, 0.0), CurvePoint(None, 0.5, 0.6),
                              CurvePoint(None, 0.4, 0.7), CurvePoint(None, 1.0, 1.0)))


scored = st.lists(
    st.tuples(st.integers(-20, 20).map(lambda v: v / 4), st.booleans()),
    min_size=2, max_size=60,
).filter(lambda rows: 0 < sum(r[1] for r in rows) < len(rows))


@settings(max_examples=60)
@given(scored, st.integers(2, 5))
def test_replication_invariance(rows, m):
    scores, positive = [r[0] for r in rows], [r[1] for r in rows]
    base = roc_curve(ScoredDataset.from_arrays(scores, positive))
    neg = [(s, p) for s, p in rows if not p]
    pos = [(s, p) for s, p in rows if p]
    for extra in (neg, pos):
        grown = rows + extra * (m - 1)
        rep = roc_curve(ScoredDataset.from_arrays([r[0] for r in grown], [r[1] for r in grown]))
        assert xy(rep) == xy(base)


@given(scored)
def test_roc_monotone_and_vertex_count(rows):
    ds = ScoredDataset.from_arrays([r[0] for r in rows], [r[1] for r in rows])
    pts = xy(roc_curve(ds))
    assert all(b[0] >= a[0] and b[1] >= a[1] for a, b in zip(pts, pts[1:]))
    assert len(pts) == len({r[0] for r in rows}) + 1


def test_random_subsampling_roughly_preserves_roc(rng):
    """Uniform subsampling only preserves the ROC in expectation; check it loosely."""
    from imbaleval.auc_roi import auc

    scores, positive = random_scored(rng, 2000, 2000)
    full = auc(roc_curve(ScoredDataset.from_arrays(scores, positive)))
    keep = [i for i, p in enumerate(positive) if p or rng.random() < 0.1]
    sub = auc(roc_curve(ScoredDataset.from_arrays([scores[i] for i in keep], [positive[i] for i in keep])))
    assert abs(sub - full) < 0.03

"""Binary classifier evaluation under class imbalance."""

from .auc_roi import ComparisonResult, RegionOfInterest, auc, compare_roi, interpolate_tpr_at_fpr, partial_auc
from .audit import (
    AuditFinding,
    AuditReport,
    RuleId,
    Severity,
    audit_accuracy,
    audit_auc,
    audit_precision_prior,
    trivial_accuracy,
)
from .curves import Curve, CurveKind, CurvePoint, det_curve, det_probit, pr_curve, pr_curve_at_prior, roc_curve
from .files import load_scores
from .metrics_core import (
    ConfusionMatrix,
    ImbalanceRatio,
    Label,
    LabeledScore,
    ScoredDataset,
    UndefinedMetricError,
    accuracy,
    confusion_at_threshold,
    f_score,
    fpr,
    frr,
    precision,
    precision_from_roc_point,
    recall,
    tpr,
)
from .prior_shift import PriorSpec, PriorSweep, adjusted_f_score, adjusted_precision, adjusted_precision_curve

__version__ = "0.1.0"

"""Machine-checkable rules for common evaluation mistakes on imbalanced data."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .auc_roi import RegionOfInterest, compare_roi
from .curves import Curve
from .metrics_core import (
    ConfusionMatrix,
    ImbalanceRatio,
    UndefinedMetricError,
    precision,
)
from .prior_shift import PriorSpec, adjusted_precision

__all__ = [
    "RuleId",
    "Severity",
    "AuditFinding",
    "AuditReport",
    "trivial_accuracy",
    "audit_accuracy",
    "audit_precision_prior",
    "audit_auc",
    "audit_imbalance_ratio",
    "default_roi",
    "DEFAULT_MARGIN",
    "DEFAULT_PRIOR_TOLERANCE",
    "DEFAULT_ESCALATION",
]

DEFAULT_MARGIN = 0.005
DEFAULT_PRIOR_TOLERANCE = 0.1
# p_test above this multiple of p_real turns PRIOR_MISMATCH into an error
DEFAULT_ESCALATION = 2.0


class RuleId(str, enum.Enum):
    ACC_BELOW_TRIVIAL = "ACC_BELOW_TRIVIAL"
    ACC_NEAR_TRIVIAL = "ACC_NEAR_TRIVIAL"
    PRIOR_MISMATCH = "PRIOR_MISMATCH"
    AUC_ROI_INVERSION = "AUC_ROI_INVERSION"
    AUC_DEFAULT_ROI = "AUC_DEFAULT_ROI"
    MISSING_IR_FOR_PRECISION = "MISSING_IR_FOR_PRECISION"
    IR_GT_ONE = "IR_GT_ONE"


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {Severity.ERROR: 0, Severity.WARNING: 1, Severity.INFO: 2}


@dataclass(frozen=True)
class AuditFinding:
    rule_id: RuleId
    severity: Severity
    message: str
    evidence: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule_id": self.rule_id.value,
            "severity": self.severity.value,
            "message": self.message,
            "evidence": dict(self.evidence),
        }


@dataclass(frozen=True)
class AuditReport:
    findings: tuple[AuditFinding, ...]
    inputs_echo: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, findings, inputs_echo=None) -> "AuditReport":
        """Order findings by severity then rule id; stable within a rule."""
        ordered = sorted(findings, key=lambda f: (f.severity.rank, f.rule_id.value))
        return cls(tuple(ordered), dict(inputs_echo or {}))

    @property
    def has_errors(self) -> bool:
        return any(f.severity is Severity.ERROR for f in self.findings)

    def to_dict(self) -> dict[str, Any]:
        return {
            "findings": [f.to_dict() for f in self.findings],
            "inputs_echo": dict(self.inputs_echo),
        }


def trivial_accuracy(ir: ImbalanceRatio | float) -> float:
    """Accuracy of always predicting the majority class: ``1 / (1 + ir)``."""
    return 1.0 / (1.0 + ImbalanceRatio.coerce(ir).value)


def audit_imbalance_ratio(ir: ImbalanceRatio | float) -> list[AuditFinding]:
    ir = ImbalanceRatio.coerce(ir)
    if ir.minority_positive:
        return []
    return [AuditFinding(
        RuleId.IR_GT_ONE, Severity.INFO,
        f"imbalance ratio {ir.value!r} exceeds 1: is the positive class really the minority "
        "(check for swapped labels)?",
        {"ir": ir.value},
    )]


def audit_accuracy(
    reported_accuracy: float,
    ir: ImbalanceRatio | float,
    margin: float = DEFAULT_MARGIN,
) -> list[AuditFinding]:
    """Compare a reported accuracy against the majority-class baseline.

    Below the baseline is an error; at the baseline or less than ``margin``
    above it is a warning.
    """
    if not 0.0 <= reported_accuracy <= 1.0:
        raise ValueError(f"accuracy must lie in [0, 1], got {reported_accuracy!r}")
    if margin < 0:
        raise ValueError(f"margin must be nonnegative, got {margin!r}")
    ir = ImbalanceRatio.coerce(ir)
    baseline = trivial_accuracy(ir)
    evidence = {
        "reported_accuracy": float(reported_accuracy),
        "trivial_accuracy": baseline,
        "ir": ir.value,
        "margin": float(margin),
    }
    findings = audit_imbalance_ratio(ir)
    if reported_accuracy < baseline:
        findings.append(AuditFinding(
            RuleId.ACC_BELOW_TRIVIAL, Severity.ERROR,
            f"reported accuracy {reported_accuracy!r} is below the {baseline!r} achieved by always "
            f"predicting the majority class at imbalance ratio {ir.value!r}",
            evidence,
        ))
    elif reported_accuracy - baseline < margin:
        findings.append(AuditFinding(
            RuleId.ACC_NEAR_TRIVIAL, Severity.WARNING,
            f"reported accuracy {reported_accuracy!r} is within {margin!r} of the trivial "
            f"majority-class accuracy {baseline!r}",
            evidence,
        ))
    return findings


def audit_precision_prior(
    priors: PriorSpec,
    tolerance: float = DEFAULT_PRIOR_TOLERANCE,
    cm: ConfusionMatrix | None = None,
    escalation: float = DEFAULT_ESCALATION,
) -> list[AuditFinding]:
    """Flag precision measured at a test prior far from the deployment prior."""
    if tolerance < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tolerance!r}")
    gap = abs(priors.p_test - priors.p_real) / priors.p_real
    if not gap > tolerance:
        return []
    evidence = {
        "p_test": priors.p_test,
        "p_real": priors.p_real,
        "relative_gap": gap,
        "tolerance": float(tolerance),
        "escalation": float(escalation),
    }
    if cm is not None:
        try:
            evidence["precision_at_p_test"] = precision(cm)
            evidence["precision_at_p_real"] = adjusted_precision(cm, priors)
        except UndefinedMetricError:
            pass
    severe = priors.p_test > escalation * priors.p_real
    direction = "optimistic" if priors.p_test > priors.p_real else "pessimistic"
    return [AuditFinding(
        RuleId.PRIOR_MISMATCH, Severity.ERROR if severe else Severity.WARNING,
        f"test prior {priors.p_test!r} differs from deployment prior {priors.p_real!r} by "
        f"{gap:.3g} (relative); precision measured on the test set is {direction}",
        evidence,
    )]


def default_roi(ir: ImbalanceRatio | float) -> RegionOfInterest:
    """``[0, ir]``, capped at the full FPR range."""
    return RegionOfInterest(0.0, min(ImbalanceRatio.coerce(ir).value, 1.0))


def audit_auc(
    curve_a: Curve,
    curve_b: Curve | None = None,
    roi: RegionOfInterest | None = None,
    ir: ImbalanceRatio | float | None = None,
) -> list[AuditFinding]:
    """Check whether full AUC is a meaningful summary for the deployment regime.

    Without an ROI, one is derived from ``ir`` as ``[0, ir]`` and the share of
    the FPR axis lying outside it is reported. With two curves, an ordering
    flip between full AUC and ROI AUC is a warning.
    """
    findings: list[AuditFinding] = []
    if roi is None and ir is None:
        findings.append(AuditFinding(
            RuleId.MISSING_IR_FOR_PRECISION, Severity.INFO,
            "no region of interest or imbalance ratio given: full AUC alone does not show whether "
            "the classifier is usable at deployment operating points",
            {},
        ))
        return findings
    if ir is not None:
        findings.extend(audit_imbalance_ratio(ir))
    if roi is None:
        roi = default_roi(ir)
        findings.append(AuditFinding(
            RuleId.AUC_DEFAULT_ROI, Severity.INFO,
            f"region of interest defaulted to FPR [{roi.fpr_min!r}, {roi.fpr_max!r}] from the "
            f"imbalance ratio; {1.0 - roi.width:.6g} of the full AUC's FPR range lies outside it",
            {
                "ir": ImbalanceRatio.coerce(ir).value,
                "fpr_min": roi.fpr_min,
                "fpr_max": roi.fpr_max,
                "irrelevant_area_fraction": 1.0 - roi.width,
            },
        ))
    if curve_b is not None:
        cmp = compare_roi(curve_a, curve_b, roi)
        if cmp.inversion:
            findings.append(AuditFinding(
                RuleId.AUC_ROI_INVERSION, Severity.WARNING,
                f"curve {cmp.full_winner} has the larger full AUC but curve {cmp.roi_winner} has "
                f"the larger area on FPR [{roi.fpr_min!r}, {roi.fpr_max!r}]",
                {
                    "auc_a": cmp.auc_a,
                    "auc_b": cmp.auc_b,
                    "pauc_a": cmp.pauc_a,
                    "pauc_b": cmp.pauc_b,
                    "fpr_min": roi.fpr_min,
                    "fpr_max": roi.fpr_max,
                },
            ))
    return findings

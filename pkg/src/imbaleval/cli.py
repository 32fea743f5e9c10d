"""Command-line entry point: curves, summary metrics and audits for one score file.

All outputs are computed in memory first and written only when every
computation succeeded, so a failed run leaves no partial files behind.

Exit codes: 0 success, 1 operational error, 2 an audit finding of severity error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import audit as audit_rules
from .auc_roi import RegionOfInterest, auc, partial_auc
from .curves import Curve, det_curve, det_probit, pr_curve, pr_curve_at_prior, roc_curve
from .files import load_scores, render_csv, render_json
from .metrics_core import (
    ConfusionMatrix,
    ImbalanceRatio,
    ScoredDataset,
    UndefinedMetricError,
    accuracy,
    confusion_at_threshold,
    f_score,
    fpr,
    precision,
    tpr,
)
from .prior_shift import PriorSpec, PriorSweep, adjusted_f_score, adjusted_precision, adjusted_precision_curve
from .svg import Axis, Series, line_chart_svg

SCHEMA_VERSION = 1
CURVE_KINDS = ("roc", "det", "pr", "adjprec")
EMIT_FORMATS = ("csv", "json", "svg")
DEFAULT_SWEEP = (1e-4, 0.5, 50)

EXIT_OK, EXIT_FAILURE, EXIT_AUDIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    input_path: Path | None = None
    positive_label: str = "1"
    p_real: float | None = None
    p_test_override: float | None = None
    roi: RegionOfInterest | None = None
    curves: tuple[str, ...] = ()
    sweep: PriorSweep = field(default_factory=lambda: PriorSweep(*DEFAULT_SWEEP))
    threshold: float | None = None
    out_dir: Path = Path(".")
    emit: tuple[str, ...] = ("csv", "json")
    audit: bool = False
    accuracy: float | None = None
    ir: float | None = None
    margin: float = audit_rules.DEFAULT_MARGIN
    prior_tolerance: float = audit_rules.DEFAULT_PRIOR_TOLERANCE

    def __post_init__(self) -> None:
        if not self.curves and not self.audit:
            raise ValueError("nothing to do: select --curves and/or --audit")
        unknown = set(self.curves) - set(CURVE_KINDS)
        if unknown:
            raise ValueError(f"unknown curve kind(s): {', '.join(sorted(unknown))}")
        bad = set(self.emit) - set(EMIT_FORMATS)
        if bad:
            raise ValueError(f"unknown output format(s): {', '.join(sorted(bad))}")
        if self.curves and self.input_path is None:
            raise ValueError("curves require --input")
        if "adjprec" in self.curves and self.threshold is None:
            raise ValueError("the adjprec curve needs --threshold to fix the operating point")
        for name in ("p_real", "p_test_override"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {v!r}")
        if self.ir is not None:
            implied = ImbalanceRatio(self.ir).prior
            if self.p_real is not None and not math.isclose(implied, self.p_real, rel_tol=1e-9):
                raise ValueError(f"--ir {self.ir!r} implies prior {implied!r}, which contradicts "
                                 f"--p-real {self.p_real!r}")
        if self.accuracy is not None and not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must lie in [0, 1], got {self.accuracy!r}")
        if self.threshold is not None and not math.isfinite(self.threshold):
            raise ValueError("threshold must be finite")


@dataclass
class RunResult:
    files: dict[str, str]
    report: dict[str, Any]
    summary: list[str]
    has_errors: bool


def _maybe(fn, *args):
    try:
        return fn(*args)
    except UndefinedMetricError:
        return None


def _priored(value: float | None, prior: float | None) -> dict[str, Any]:
    # precision-type numbers never travel without the prior they hold for
    return {"value": value, "prior": prior}


def _curve_rows(kind: str, curve: Curve, extra: Curve | None = None) -> tuple[list[str], list[list]]:
    if kind == "roc":
        return ["threshold", "x", "y"], [[p.threshold, p.x, p.y] for p in curve.points]
    if kind == "det":
        xp, yp = det_probit(curve)
        return (["threshold", "x", "y", "x_probit", "y_probit"],
                [[p.threshold, p.x, p.y, a, b] for p, a, b in zip(curve.points, xp, yp)])
    if kind == "pr":
        cols = ["threshold", "x", "y", "p_test"]
        rows = [[p.threshold, p.x, p.y, curve.p_test] for p in curve.points]
        if extra is not None:
            cols += ["y_at_p_real", "p_real"]
            for row, q in zip(rows, extra.points):
                row += [q.y, extra.p_real]
        return cols, rows
    # adjprec: x is the deployment prior; its imbalance ratio rides along
    return (["threshold", "x", "y", "ir", "p_test"],
            [[p.threshold, p.x, p.y, p.x / (1.0 - p.x), curve.p_test] for p in curve.points])


def _curve_svg(kind: str, curve: Curve, roi: RegionOfInterest | None, extra: Curve | None) -> str:
    if kind == "roc":
        band = (roi.fpr_min, roi.fpr_max) if roi is not None else None
        if roi is not None and roi.fpr_max < 0.01:
            positive = [x for x in curve.x.tolist() if x > 0]
            lo = min([roi.fpr_max / 100] + positive)
            lo = 10.0 ** math.floor(math.log10(lo))
            x_axis = Axis("false positive rate (log)", lo, 1.0, "log")
            band = (max(roi.fpr_min, lo), roi.fpr_max)
        else:
            x_axis = Axis("false positive rate", 0.0, 1.0)
        return line_chart_svg("ROC", [Series("ROC", curve.x.tolist(), curve.y.tolist())],
                              x_axis, Axis("true positive rate", 0.0, 1.0), band)
    if kind == "det":
        lim = (1e-3, 1 - 1e-3)
        return line_chart_svg("DET", [Series("DET", curve.x.tolist(), curve.y.tolist())],
                              Axis("false positive rate (normal deviate)", *lim, "probit"),
                              Axis("false rejection rate (normal deviate)", *lim, "probit"))
    if kind == "pr":
        series = [Series(f"test prior {curve.p_test:.4g}", curve.x.tolist(), curve.y.tolist())]
        if extra is not None:
            series.append(Series(f"deployment prior {extra.p_real:.4g}", extra.x.tolist(), extra.y.tolist()))
        return line_chart_svg("Precision-recall", series, Axis("recall", 0.0, 1.0),
                              Axis("precision", 0.0, 1.0))
    xs = curve.x.tolist()
    return line_chart_svg(
        f"Adjusted precision at threshold {curve.points[0].threshold:g} (test prior {curve.p_test:.4g})",
        [Series("adjusted precision", xs, curve.y.tolist())],
        Axis("deployment minority prior (log)", xs[0], xs[-1], "log"),
        Axis("precision", 0.0, 1.0),
    )


def _threshold_block(cm: ConfusionMatrix, threshold: float, p_test: float | None,
                     p_real: float | None) -> dict[str, Any]:
    block: dict[str, Any] = {
        "threshold": threshold,
        "tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn,
        "tpr": _maybe(tpr, cm),
        "fpr": _maybe(fpr, cm),
        "accuracy": _priored(_maybe(accuracy, cm), p_test),
        "precision": _priored(_maybe(precision, cm), p_test),
        "f_score": _priored(_maybe(f_score, cm), p_test),
    }
    if p_real is not None and p_test is not None and 0 < p_test < 1:
        priors = PriorSpec(p_test=p_test, p_real=p_real)
        block["adjusted_precision"] = _priored(_maybe(adjusted_precision, cm, priors), p_real)
        block["adjusted_f_score"] = _priored(_maybe(adjusted_f_score, cm, priors), p_real)
    return block


def _fmt(v: float | None) -> str:
    return "undefined" if v is None else f"{v:.6g}"


def compute(config: RunConfig) -> RunResult:
    """Everything a run produces, without touching the filesystem for output."""
    dataset: ScoredDataset | None = None
    if config.input_path is not None:
        dataset = load_scores(config.input_path, config.positive_label)

    p_test, p_test_source = None, None
    if config.p_test_override is not None:
        p_test, p_test_source = config.p_test_override, "override"
    elif dataset is not None:
        p_test, p_test_source = dataset.p_test, "dataset"

    # the deployment regime may be given as a prior or as an imbalance ratio
    p_real, ir = config.p_real, config.ir
    if ir is None and p_real is not None:
        ir = ImbalanceRatio.from_prior(p_real).value
    elif p_real is None and ir is not None:
        p_real = ImbalanceRatio(ir).prior

    roi, roi_source = config.roi, "user" if config.roi is not None else None
    if roi is None and ir is not None:
        roi, roi_source = audit_rules.default_roi(ir), "default_from_ir"

    both_classes = dataset is not None and dataset.pos_count > 0 and dataset.neg_count > 0
    inputs: dict[str, Any] = {
        "input": config.input_path.name if config.input_path is not None else None,
        "positive_label": config.positive_label,
        "pos_count": dataset.pos_count if dataset is not None else None,
        "neg_count": dataset.neg_count if dataset is not None else None,
        "p_test": p_test,
        "p_test_source": p_test_source,
        "p_real": p_real,
        "ir": ir,
        "roi": None if roi is None else {"fpr_min": roi.fpr_min, "fpr_max": roi.fpr_max, "source": roi_source},
        "threshold": config.threshold,
        "sweep": {"p_min": config.sweep.p_min, "p_max": config.sweep.p_max,
                  "points_per_decade": config.sweep.points_per_decade},
    }
    summary: list[str] = []
    metrics: dict[str, Any] = {}
    roc = roc_curve(dataset) if both_classes else None
    if roc is not None:
        metrics["auc"] = auc(roc)
        summary.append(f"auc = {metrics['auc']:.6g}")
        if roi is not None:
            metrics["pauc_raw"] = partial_auc(roc, roi)
            metrics["pauc_normalized"] = partial_auc(roc, roi, normalized=True)
            summary.append(f"pauc on fpr [{roi.fpr_min:g}, {roi.fpr_max:g}] ({roi_source}) = "
                           f"{metrics['pauc_raw']:.6g} raw, {metrics['pauc_normalized']:.6g} normalized")

    cm = None
    if config.threshold is not None and dataset is not None:
        cm = confusion_at_threshold(dataset, config.threshold)
        block = _threshold_block(cm, config.threshold, p_test, p_real)
        metrics["at_threshold"] = block
        summary.append(f"at threshold {config.threshold:g}: tp={cm.tp} fp={cm.fp} tn={cm.tn} fn={cm.fn}")
        summary.append(f"precision = {_fmt(block['precision']['value'])} (valid for prior {_fmt(p_test)})")
        if "adjusted_precision" in block:
            summary.append(f"adjusted precision = {_fmt(block['adjusted_precision']['value'])} "
                           f"(valid for prior {_fmt(p_real)})")

    files: dict[str, str] = {}
    manifest: dict[str, dict[str, str]] = {}
    for kind in CURVE_KINDS:
        if kind not in config.curves:
            continue
        assert dataset is not None
        extra = None
        if kind == "roc":
            curve = roc if roc is not None else roc_curve(dataset)
        elif kind == "det":
            curve = det_curve(dataset)
        elif kind == "pr":
            curve = pr_curve(dataset)
            if p_real is not None:
                extra = pr_curve_at_prior(dataset, p_real)
        else:
            curve = adjusted_precision_curve(cm, config.sweep, p_test=p_test, threshold=config.threshold)
        entry = {}
        if "csv" in config.emit:
            cols, rows = _curve_rows(kind, curve, extra)
            files[f"{kind}.csv"] = render_csv(cols, rows)
            entry["csv"] = f"{kind}.csv"
        if "svg" in config.emit:
            files[f"{kind}.svg"] = _curve_svg(kind, curve, roi, extra)
            entry["svg"] = f"{kind}.svg"
        manifest[kind] = entry

    findings: list[audit_rules.AuditFinding] = []
    if config.audit:
        findings = _run_audit(config, dataset, both_classes, roc, cm, p_test, p_real, ir)
    report = audit_rules.AuditReport.build(findings, inputs)

    doc = {
        "schema_version": SCHEMA_VERSION,
        "inputs": inputs,
        "metrics": metrics,
        "curves": manifest,
        "audit": report.to_dict()["findings"],
    }
    if "json" in config.emit:
        files["report.json"] = render_json(doc)
    for f in report.findings:
        summary.append(f"[{f.severity.value}] {f.rule_id.value}: {f.message}")
    return RunResult(files, doc, summary, report.has_errors)


def _run_audit(config, dataset, both_classes, roc, cm, p_test, p_real, ir):
    findings: list[audit_rules.AuditFinding] = []
    if config.accuracy is not None:
        acc_ir = ir
        if acc_ir is None and both_classes:
            acc_ir = ImbalanceRatio.from_counts(dataset.pos_count, dataset.neg_count).value
        if acc_ir is None:
            raise ValueError("the accuracy audit needs --ir, --p-real or an input file with both classes")
        findings += audit_rules.audit_accuracy(config.accuracy, acc_ir, config.margin)
    if both_classes:
        findings += audit_rules.audit_imbalance_ratio(
            ImbalanceRatio.from_counts(dataset.pos_count, dataset.neg_count))
    if p_real is not None and p_test is not None and 0 < p_test < 1:
        findings += audit_rules.audit_precision_prior(
            PriorSpec(p_test=p_test, p_real=p_real), config.prior_tolerance, cm)
    precision_reported = "pr" in config.curves or cm is not None
    if precision_reported and p_real is None:
        findings.append(audit_rules.AuditFinding(
            audit_rules.RuleId.MISSING_IR_FOR_PRECISION, audit_rules.Severity.WARNING,
            f"precision is reported only for the test prior {p_test!r}; pass --p-real or --ir to "
            "evaluate it at the deployment imbalance ratio",
            {"p_test": p_test} if p_test is not None else {},
        ))
    if roc is not None:
        findings += audit_rules.audit_auc(roc, None, config.roi, ir)
    unique, seen = [], set()
    for f in findings:
        key = (f.rule_id, f.severity, f.message)
        if key not in seen:
            seen.add(key)
            unique.append(f)
    return unique


def run(config: RunConfig, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        result = compute(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILURE
    try:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in result.files.items():
            (config.out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILURE
    for line in result.summary:
        print(line, file=out)
    return EXIT_AUDIT_ERROR if result.has_errors else EXIT_OK


def _split_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _sweep(text: str) -> PriorSweep:
    try:
        lo, hi, ppd = text.split(":")
        return PriorSweep(float(lo), float(hi), int(ppd))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid sweep {text!r}: {exc}") from None


def _roi(text: str) -> RegionOfInterest:
    try:
        return RegionOfInterest.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for audit errors
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="imbaleval",
        description="Evaluate a binary classifier's scores under class imbalance.",
    )
    ap.add_argument("--input", type=Path, help="CSV with header 'score,label'")
    ap.add_argument("--positive-label", default="1", help="label token of the positive (minority) class")
    ap.add_argument("--p-real", type=float, help="minority prior expected in deployment")
    ap.add_argument("--p-test", type=float, help="override the test-set minority prior")
    ap.add_argument("--roi", type=_roi, help="FPR region of interest MIN:MAX")
    ap.add_argument("--curves", type=_split_list, default=(), help="comma list of roc,det,pr,adjprec")
    ap.add_argument("--sweep", type=_sweep, default=None,
                    help="prior sweep MIN:MAX:POINTS_PER_DECADE for adjprec (default 1e-4:0.5:50)")
    ap.add_argument("--threshold", type=float, help="operating threshold for point metrics and adjprec")
    ap.add_argument("--out-dir", type=Path, default=Path("."))
    ap.add_argument("--emit", type=_split_list, default=("csv", "json"), help="comma list of csv,json,svg")
    ap.add_argument("--audit", action="store_true", help="run the evaluation audit rules")
    ap.add_argument("--accuracy", type=float, help="reported accuracy to check against the trivial baseline")
    ap.add_argument("--ir", type=float, help="deployment imbalance ratio P/N (0.01 means 1:100)")
    ap.add_argument("--margin", type=float, default=audit_rules.DEFAULT_MARGIN)
    ap.add_argument("--prior-tolerance", type=float, default=audit_rules.DEFAULT_PRIOR_TOLERANCE)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        input_path=ns.input,
        positive_label=ns.positive_label,
        p_real=ns.p_real,
        p_test_override=ns.p_test,
        roi=ns.roi,
        curves=ns.curves,
        sweep=ns.sweep if ns.sweep is not None else PriorSweep(*DEFAULT_SWEEP),
        threshold=ns.threshold,
        out_dir=ns.out_dir,
        emit=ns.emit,
        audit=ns.audit or ns.accuracy is not None,
        accuracy=ns.accuracy,
        ir=ns.ir,
        margin=ns.margin,
        prior_tolerance=ns.prior_tolerance,
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = config_from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

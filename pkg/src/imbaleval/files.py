"""Score-file ingestion and deterministic CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from .metrics_core import Label, LabeledScore, ScoredDataset

__all__ = ["load_scores", "parse_scores", "format_number", "render_csv", "render_json", "read_curve_csv"]

HEADER = ("score", "label")


def parse_scores(text: str, positive_label_token: str = "1") -> ScoredDataset:
    """Parse ``score,label`` rows. Row numbers in errors count data rows from 1.

    Exactly two label tokens are accepted: ``positive_label_token`` and one
    other token, which becomes the negative class.
    """
    reader = csv.reader(io.StringIO(text.lstrip("\ufeff"), newline=""))
    header = next(reader, None)
    if header is None or tuple(h.strip().lower() for h in header) != HEADER:
        raise ValueError(f"expected header 'score,label', got {','.join(header or [])!r}")
    samples: list[LabeledScore] = []
    negative_token: str | None = None
    for row_no, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise ValueError(f"row {row_no}: expected 2 fields, got {len(row)}")
        raw_score, token = row[0].strip(), row[1].strip()
        try:
            score = float(raw_score)
        except ValueError:
            raise ValueError(f"row {row_no}: score {raw_score!r} is not a number") from None
        if not math.isfinite(score):
            raise ValueError(f"row {row_no}: score {raw_score!r} is not finite")
        if token == positive_label_token:
            label = Label.POSITIVE
        elif negative_token is None or token == negative_token:
            negative_token = token
            label = Label.NEGATIVE
        else:
            raise ValueError(
                f"row {row_no}: unknown label {token!r} (positive is {positive_label_token!r}, "
                f"negative is {negative_token!r}; only binary labels are supported)"
            )
        samples.append(LabeledScore(score, label))
    if not samples:
        raise ValueError("no data rows")
    return ScoredDataset.from_samples(samples)


def load_scores(path: str | Path, positive_label_token: str = "1") -> ScoredDataset:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"input file not found: {path}")
    return parse_scores(path.read_text(encoding="utf-8"), positive_label_token)


def format_number(v: Any) -> str:
    """Shortest round-trip text for a float; blank for missing values."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return repr(float(v))


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def render_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def read_curve_csv(path: str | Path) -> dict[str, list[float | None]]:
    """Read a curve CSV back into columns of floats (``None`` for blanks)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    cols: dict[str, list[float | None]] = {name: [] for name in rows[0]}
    for row in rows[1:]:
        for name, cell in zip(rows[0], row):
            cols[name].append(float(cell) if cell else None)
    return cols

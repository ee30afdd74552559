"""Availability and tolerance-rate statistics for fault-injection sweeps.

Availability is correct results over total results.  Tolerance rate is
incorrect results per injected error bit, so lower is better.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path

CSV_COLUMNS = ("label", "p", "trials", "correct", "incorrect", "inserted_error_bits", "availability", "tolerance_rate")
PLACES = Decimal("0.000001")


def availability(correct: int, total: int) -> Fraction:
    if total < 1:
        raise ValueError("availability needs at least one result")
    if not 0 <= correct <= total:
        raise ValueError(f"correct count {correct} outside [0, {total}]")
    return Fraction(correct, total)


def tolerance_rate(incorrect: int, error_bits: int) -> Fraction | None:
    """``None`` when no error bits were injected; the rate is undefined there."""
    if error_bits < 1:
        return None
    return Fraction(incorrect, error_bits)


def render(value: Fraction | None) -> str:
    """Six decimal places, half-even; empty for an undefined value."""
    if value is None:
        return ""
    return str((Decimal(value.numerator) / Decimal(value.denominator)).quantize(PLACES, rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class SweepPoint:
    label: str
    p: float
    trials: int
    correct: int
    incorrect: int
    inserted_error_bits: int

    def __post_init__(self):
        if self.correct + self.incorrect != self.trials:
            raise ValueError(f"{self.label} @ p={self.p}: correct + incorrect != trials")

    @property
    def availability(self) -> Fraction:
        return availability(self.correct, self.trials)

    @property
    def tolerance_rate(self) -> Fraction | None:
        return tolerance_rate(self.incorrect, self.inserted_error_bits)


@dataclass(frozen=True)
class SweepReport:
    points: list[SweepPoint]

    @property
    def labels(self) -> list[str]:
        seen = []
        for pt in self.points:
            if pt.label not in seen:
                seen.append(pt.label)
        return seen

    def series(self, label: str) -> list[SweepPoint]:
        return [pt for pt in self.points if pt.label == label]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for pt in self.points:
            w.writerow([pt.label, repr(pt.p), pt.trials, pt.correct, pt.incorrect, pt.inserted_error_bits,
                        render(pt.availability), render(pt.tolerance_rate)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepReport":
        rows = csv.DictReader(io.StringIO(text))
        if tuple(rows.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {rows.fieldnames}")
        return cls([
            SweepPoint(r["label"], float(r["p"]), int(r["trials"]), int(r["correct"]),
                       int(r["incorrect"]), int(r["inserted_error_bits"]))
            for r in rows
        ])


def emit_report(report: SweepReport, out_dir, formats=("csv", "svg"), stem: str = "sweep") -> list[Path]:
    """Write the report as CSV and/or SVG charts; returns the written paths."""
    if not report.points:
        raise ValueError("empty report")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc.strerror}") from exc
    written = []
    try:
        if "csv" in formats:
            path = out_dir / f"{stem}.csv"
            path.write_text(report.to_csv(), encoding="utf-8")
            written.append(path)
        if "svg" in formats:
            from .plotting import plot_sweep

            for quantity in ("availability", "tolerance_rate"):
                path = out_dir / f"{stem}_{quantity}.svg"
                plot_sweep(report, quantity, path)
                written.append(path)
    except OSError as exc:
        raise OSError(f"cannot write report to {exc.filename or out_dir}: {exc.strerror}") from exc
    return written

"""Reference reciprocal-thickness datasets and comparison against model output.

CSV layout::

    # optional comment lines, e.g. "# gas: argon" and "# source: experiment"
    Ma,recip_thickness
    3.0,0.31
    ...
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

HEADER = ("Ma", "recip_thickness")


class ReferenceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class ReferenceDataset:
    gas: str
    source: str
    points: tuple  # ((Ma, recip_thickness), ...), strictly increasing Ma

    def __post_init__(self):
        pts = tuple((float(m), float(v)) for m, v in self.points)
        if not pts:
            raise ReferenceFormatError("dataset has no points")
        for m, v in pts:
            if not (math.isfinite(m) and m >= 1.0):
                raise ReferenceFormatError(f"Mach number {m} is below 1")
            if not (math.isfinite(v) and v > 0.0):
                raise ReferenceFormatError(f"reciprocal thickness {v} is not positive")
        ma = [m for m, _ in pts]
        if any(b <= a for a, b in zip(ma, ma[1:])):
            raise ReferenceFormatError("Mach numbers must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def mach(self) -> np.ndarray:
        return np.array([m for m, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])

    def interpolate(self, Ma: float) -> float:
        ma = self.mach
        if not ma[0] <= Ma <= ma[-1]:
            raise ValueError(f"Ma={Ma} outside reference range [{ma[0]}, {ma[-1]}]")
        return float(np.interp(Ma, ma, self.values))


def parse_reference_csv(text: str, gas: str | None = None, source: str | None = None) -> ReferenceDataset:
    meta = {}
    points = []
    header_seen = False
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                meta[key.strip().lower()] = value.strip()
            continue
        cells = next(csv.reader([line]))
        if not header_seen:
            if tuple(c.strip() for c in cells) != HEADER:
                raise ReferenceFormatError(f"expected header {','.join(HEADER)!r}", lineno)
            header_seen = True
            continue
        if len(cells) != 2:
            raise ReferenceFormatError(f"expected 2 fields, got {len(cells)}", lineno)
        try:
            m, v = (float(c) for c in cells)
        except ValueError:
            raise ReferenceFormatError(f"non-numeric field in {line!r}", lineno) from None
        if not m >= 1.0:
            raise ReferenceFormatError(f"Mach number {m} is below 1", lineno)
        if not v > 0.0:
            raise ReferenceFormatError(f"reciprocal thickness {v} is not positive", lineno)
        if points and m <= points[-1][0]:
            raise ReferenceFormatError("Mach numbers must be strictly increasing", lineno)
        points.append((m, v))
    if not header_seen:
        raise ReferenceFormatError("missing header line")
    if not points:
        raise ReferenceFormatError("no data rows")
    return ReferenceDataset(
        gas or meta.get("gas", "unknown"),
        source or meta.get("source", "unknown"),
        tuple(points),
    )


def load_reference_csv(path, gas: str | None = None, source: str | None = None) -> ReferenceDataset:
    return parse_reference_csv(Path(path).read_text(encoding="utf-8"), gas, source)


def format_reference_csv(ds: ReferenceDataset) -> str:
    lines = [f"# gas: {ds.gas}", f"# source: {ds.source}", ",".join(HEADER)]
    lines += [f"{m!r},{v!r}" for m, v in ds.points]
    return "\n".join(lines) + "\n"


def save_reference_csv(ds: ReferenceDataset, path) -> None:
    Path(path).write_text(format_reference_csv(ds), encoding="utf-8")


@dataclass
class ComparisonRow:
    Ma: float
    model: float
    reference: float | None
    deviation: float | None  # (model - reference) / reference
    in_range: bool


@dataclass
class ComparisonReport:
    rows: list = field(default_factory=list)

    @property
    def deviations(self) -> np.ndarray:
        return np.array([r.deviation for r in self.rows if r.in_range])

    @property
    def max_deviation(self) -> float:
        """Largest |relative deviation| over the compared points."""
        return float(np.max(np.abs(self.deviations)))

    @property
    def rms_deviation(self) -> float:
        d = self.deviations
        return float(np.sqrt(np.mean(d * d)))

    def render(self) -> str:
        out = ["Ma,model,reference,deviation,in_range"]
        for r in self.rows:
            ref = "" if r.reference is None else repr(r.reference)
            dev = "" if r.deviation is None else repr(r.deviation)
            out.append(f"{r.Ma!r},{r.model!r},{ref},{dev},{str(r.in_range).lower()}")
        out.append(f"# max_abs_deviation={self.max_deviation!r}")
        out.append(f"# rms_deviation={self.rms_deviation!r}")
        return "\n".join(out) + "\n"


def compare_thickness(model_points, ref: ReferenceDataset) -> ComparisonReport:
    """Relative deviation of each model point from the linearly interpolated
    reference.  Points outside the reference Mach range are listed but not
    compared."""
    lo, hi = ref.points[0][0], ref.points[-1][0]
    rows = []
    for Ma, value in sorted((float(m), float(v)) for m, v in model_points):
        if lo <= Ma <= hi:
            r = ref.interpolate(Ma)
            rows.append(ComparisonRow(Ma, value, r, (value - r) / r, True))
        else:
            rows.append(ComparisonRow(Ma, value, None, None, False))
    if not any(r.in_range for r in rows):
        raise ValueError(f"no model point lies inside the reference range [{lo}, {hi}]")
    return ComparisonReport(rows)

"""Cohort manifest and raw accelerometer CSV loading.

Manifest CSV columns:
    subject_id, group, paralysed_side, ini, week, cahai,
    path_paralysed, path_nonparalysed
Raw recording CSV columns:
    t_seconds, ax_g, ay_g, az_g
Both UTF-8 with a mandatory header row and '.' decimal separator.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (InvariantViolation, MalformedRow, MissingFile,
                     NonMonotonicTime, ParseError)

MANIFEST_COLUMNS = ["subject_id", "group", "paralysed_side", "ini", "week",
                    "cahai", "path_paralysed", "path_nonparalysed"]
RECORDING_COLUMNS = ["t_seconds", "ax_g", "ay_g", "az_g"]

SCORE_MIN = 7.0
SCORE_MAX = 63.0
WEEK_MIN = 2
WEEK_MAX = 8


class Group(str, Enum):
    ACUTE = "Acute"
    CHRONIC = "Chronic"


class Side(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class SubjectMeta:
    subject_id: str
    group: Group
    paralysed_side: Side
    ini: float  # week-1 clinical score, history covariate

    def __post_init__(self):
        if not (SCORE_MIN <= self.ini <= SCORE_MAX):
            raise InvariantViolation("ini", self.subject_id, self.ini)


@dataclass(frozen=True)
class TriaxialRecording:
    sample_rate_hz: float
    t: np.ndarray       # seconds, strictly increasing
    xyz: np.ndarray     # shape (n, 3), acceleration in g units

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise InvariantViolation("sample_rate_hz", value=self.sample_rate_hz)
        if self.t.ndim != 1 or self.xyz.shape != (len(self.t), 3):
            raise InvariantViolation("recording shape")
        diffs = np.diff(self.t)
        bad = np.nonzero(diffs <= 0)[0]
        if bad.size:
            raise NonMonotonicTime(int(bad[0]) + 1)

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class VisitRecord:
    subject_id: str
    week: int
    cahai: float | None  # absent in pure prediction mode
    recordings: dict = field(default_factory=dict)  # "paralysed"/"nonparalysed"

    def __post_init__(self):
        if not (WEEK_MIN <= self.week <= WEEK_MAX):
            raise InvariantViolation("week", self.subject_id, self.week)
        if self.cahai is not None and not (SCORE_MIN <= self.cahai <= SCORE_MAX):
            raise InvariantViolation("cahai", self.subject_id, self.cahai)


def infer_sample_rate(t: np.ndarray) -> float:
    """Median reciprocal inter-sample gap; robust to free-living gaps."""
    gaps = np.diff(t)
    bad = np.nonzero(gaps <= 0)[0]
    if bad.size:
        raise NonMonotonicTime(int(bad[0]) + 1)
    return float(1.0 / np.median(gaps))


def read_triaxial_csv(path) -> TriaxialRecording:
    if not os.path.exists(path):
        raise MissingFile(str(path))
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file")
        if [h.strip() for h in header] != RECORDING_COLUMNS:
            raise ParseError(f"{path}: bad header {header!r}")
        rows = []
        for i, row in enumerate(reader):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise ParseError(f"{path}: row {i}: {exc}")
    if not rows:
        raise ParseError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=float)
    t, xyz = arr[:, 0], arr[:, 1:4]
    rate = infer_sample_rate(t) if len(t) > 1 else 1.0
    return TriaxialRecording(sample_rate_hz=rate, t=t, xyz=xyz)


def _parse_manifest_row(i, row, base_dir):
    try:
        subject_id = row["subject_id"].strip()
        group = Group(row["group"].strip())
        side = Side(row["paralysed_side"].strip())
        ini = float(row["ini"])
        week = int(row["week"])
        cahai_raw = row["cahai"].strip()
        cahai = float(cahai_raw) if cahai_raw else None
        p_par = row["path_paralysed"].strip()
        p_np = row["path_nonparalysed"].strip()
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedRow(i, str(exc))
    if not subject_id:
        raise MalformedRow(i, "empty subject_id")
    paths = {side_key: os.path.join(base_dir, p) if not os.path.isabs(p) else p
             for side_key, p in (("paralysed", p_par), ("nonparalysed", p_np))}
    return subject_id, group, side, ini, week, cahai, paths


def load_cohort(manifest_path, load_recordings=True):
    """Read a cohort manifest into (list of SubjectMeta, list of VisitRecord).

    With load_recordings=False only the referenced file paths are kept in
    VisitRecord.recordings, which is enough for bookkeeping round-trips.
    """
    if not os.path.exists(manifest_path):
        raise MissingFile(str(manifest_path))
    base_dir = os.path.dirname(os.path.abspath(manifest_path))
    metas: dict[str, SubjectMeta] = {}
    visits: list[VisitRecord] = []
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != MANIFEST_COLUMNS:
            raise ParseError(f"{manifest_path}: bad header {reader.fieldnames!r}")
        for i, row in enumerate(reader):
            subject_id, group, side, ini, week, cahai, paths = \
                _parse_manifest_row(i, row, base_dir)
            meta = SubjectMeta(subject_id, group, side, ini)
            if subject_id in metas:
                prev = metas[subject_id]
                if prev != meta:
                    raise InvariantViolation("subject metadata consistency",
                                             subject_id)
            else:
                metas[subject_id] = meta
            if load_recordings:
                recordings = {k: read_triaxial_csv(p) for k, p in paths.items()}
            else:
                for p in paths.values():
                    if not os.path.exists(p):
                        raise MissingFile(p)
                recordings = paths
            visits.append(VisitRecord(subject_id, week, cahai, recordings))
    return list(metas.values()), visits


def write_manifest(path, rows):
    """Write manifest rows (dicts with MANIFEST_COLUMNS keys) to CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=MANIFEST_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

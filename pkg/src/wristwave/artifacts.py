"""Versioned on-disk artifacts: feature tables, selections, reports.

Every JSON artifact carries the producing config hash and tool version;
readers that combine artifacts must refuse mismatched hashes.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from . import __version__
from .errors import ParseError
from .evaluate import FeatureTable
from .features import FEATURE_NAMES

FEATURE_CSV_META = ["subject_id", "week", "group"]


def stamp(config_hash: str) -> dict:
    return {"config_hash": config_hash, "tool_version": __version__}


def write_json(path, payload: dict, config_hash: str):
    doc = dict(payload)
    doc.update(stamp(config_hash))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_feature_csv(path, vectors, groups, config_hash: str):
    """One row per (subject, week): metadata, 41 features, cahai.

    groups: subject_id -> group label.  The config hash rides in a
    comment-style first line so the table stays a plain CSV.
    """
    header = FEATURE_CSV_META + FEATURE_NAMES + ["cahai"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"#config_hash={config_hash},tool_version={__version__}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for fv in vectors:
            vals = fv.values()
            row = [fv.subject_id, fv.week, groups[fv.subject_id]]
            row += [repr(float(v)) for v in vals]
            row += ["" if fv.cahai is None else repr(float(fv.cahai))]
            writer.writerow(row)


def read_feature_csv(path):
    """Returns (dict group -> FeatureTable, config_hash)."""
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#config_hash="):
            raise ParseError(f"{path}: missing artifact stamp")
        config_hash = first[len("#config_hash="):].split(",", 1)[0].strip()
        reader = csv.reader(fh)
        header = next(reader)
        expected = FEATURE_CSV_META + FEATURE_NAMES + ["cahai"]
        if header != expected:
            raise ParseError(f"{path}: unexpected feature columns")
        rows = list(reader)
    by_group = {}
    for row in rows:
        by_group.setdefault(row[2], []).append(row)
    tables = {}
    for group, grows in by_group.items():
        X = np.array([[float(v) for v in r[3:3 + len(FEATURE_NAMES)]]
                      for r in grows])
        y = np.array([float(r[-1]) if r[-1] else np.nan for r in grows])
        tables[group] = FeatureTable(
            X=X, y=y,
            subjects=tuple(r[0] for r in grows),
            weeks=tuple(int(r[1]) for r in grows),
            names=tuple(FEATURE_NAMES), group=group)
    return tables, config_hash


def check_same_hash(hashes, what="artifacts"):
    uniq = set(hashes)
    if len(uniq) > 1:
        raise ParseError(f"refusing to mix {what} from different config "
                         f"hashes: {sorted(uniq)}")


def remove_partial(paths):
    for p in paths:
        if os.path.exists(p):
            os.remove(p)

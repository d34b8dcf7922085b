"""Vector-magnitude preprocessing of raw triaxial recordings.

The movement signal fed to the wavelet stage is the gravity-removed
vector magnitude |sqrt(ax^2+ay^2+az^2) - 1|, averaged over each whole
second of the recording.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyRecording, NonFiniteInput
from .ingest import TriaxialRecording


@dataclass(frozen=True)
class VmSeries:
    values: np.ndarray  # one non-negative value per second
    start_t: float

    def __post_init__(self):
        if len(self.values) < 1:
            raise EmptyRecording("VmSeries must contain at least one value")
        if np.any(self.values < 0):
            raise NonFiniteInput("negative VM value")

    def __len__(self):
        return len(self.values)


def vector_magnitude(ax, ay, az):
    """Euclidean norm of one acceleration sample (g units)."""
    if not np.all(np.isfinite([ax, ay, az])):
        raise NonFiniteInput((ax, ay, az))
    return float(np.sqrt(ax * ax + ay * ay + az * az))


def gravity_removed_vm(ax, ay, az):
    """|magnitude - 1|: the at-rest wrist maps to 0."""
    return abs(vector_magnitude(ax, ay, az) - 1.0)


def secondwise_vm(rec: TriaxialRecording) -> VmSeries:
    """Mean gravity-removed VM per whole-second bucket.

    Buckets align to integer seconds from floor(t[0]); seconds with no
    samples (device gaps) are filled with 0, the no-movement value.
    """
    if len(rec) == 0:
        raise EmptyRecording("empty recording")
    if not np.all(np.isfinite(rec.xyz)):
        raise NonFiniteInput("non-finite acceleration sample")
    mags = np.abs(np.linalg.norm(rec.xyz, axis=1) - 1.0)
    start = np.floor(rec.t[0])
    bucket = np.floor(rec.t - start).astype(int)
    n_buckets = int(bucket[-1]) + 1
    sums = np.bincount(bucket, weights=mags, minlength=n_buckets)
    counts = np.bincount(bucket, minlength=n_buckets)
    values = np.divide(sums, counts, out=np.zeros_like(sums),
                       where=counts > 0)
    return VmSeries(values=values, start_t=float(start))

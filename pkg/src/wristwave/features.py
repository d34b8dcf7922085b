"""Per-scale wavelet statistics and bilateral asymmetry features.

Each visit yields, per wrist, the mean absolute coefficient (sad) and
mean squared coefficient (ssd) at 10 scales: the four level-3 packets
of the top band ("1.1".."1.4") plus detail scales 2..7.  The two
bilateral features compare paralysed vs non-paralysed sad:

    pnp1 = sad_p / sad_np
    pnp2 = (sad_np - sad_p) / (sad_np + sad_p)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WristwaveError
from .ingest import SubjectMeta, VisitRecord
from .vm import secondwise_vm
from .wavelet import (FilterBank, PACKET_LABELS, WaveletCoefficients, dwt,
                      trim_to_block)

SCALES = ("1.1", "1.2", "1.3", "1.4", "2", "3", "4", "5", "6", "7")

# Band edges per scale in "table units" (2 x cycles/sample; the top band
# spans 0.5-1.0 in these units for the 1 Hz second-wise series).
BAND_EDGES = {
    "1.1": (0.5, 0.625), "1.2": (0.625, 0.75),
    "1.3": (0.75, 0.875), "1.4": (0.875, 1.0),
    "2": (0.25, 0.5), "3": (0.125, 0.25), "4": (0.0625, 0.125),
    "5": (0.03125, 0.0625), "6": (0.015625, 0.03125),
    "7": (0.0078125, 0.015625),
}

PNP1_CAP = 1e6  # stand-in for +inf when the non-paralysed band is silent

FAMILIES = ("sad_p", "sad_np", "pnp1", "pnp2")


def _scale_vector(coeffs: WaveletCoefficients, k: str) -> np.ndarray:
    if k in PACKET_LABELS:
        return coeffs.packets[k]
    return coeffs.detail[int(k)]


def sad(coeffs: WaveletCoefficients, k: str) -> float:
    """Mean absolute coefficient at scale k (L1 norm over vector length)."""
    return float(np.mean(np.abs(_scale_vector(coeffs, k))))


def ssd(coeffs: WaveletCoefficients, k: str) -> float:
    """Mean squared coefficient at scale k."""
    return float(np.mean(_scale_vector(coeffs, k) ** 2))


def pnp(sad_p: float, sad_np: float) -> tuple[float, float]:
    """Bilateral ratio pair (pnp1, pnp2) from per-side sad values.

    Degenerate cases: both zero -> (1, 0), the symmetric-use point;
    silent non-paralysed side -> (capped ratio, -1).
    """
    if sad_p < 0 or sad_np < 0:
        raise WristwaveError("sad values must be non-negative")
    if sad_np == 0.0:
        if sad_p == 0.0:
            return 1.0, 0.0
        return PNP1_CAP, -1.0
    pnp1 = min(sad_p / sad_np, PNP1_CAP)
    pnp2 = (sad_np - sad_p) / (sad_np + sad_p)
    return pnp1, pnp2


@dataclass(frozen=True)
class SideFeatures:
    side: str  # "paralysed" | "nonparalysed"
    sad: dict  # scale label -> value
    ssd: dict


@dataclass(frozen=True)
class FeatureVector:
    subject_id: str
    week: int
    sad_p: dict
    sad_np: dict
    pnp1: dict
    pnp2: dict
    ini: float
    cahai: float | None = None

    def values(self) -> np.ndarray:
        """The 41-entry model vector in fixed column order."""
        parts = [self.sad_p, self.sad_np, self.pnp1, self.pnp2]
        return np.array([d[k] for d in parts for k in SCALES] + [self.ini])


def feature_names() -> list[str]:
    names = []
    for fam in FAMILIES:
        names += [f"{fam}_{k.replace('.', '_')}" for k in SCALES]
    return names + ["ini"]


FEATURE_NAMES = feature_names()


def side_features(coeffs: WaveletCoefficients, side: str) -> SideFeatures:
    return SideFeatures(side=side,
                        sad={k: sad(coeffs, k) for k in SCALES},
                        ssd={k: ssd(coeffs, k) for k in SCALES})


def extract_coeffs(recording, bank: FilterBank) -> WaveletCoefficients:
    series = secondwise_vm(recording)
    return dwt(trim_to_block(series.values), bank)


def build_feature_vector(visit: VisitRecord, meta: SubjectMeta,
                         bank: FilterBank) -> FeatureVector:
    """Full per-visit chain: raw recordings -> VM -> wavelet -> sad -> pnp."""
    try:
        cp = extract_coeffs(visit.recordings["paralysed"], bank)
        cn = extract_coeffs(visit.recordings["nonparalysed"], bank)
    except WristwaveError as exc:
        raise type(exc)(f"{visit.subject_id} week {visit.week}: {exc}") from exc
    fp = side_features(cp, "paralysed")
    fn = side_features(cn, "nonparalysed")
    pnp1, pnp2 = {}, {}
    for k in SCALES:
        pnp1[k], pnp2[k] = pnp(fp.sad[k], fn.sad[k])
    return FeatureVector(subject_id=visit.subject_id, week=visit.week,
                         sad_p=fp.sad, sad_np=fn.sad, pnp1=pnp1, pnp2=pnp2,
                         ini=meta.ini, cahai=visit.cahai)


def feature_matrix(vectors: list[FeatureVector]):
    """Stack feature vectors into (X, y, ids); y entries may be NaN."""
    X = np.array([fv.values() for fv in vectors])
    y = np.array([np.nan if fv.cahai is None else fv.cahai for fv in vectors])
    ids = [(fv.subject_id, fv.week) for fv in vectors]
    return X, y, ids

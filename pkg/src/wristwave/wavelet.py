"""Orthonormal DWT pyramid and 3-stage wavelet packet split of the top band.

Periodic (circular) boundary handling throughout, so the transform is an
exact orthonormal matrix operation on signals whose length is a multiple
of 2^levels.  The analysis step at each level is

    approx[t] = sum_l low[l]  * x[(2t + 1 - l) mod n]
    detail[t] = sum_l high[l] * x[(2t + 1 - l) mod n]

with the quadrature-mirror pair high[l] = (-1)^l * low[L-1-l].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadLength, ShapeMismatch

LEVELS = 7                      # fixed decomposition depth
BLOCK = 2 ** LEVELS             # required length divisor (128)
PACKET_LABELS = ("1.1", "1.2", "1.3", "1.4")

_SQRT3 = math.sqrt(3.0)
_FAMILIES = {
    "haar": np.array([1.0, 1.0]) / math.sqrt(2.0),
    "db4": np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3])
           / (4.0 * math.sqrt(2.0)),
}


@dataclass(frozen=True)
class FilterBank:
    family: str
    low_pass: np.ndarray
    high_pass: np.ndarray

    @classmethod
    def create(cls, family: str) -> "FilterBank":
        try:
            low = _FAMILIES[family]
        except KeyError:
            raise ValueError(f"unknown wavelet family {family!r}; "
                             f"choose from {sorted(_FAMILIES)}")
        high = quadrature_mirror(low)
        return cls(family=family, low_pass=low, high_pass=high)


def quadrature_mirror(low: np.ndarray) -> np.ndarray:
    L = len(low)
    return np.array([(-1) ** k * low[L - 1 - k] for k in range(L)])


@dataclass(frozen=True)
class WaveletCoefficients:
    n: int
    detail: dict          # level j in 1..LEVELS -> vector of length n/2^j
    approx_v7: np.ndarray  # length n/2^LEVELS
    packets: dict         # "1.1".."1.4" -> vector of length n/8

    def __post_init__(self):
        for j, w in self.detail.items():
            if len(w) != self.n // 2 ** j:
                raise ShapeMismatch(f"detail[{j}] has length {len(w)}")
        if len(self.approx_v7) != self.n // 2 ** LEVELS:
            raise ShapeMismatch("approx_v7 length")


def _check_length(x, divisor=BLOCK):
    n = len(x)
    if n == 0 or n % divisor != 0:
        raise BadLength(n, divisor)
    return n


def _analysis_step(x, filt):
    n = len(x)
    t = np.arange(n // 2)
    out = np.zeros(n // 2)
    for l, h in enumerate(filt):
        out += h * x[(2 * t + 1 - l) % n]
    return out


def _synthesis_step(approx, detail, bank):
    n = 2 * len(approx)
    out = np.zeros(n)
    t = np.arange(len(approx))
    for l in range(len(bank.low_pass)):
        idx = (2 * t + 1 - l) % n
        np.add.at(out, idx, bank.low_pass[l] * approx
                  + bank.high_pass[l] * detail)
    return out


def dwt(x, bank: FilterBank, levels: int = LEVELS) -> WaveletCoefficients:
    """Pyramid decomposition into per-level details plus final approximation."""
    x = np.asarray(x, dtype=float)
    n = _check_length(x, 2 ** levels)
    detail = {}
    approx = x
    for j in range(1, levels + 1):
        detail[j] = _analysis_step(approx, bank.high_pass)
        approx = _analysis_step(approx, bank.low_pass)
    packets = dwpt_scale1_split(x, bank)
    return WaveletCoefficients(n=n, detail=detail, approx_v7=approx,
                               packets=packets)


def reconstruct(coeffs: WaveletCoefficients, bank: FilterBank) -> np.ndarray:
    """Inverse pyramid; exact inverse of dwt up to rounding."""
    approx = coeffs.approx_v7
    for j in sorted(coeffs.detail, reverse=True):
        if len(coeffs.detail[j]) != len(approx):
            raise ShapeMismatch(f"detail[{j}] incompatible with approximation")
        approx = _synthesis_step(approx, coeffs.detail[j], bank)
    return approx


# The decimated high-pass branch folds the spectrum, so natural (Paley)
# packet order is not frequency order.  With this filter indexing the four
# packets tiling the top half-band in ascending frequency (bands 4..7 of 8)
# sit at natural indices 6,7,5,4 (verified by sinusoid sweep).
_TOP_BAND_NATURAL = (6, 7, 5, 4)


def dwpt_scale1_split(x, bank: FilterBank) -> dict:
    """Level-3 wavelet-packet split of the scale-1 band.

    Returns the four packets tiling the scale-1 frequency band, labeled
    "1.1".."1.4" in ascending frequency, each of length n/8.
    """
    x = np.asarray(x, dtype=float)
    _check_length(x, 8)
    nodes = [x]
    for _ in range(3):
        nxt = []
        for node in nodes:
            nxt.append(_analysis_step(node, bank.low_pass))
            nxt.append(_analysis_step(node, bank.high_pass))
        nodes = nxt
    return {label: nodes[nat]
            for label, nat in zip(PACKET_LABELS, _TOP_BAND_NATURAL)}


def sample_variance_decomposition(coeffs: WaveletCoefficients):
    """Per-scale variance shares ||W_j||^2 / n plus the approximation term.

    The shares plus the approximation share sum to mean(x^2) by energy
    preservation.
    """
    shares = {j: float(np.sum(w ** 2)) / coeffs.n
              for j, w in coeffs.detail.items()}
    approx_share = float(np.sum(coeffs.approx_v7 ** 2)) / coeffs.n
    return shares, approx_share


def analysis_matrix(bank: FilterBank, n: int, levels: int = LEVELS) -> np.ndarray:
    """Assemble the full n-by-n analysis operator (tests / diagnostics)."""
    _check_length(np.empty(n), 2 ** levels)
    rows = []
    eye = np.eye(n)
    for i in range(n):
        c = dwt(eye[i], bank, levels=levels)
        col = np.concatenate([c.detail[j] for j in sorted(c.detail)]
                             + [c.approx_v7])
        rows.append(col)
    return np.array(rows).T


def trim_to_block(values: np.ndarray, block: int = BLOCK) -> np.ndarray:
    """Truncate to the largest multiple of `block`; error if shorter."""
    n = (len(values) // block) * block
    if n == 0:
        raise BadLength(len(values), block)
    return values[:n]

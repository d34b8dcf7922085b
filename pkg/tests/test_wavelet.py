import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import slow_dwt, slow_packet_tree
from wristwave.errors import BadLength, ShapeMismatch
from wristwave.features import BAND_EDGES, SCALES, sad
from wristwave.wavelet import (BLOCK, FilterBank, LEVELS, PACKET_LABELS,
                               WaveletCoefficients, analysis_matrix, dwt,
                               dwpt_scale1_split, quadrature_mirror,
                               reconstruct, sample_variance_decomposition,
                               trim_to_block)


def test_filter_bank_invariants(bank):
    low = bank.low_pass
    L = len(low)
    assert np.sum(low) == pytest.approx(np.sqrt(2.0), abs=1e-12)
    # orthonormality of even shifts
    for m in range(L // 2):
        dot = sum(low[k] * low[k + 2 * m] for k in range(L - 2 * m))
        assert dot == pytest.approx(1.0 if m == 0 else 0.0, abs=1e-12)
    # quadrature-mirror relation
    for k in range(L):
        assert bank.high_pass[k] == pytest.approx(
            (-1) ** k * low[L - 1 - k], abs=1e-15)


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        FilterBank.create("sym8")


def test_quadrature_mirror_haar():
    low = np.array([1.0, 1.0]) / np.sqrt(2.0)
    high = quadrature_mirror(low)
    assert high == pytest.approx(np.array([1.0, -1.0]) / np.sqrt(2.0))


def test_orthonormality_n128(bank):
    W = analysis_matrix(bank, 128)
    assert np.max(np.abs(W.T @ W - np.eye(128))) < 1e-10


def test_roundtrip_random(bank, rng):
    for _ in range(10):
        x = rng.standard_normal(256)
        coeffs = dwt(x, bank)
        xr = reconstruct(coeffs, bank)
        assert np.linalg.norm(xr - x) / np.linalg.norm(x) < 1e-9


def test_matches_slow_oracle(bank, rng):
    x = rng.standard_normal(128)
    coeffs = dwt(x, bank)
    detail, approx = slow_dwt(x, bank.low_pass, bank.high_pass, LEVELS)
    for j in range(1, LEVELS + 1):
        assert coeffs.detail[j] == pytest.approx(np.array(detail[j]),
                                                 abs=1e-12)
    assert coeffs.approx_v7 == pytest.approx(np.array(approx), abs=1e-12)


def test_constant_signal(bank):
    x = np.full(128, 3.0)
    coeffs = dwt(x, bank)
    for j in range(1, LEVELS + 1):
        assert np.max(np.abs(coeffs.detail[j])) < 1e-10
    assert np.sum(coeffs.approx_v7 ** 2) == pytest.approx(np.sum(x ** 2))


def test_zero_signal(bank):
    coeffs = dwt(np.zeros(128), bank)
    assert all(np.all(w == 0) for w in coeffs.detail.values())
    assert np.all(coeffs.approx_v7 == 0)
    assert all(np.all(p == 0) for p in coeffs.packets.values())


def test_haar_alternating_by_hand(haar):
    # x = [1,-1,1,-1,...]: detail1[t] = (x[2t+1] - x[2t])/sqrt(2) = -sqrt(2)
    x = np.tile([1.0, -1.0], 64)
    coeffs = dwt(x, haar)
    assert coeffs.detail[1] == pytest.approx(
        np.full(64, -np.sqrt(2.0)), abs=1e-12)
    for j in range(2, LEVELS + 1):
        assert np.max(np.abs(coeffs.detail[j])) < 1e-12
    assert np.max(np.abs(coeffs.approx_v7)) < 1e-12


def test_energy_identity(bank, rng):
    for _ in range(20):
        x = rng.standard_normal(1024)
        coeffs = dwt(x, bank)
        total = (sum(np.sum(w ** 2) for w in coeffs.detail.values())
                 + np.sum(coeffs.approx_v7 ** 2))
        assert total == pytest.approx(np.sum(x ** 2), rel=1e-8)


def test_packet_identity(bank, rng):
    for _ in range(20):
        x = rng.standard_normal(1024)
        coeffs = dwt(x, bank)
        packet_energy = sum(np.sum(p ** 2)
                            for p in coeffs.packets.values())
        assert packet_energy == pytest.approx(
            np.sum(coeffs.detail[1] ** 2), rel=1e-8)


def test_packets_are_level3_tree_nodes(bank, rng):
    x = rng.standard_normal(128)
    packets = dwpt_scale1_split(x, bank)
    nodes = slow_packet_tree(x, bank.low_pass, bank.high_pass)
    produced = {tuple(np.round(p, 10)) for p in packets.values()}
    available = {tuple(np.round(np.array(n), 10)) for n in nodes}
    assert produced <= available
    assert all(len(p) == 16 for p in packets.values())
    assert set(packets) == set(PACKET_LABELS)


def test_linearity(bank, rng):
    x, y = rng.standard_normal(128), rng.standard_normal(128)
    a, b = 2.5, -1.25
    cz = dwt(a * x + b * y, bank)
    cx, cy = dwt(x, bank), dwt(y, bank)
    for j in range(1, LEVELS + 1):
        assert cz.detail[j] == pytest.approx(
            a * cx.detail[j] + b * cy.detail[j], abs=1e-10)
    assert cz.approx_v7 == pytest.approx(
        a * cx.approx_v7 + b * cy.approx_v7, abs=1e-10)


def test_bad_length_rejected(bank):
    with pytest.raises(BadLength):
        dwt(np.zeros(100), bank)
    with pytest.raises(BadLength):
        dwt(np.zeros(0), bank)


def test_trim_to_block():
    assert len(trim_to_block(np.zeros(300))) == 256
    assert len(trim_to_block(np.zeros(128))) == 128
    with pytest.raises(BadLength):
        trim_to_block(np.zeros(100))


def test_reconstruct_shape_mismatch(haar):
    coeffs = dwt(np.zeros(128), haar)
    bad = WaveletCoefficients(n=coeffs.n,
                              detail={**coeffs.detail},
                              approx_v7=coeffs.approx_v7,
                              packets=coeffs.packets)
    bad.detail[1] = np.zeros(32)  # wrong length for level 1
    with pytest.raises(ShapeMismatch):
        reconstruct(bad, haar)


def test_variance_decomposition_sums(bank, rng):
    x = rng.standard_normal(1024)
    coeffs = dwt(x, bank)
    shares, approx_share = sample_variance_decomposition(coeffs)
    assert sum(shares.values()) + approx_share == pytest.approx(
        np.mean(x ** 2), rel=1e-8)


def test_variance_decomposition_constant(bank):
    shares, _ = sample_variance_decomposition(dwt(np.full(128, 2.0), bank))
    assert all(abs(s) < 1e-12 for s in shares.values())


def test_white_noise_variance_shares(bank):
    # for white noise the detail energy at scale j holds ~2^-j of the
    # detail budget (n/2^j coefficients of unit variance each)
    rng = np.random.default_rng(123)
    n = 2 ** 14
    shares = np.zeros(LEVELS)
    for _ in range(50):
        coeffs = dwt(rng.standard_normal(n), bank)
        energies = np.array([np.sum(coeffs.detail[j] ** 2)
                             for j in range(1, LEVELS + 1)])
        shares += energies / energies.sum()
    shares /= 50
    expected = np.array([2.0 ** -j for j in range(1, LEVELS + 1)])
    expected /= expected.sum()
    assert np.all(shares / expected > 0.8)
    assert np.all(shares / expected < 1.2)


@pytest.mark.parametrize("scale", SCALES)
def test_band_selectivity(bank, scale):
    # sinusoid at each band midpoint: that scale wins on mean |coeff|.
    # Band edges are tabulated at twice the digital frequency.
    lo, hi = BAND_EDGES[scale]
    f = 0.5 * (lo + hi) / 2.0
    t = np.arange(1024)
    x = np.sin(2 * np.pi * f * t)
    coeffs = dwt(x, bank)
    sads = {k: sad(coeffs, k) for k in SCALES}
    assert max(sads, key=sads.get) == scale


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_roundtrip_property(haar, seed):
    x = np.random.default_rng(seed).standard_normal(128)
    assert reconstruct(dwt(x, haar), haar) == pytest.approx(x, abs=1e-9)

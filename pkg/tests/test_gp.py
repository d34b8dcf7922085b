import math

import numpy as np
import pytest

from oracles import gp_loglik_2x2, gp_posterior_2x2
from wristwave.errors import DimensionMismatch
from wristwave.modeling.gp import (KernelParams, block_loglik, fit_kernel,
                                   gram, jittered_cho_factor, posterior,
                                   se_kernel)

THETA = KernelParams(v0=1.5, w=np.array([2.0]), sigma2=0.3)


def test_kernel_at_identical_inputs():
    assert se_kernel([0.7], [0.7], THETA) == pytest.approx(THETA.v0)


def test_kernel_zero_weights():
    params = KernelParams(v0=2.0, w=np.array([0.0, 0.0]), sigma2=0.1)
    assert se_kernel([1.0, -3.0], [5.0, 2.0], params) == pytest.approx(2.0)


def test_kernel_reference_value():
    # v0=1, w=2, phi=0, phi'=1 -> exp(-1)
    params = KernelParams(v0=1.0, w=np.array([2.0]), sigma2=0.1)
    assert se_kernel([0.0], [1.0], params) == pytest.approx(math.exp(-1.0))


def test_kernel_symmetry(rng):
    a, b = rng.standard_normal(3), rng.standard_normal(3)
    params = KernelParams(v0=1.0, w=np.abs(rng.standard_normal(3)),
                          sigma2=0.1)
    assert se_kernel(a, b, params) == pytest.approx(
        se_kernel(b, a, params), abs=1e-15)


def test_kernel_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        se_kernel([0.0, 1.0], [0.0], THETA)
    with pytest.raises(DimensionMismatch):
        gram(np.zeros((3, 2)), np.zeros((3, 2)), THETA)


def test_negative_params_rejected():
    with pytest.raises(ValueError):
        KernelParams(v0=-1.0, w=np.array([1.0]), sigma2=0.1)
    with pytest.raises(ValueError):
        KernelParams(v0=1.0, w=np.array([-1.0]), sigma2=0.1)


def test_log_vector_roundtrip():
    back = KernelParams.from_log_vector(THETA.log_vector())
    assert back.v0 == pytest.approx(THETA.v0)
    assert back.w == pytest.approx(THETA.w)
    assert back.sigma2 == pytest.approx(THETA.sigma2)


def test_gram_psd(rng):
    for _ in range(10):
        Phi = rng.standard_normal((rng.integers(2, 21), 1))
        C = gram(Phi, Phi, THETA)
        assert C == pytest.approx(C.T, abs=1e-14)
        eigs = np.linalg.eigvalsh(C)
        assert eigs.min() >= -1e-8 * np.trace(C)


def test_posterior_matches_2x2_oracle(rng):
    phi = [[0.3], [1.1]]
    r = [0.5, -0.2]
    for _ in range(5):
        phi_star = [float(rng.uniform(-1, 2))]
        mean, var = posterior(THETA, np.array(phi), np.array(r),
                              np.array(phi_star))
        m_ref, v_ref = gp_posterior_2x2(THETA.v0, THETA.w, THETA.sigma2,
                                        phi, r, phi_star)
        assert mean == pytest.approx(m_ref, abs=1e-10)
        assert var == pytest.approx(v_ref, abs=1e-10)


def test_posterior_empty_context_is_prior():
    mean, var = posterior(THETA, None, None, np.array([0.0]))
    assert mean == 0.0 and var == THETA.v0
    mean, var = posterior(THETA, np.empty((0, 1)), np.empty(0),
                          np.array([0.0]))
    assert mean == 0.0 and var == THETA.v0


def test_posterior_interpolates_as_noise_vanishes():
    params = KernelParams(v0=1.0, w=np.array([1.0]), sigma2=1e-12)
    mean, var = posterior(params, np.array([[0.5]]), np.array([0.8]),
                          np.array([0.5]))
    assert mean == pytest.approx(0.8, abs=1e-6)
    assert var == pytest.approx(0.0, abs=1e-6)


def test_posterior_variance_bounded_by_prior(rng):
    for _ in range(10):
        Phi = rng.standard_normal((5, 1))
        r = rng.standard_normal(5)
        _, var = posterior(THETA, Phi, r, rng.standard_normal(1))
        assert 0.0 <= var <= THETA.v0 + 1e-12


def test_posterior_variance_monotone_in_context(rng):
    # adding a context point never increases the variance at a fixed query
    Phi = rng.standard_normal((8, 1))
    r = rng.standard_normal(8)
    query = np.array([0.25])
    prev = THETA.v0
    for k in range(1, 9):
        _, var = posterior(THETA, Phi[:k], r[:k], query)
        assert var <= prev + 1e-10
        prev = var


def test_loglik_matches_2x2_oracle():
    phi = [[0.0], [1.0]]
    r = [0.4, -0.7]
    ll, _ = block_loglik(THETA.log_vector(), [(np.array(phi), np.array(r))])
    ref = gp_loglik_2x2(THETA.v0, THETA.w, THETA.sigma2, phi, r)
    assert ll == pytest.approx(ref, abs=1e-10)


def test_loglik_sums_over_blocks(rng):
    blocks = [(rng.standard_normal((3, 1)), rng.standard_normal(3))
              for _ in range(4)]
    total, _ = block_loglik(THETA.log_vector(), blocks)
    parts = sum(block_loglik(THETA.log_vector(), [b])[0] for b in blocks)
    assert total == pytest.approx(parts, abs=1e-10)


def test_gradient_matches_finite_differences(rng):
    blocks = [(rng.standard_normal((4, 2)), rng.standard_normal(4))
              for _ in range(3)]
    for _ in range(10):
        lp = rng.normal(0, 0.5, 4)  # log(v0, w1, w2, sigma2)
        _, grad = block_loglik(lp, blocks)
        h = 1e-6
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            f_plus, _ = block_loglik(lp + e, blocks)
            f_minus, _ = block_loglik(lp - e, blocks)
            fd = (f_plus - f_minus) / (2 * h)
            scale = max(abs(fd), abs(grad[i]), 1e-8)
            assert abs(grad[i] - fd) / scale < 1e-4


def test_jittered_cholesky_handles_singular():
    A = np.ones((3, 3))  # rank 1, needs jitter
    cf = jittered_cho_factor(A)
    assert cf is not None


def test_parameter_recovery():
    # simulate residual blocks from known theta; refit must land within
    # +/-0.5 in log-space for >= 80% of seeds
    true = KernelParams(v0=1.0, w=np.array([1.0]), sigma2=0.1)
    hits = 0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        blocks = []
        for _ in range(40):
            Phi = rng.standard_normal((7, 1))
            C = gram(Phi, Phi, true) + true.sigma2 * np.eye(7)
            r = np.linalg.cholesky(C + 1e-12 * np.eye(7)) \
                @ rng.standard_normal(7)
            blocks.append((Phi, r))
        est = fit_kernel(blocks, 1, n_starts=3, seed=seed, maxiter=300)
        err = np.abs(est.log_vector() - true.log_vector())
        if np.all(err <= 0.5):
            hits += 1
    assert hits >= 8

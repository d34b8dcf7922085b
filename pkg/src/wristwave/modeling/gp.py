"""Squared-exponential GP machinery for the random-effects part.

Per-subject residual vectors r are modeled as r ~ N(0, C + sigma2*I)
with C built from the SE kernel

    k(phi, phi') = v0 * exp(-0.5 * sum_q w_q (phi_q - phi'_q)^2)

over that subject's per-visit inputs.  Hyperparameters (v0, w, sigma2)
are estimated by maximizing the residual marginal log-likelihood summed
over independent per-subject blocks (empirical Bayes), in log-space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize

from ..errors import DimensionMismatch, NonPositiveDefinite, OptimFailure

LOG2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class KernelParams:
    v0: float
    w: np.ndarray        # inverse squared length-scale weights, >= 0
    sigma2: float        # observation noise variance

    def __post_init__(self):
        if self.v0 < 0 or self.sigma2 < 0 or np.any(self.w < 0):
            raise ValueError("kernel parameters must be non-negative")

    def log_vector(self) -> np.ndarray:
        return np.log(np.concatenate([[self.v0], self.w, [self.sigma2]]))

    @classmethod
    def from_log_vector(cls, vec: np.ndarray) -> "KernelParams":
        vec = np.asarray(vec, dtype=float)
        return cls(v0=float(np.exp(vec[0])), w=np.exp(vec[1:-1]),
                   sigma2=float(np.exp(vec[-1])))


def se_kernel(phi_a, phi_b, params: KernelParams) -> float:
    phi_a = np.atleast_1d(np.asarray(phi_a, dtype=float))
    phi_b = np.atleast_1d(np.asarray(phi_b, dtype=float))
    if phi_a.shape != phi_b.shape or len(phi_a) != len(params.w):
        raise DimensionMismatch(f"{phi_a.shape} vs {phi_b.shape}")
    d2 = params.w @ (phi_a - phi_b) ** 2
    return float(params.v0 * np.exp(-0.5 * d2))


def gram(Phi_a, Phi_b, params: KernelParams) -> np.ndarray:
    Phi_a = np.atleast_2d(np.asarray(Phi_a, dtype=float))
    Phi_b = np.atleast_2d(np.asarray(Phi_b, dtype=float))
    if Phi_a.shape[1] != len(params.w) or Phi_b.shape[1] != len(params.w):
        raise DimensionMismatch("feature dimension mismatch")
    diff = Phi_a[:, None, :] - Phi_b[None, :, :]
    d2 = np.einsum("ijq,q->ij", diff ** 2, params.w)
    return params.v0 * np.exp(-0.5 * d2)


def jittered_cho_factor(A: np.ndarray):
    """Cholesky with escalating diagonal jitter, 1e-10..1e-6 of mean diag."""
    scale = float(np.trace(A)) / len(A) if len(A) else 1.0
    if scale <= 0:
        scale = 1.0
    jitter = 0.0
    for power in range(-10, -5):
        try:
            return cho_factor(A + jitter * np.eye(len(A)), lower=True)
        except np.linalg.LinAlgError:
            jitter = 10.0 ** power * scale
    raise NonPositiveDefinite("jitter exhausted at 1e-6 of mean diagonal")


def block_loglik(log_params: np.ndarray, blocks):
    """Summed marginal log-likelihood over blocks and its gradient.

    blocks: sequence of (Phi, r) with Phi shape (J, Q), r shape (J,).
    Returns (loglik, gradient in log-parameter space).
    """
    params = KernelParams.from_log_vector(log_params)
    Q = len(params.w)
    ll = 0.0
    grad = np.zeros(Q + 2)
    for Phi, r in blocks:
        Phi = np.atleast_2d(np.asarray(Phi, dtype=float))
        r = np.asarray(r, dtype=float)
        J = len(r)
        C = gram(Phi, Phi, params)
        A = C + params.sigma2 * np.eye(J)
        cf = jittered_cho_factor(A)
        alpha = cho_solve(cf, r)
        logdet = 2.0 * float(np.sum(np.log(np.diag(cf[0]))))
        ll += -0.5 * float(r @ alpha) - 0.5 * logdet - 0.5 * J * LOG2PI
        Ainv = cho_solve(cf, np.eye(J))
        M = np.outer(alpha, alpha) - Ainv
        # dA/dlog v0 = C
        grad[0] += 0.5 * float(np.sum(M * C))
        diff = Phi[:, None, :] - Phi[None, :, :]
        for q in range(Q):
            dC = C * (-0.5 * diff[:, :, q] ** 2) * params.w[q]
            grad[1 + q] += 0.5 * float(np.sum(M * dC))
        grad[-1] += 0.5 * params.sigma2 * float(np.trace(M))
    return ll, grad


def fit_kernel(blocks, q_dim, n_starts=5, seed=0, maxiter=500,
               gtol=1e-6) -> KernelParams:
    """Multi-start quasi-Newton maximization of the summed block likelihood."""
    r_all = np.concatenate([np.asarray(r, dtype=float) for _, r in blocks])
    var = float(np.var(r_all))
    if var <= 0:
        var = 1e-6
    rng = np.random.default_rng(seed)
    starts = [np.log(np.concatenate([[var / 2], np.ones(q_dim),
                                     [var / 2]]))]
    for _ in range(n_starts - 1):
        starts.append(starts[0] + rng.normal(scale=1.0, size=q_dim + 2))

    def neg(lp):
        ll, g = block_loglik(lp, blocks)
        return -ll, -g

    best = None
    for x0 in starts:
        try:
            res = minimize(neg, x0, jac=True, method="L-BFGS-B",
                           options={"maxiter": maxiter, "gtol": gtol})
        except NonPositiveDefinite:
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise OptimFailure("all optimizer starts failed")
    return KernelParams.from_log_vector(best.x)


def posterior(params: KernelParams, Phi_ctx, r_ctx, phi_new):
    """Posterior mean and variance of the random effect at phi_new.

    Empty context returns the prior (0, v0).
    """
    phi_new = np.atleast_1d(np.asarray(phi_new, dtype=float))
    if Phi_ctx is None or len(Phi_ctx) == 0:
        return 0.0, params.v0
    Phi_ctx = np.atleast_2d(np.asarray(Phi_ctx, dtype=float))
    r_ctx = np.asarray(r_ctx, dtype=float)
    if params.v0 == 0.0:
        return 0.0, 0.0
    C = gram(Phi_ctx, Phi_ctx, params)
    A = C + params.sigma2 * np.eye(len(r_ctx))
    cf = jittered_cho_factor(A)
    kstar = gram(phi_new[None, :], Phi_ctx, params)[0]
    alpha = cho_solve(cf, r_ctx)
    mean = float(kstar @ alpha)
    var = params.v0 - float(kstar @ cho_solve(cf, kstar))
    return mean, max(var, 0.0)

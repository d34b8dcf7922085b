"""Independent slow reference implementations used as test oracles.

Everything here is deliberately written in plain loops, separate from
the library's vectorized code paths.
"""

import math

import numpy as np


def slow_analysis_step(x, filt):
    n = len(x)
    out = []
    for t in range(n // 2):
        acc = 0.0
        for l, h in enumerate(filt):
            acc += h * x[(2 * t + 1 - l) % n]
        out.append(acc)
    return out


def slow_dwt(x, low, high, levels):
    """Pyramid decomposition with explicit python loops."""
    detail = {}
    approx = list(x)
    for j in range(1, levels + 1):
        detail[j] = slow_analysis_step(approx, high)
        approx = slow_analysis_step(approx, low)
    return detail, approx


def slow_packet_tree(x, low, high, depth=3):
    """Full wavelet-packet tree in natural order."""
    nodes = [list(x)]
    for _ in range(depth):
        nxt = []
        for node in nodes:
            nxt.append(slow_analysis_step(node, low))
            nxt.append(slow_analysis_step(node, high))
        nodes = nxt
    return nodes


def subgradient_lasso(X, y, lam, steps=200_000, lr=None):
    """Projected-subgradient minimizer of (1/2n)||y-b0-Xb||^2 + lam||b||_1.

    Slow but implementation-independent; uses proximal (soft threshold)
    steps, which converge for step size below 1/L.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if lr is None:
        L = np.linalg.norm(X, 2) ** 2 / n
        lr = 0.9 / max(L, 1e-12)
    beta = np.zeros(p)
    b0 = float(y.mean())
    for _ in range(steps):
        resid = y - b0 - X @ beta
        grad = -X.T @ resid / n
        z = beta - lr * grad
        beta = np.sign(z) * np.maximum(np.abs(z) - lr * lam, 0.0)
        b0 += lr * float(resid.mean())
    return beta, b0


def gp_posterior_2x2(v0, w, sigma2, phi, r, phi_star):
    """Closed-form 2-context GP posterior via the explicit 2x2 inverse."""
    def k(a, b):
        d2 = sum(wq * (ai - bi) ** 2 for wq, ai, bi in zip(w, a, b))
        return v0 * math.exp(-0.5 * d2)

    a = k(phi[0], phi[0]) + sigma2
    b = k(phi[0], phi[1])
    c = k(phi[1], phi[1]) + sigma2
    det = a * c - b * b
    inv = [[c / det, -b / det], [-b / det, a / det]]
    ks = [k(phi_star, phi[0]), k(phi_star, phi[1])]
    alpha = [inv[0][0] * r[0] + inv[0][1] * r[1],
             inv[1][0] * r[0] + inv[1][1] * r[1]]
    mean = ks[0] * alpha[0] + ks[1] * alpha[1]
    ik = [inv[0][0] * ks[0] + inv[0][1] * ks[1],
          inv[1][0] * ks[0] + inv[1][1] * ks[1]]
    var = v0 - (ks[0] * ik[0] + ks[1] * ik[1])
    return mean, var


def gp_loglik_2x2(v0, w, sigma2, phi, r):
    """Marginal log-likelihood of a 2-visit residual block, by hand."""
    def k(a, b):
        d2 = sum(wq * (ai - bi) ** 2 for wq, ai, bi in zip(w, a, b))
        return v0 * math.exp(-0.5 * d2)

    a = k(phi[0], phi[0]) + sigma2
    b = k(phi[0], phi[1])
    c = k(phi[1], phi[1]) + sigma2
    det = a * c - b * b
    quad = (c * r[0] ** 2 - 2 * b * r[0] * r[1] + a * r[1] ** 2) / det
    return -0.5 * quad - 0.5 * math.log(det) - math.log(2.0 * math.pi)


def spearman(x, y):
    """Spearman rank correlation without scipy (independent check)."""
    def ranks(v):
        order = np.argsort(v)
        rk = np.empty(len(v))
        rk[order] = np.arange(1, len(v) + 1)
        return rk

    rx, ry = ranks(np.asarray(x)), ranks(np.asarray(y))
    return float(np.corrcoef(rx, ry)[0, 1])

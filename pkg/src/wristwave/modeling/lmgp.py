"""Mixed-effects regression: linear fixed part plus GP random part.

Training is two-stage: ordinary least squares on the fixed-effects
features, then empirical-Bayes kernel hyperparameters on the per-subject
residual blocks.  Random effects are independent across subjects
(block-diagonal covariance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gp import KernelParams, fit_kernel, posterior
from .linear import LinearModel, ols_fit
from .standardize import Standardizer

ARTIFACT_VERSION = "lmgp-v1"


@dataclass(frozen=True)
class LmgpModel:
    fixed: LinearModel
    theta: KernelParams
    fixed_names: tuple
    random_names: tuple
    blocks: dict  # subject_id -> (Phi, residuals), training residual blocks


def lmgp_fit(X_fixed, X_random, y, subject_ids, fixed_names=None,
             random_names=None, n_starts=5, seed=0, maxiter=500) -> LmgpModel:
    """Fit from standardized feature matrices; one row per scored visit."""
    X_fixed = np.asarray(X_fixed, dtype=float)
    X_random = np.asarray(X_random, dtype=float)
    y = np.asarray(y, dtype=float)
    fixed = ols_fit(X_fixed, y, names=fixed_names)
    resid = y - fixed.predict(X_fixed)
    blocks = {}
    for sid in dict.fromkeys(subject_ids):  # preserve first-seen order
        mask = np.array([s == sid for s in subject_ids])
        blocks[sid] = (X_random[mask], resid[mask])
    theta = fit_kernel(list(blocks.values()), X_random.shape[1],
                       n_starts=n_starts, seed=seed, maxiter=maxiter)
    return LmgpModel(fixed=fixed, theta=theta,
                     fixed_names=tuple(fixed.feature_names),
                     random_names=tuple(random_names or
                                        (f"z{j}" for j in range(X_random.shape[1]))),
                     blocks=blocks)


def lmgp_predict(model: LmgpModel, x_new, phi_new, context=None,
                 add_noise=False):
    """Predict one visit: (mean, variance, (lo95, hi95)).

    context is (Phi, r) from the same subject's earlier visits, or None
    for a new subject (random-effect prior: mean 0, variance v0).
    """
    fixed_mean = float(model.fixed.predict(np.atleast_1d(x_new))[0])
    Phi_ctx, r_ctx = context if context is not None else (None, None)
    g_mean, g_var = posterior(model.theta, Phi_ctx, r_ctx, phi_new)
    mean = fixed_mean + g_mean
    var = g_var + (model.theta.sigma2 if add_noise else 0.0)
    half = 1.96 * float(np.sqrt(var))
    return mean, var, (mean - half, mean + half)


def model_to_dict(model: LmgpModel, standardizer: Standardizer | None = None,
                  extra=None) -> dict:
    doc = {
        "version": ARTIFACT_VERSION,
        "fixed": {
            "beta": model.fixed.beta.tolist(),
            "sigma2": model.fixed.sigma2,
            "feature_names": list(model.fixed.feature_names),
        },
        "theta": {
            "v0": model.theta.v0,
            "w": model.theta.w.tolist(),
            "sigma2": model.theta.sigma2,
            "log": model.theta.log_vector().tolist(),
        },
        "random_names": list(model.random_names),
        "blocks": {sid: {"phi": np.asarray(P).tolist(),
                         "residuals": np.asarray(r).tolist()}
                   for sid, (P, r) in model.blocks.items()},
    }
    if standardizer is not None:
        doc["standardizer"] = {
            "means": standardizer.means.tolist(),
            "stds": standardizer.stds.tolist(),
            "names": list(standardizer.names),
        }
    if extra:
        doc.update(extra)
    return doc


def model_from_dict(doc: dict):
    if doc.get("version") != ARTIFACT_VERSION:
        raise ValueError(f"unsupported model artifact version "
                         f"{doc.get('version')!r}")
    fixed = LinearModel(beta=np.array(doc["fixed"]["beta"]),
                        sigma2=float(doc["fixed"]["sigma2"]),
                        feature_names=tuple(doc["fixed"]["feature_names"]))
    theta = KernelParams(v0=float(doc["theta"]["v0"]),
                         w=np.array(doc["theta"]["w"]),
                         sigma2=float(doc["theta"]["sigma2"]))
    blocks = {sid: (np.array(b["phi"]), np.array(b["residuals"]))
              for sid, b in doc["blocks"].items()}
    model = LmgpModel(fixed=fixed, theta=theta,
                      fixed_names=tuple(doc["fixed"]["feature_names"]),
                      random_names=tuple(doc["random_names"]),
                      blocks=blocks)
    std = None
    if "standardizer" in doc:
        s = doc["standardizer"]
        std = Standardizer(means=np.array(s["means"]),
                           stds=np.array(s["stds"]),
                           names=tuple(s["names"]))
    return model, std

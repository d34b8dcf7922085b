"""Leave-one-subject-out evaluation and feature diagnostics.

Mean RMSE is the unweighted mean of per-subject RMSEs; acute and chronic
groups are always evaluated separately by the callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSubjects
from .features import FAMILIES, SCALES
from .modeling.lasso import LassoFit
from .modeling.linear import ols_fit
from .modeling.lmgp import lmgp_fit, lmgp_predict
from .modeling.standardize import znorm_fit


@dataclass(frozen=True)
class FeatureTable:
    X: np.ndarray
    y: np.ndarray               # NaN where the score is withheld
    subjects: tuple
    weeks: tuple
    names: tuple
    group: str | None = None

    def column_indices(self, names):
        return [self.names.index(n) for n in names]


@dataclass
class CvReport:
    group: str | None
    model_name: str
    mode: str
    per_subject_rmse: dict = field(default_factory=dict)
    predictions: list = field(default_factory=list)
    # prediction entries: (subject, week, y_true, y_pred, lo95, hi95)

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(list(self.per_subject_rmse.values())))

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "model": self.model_name,
            "mode": self.mode,
            "mean_rmse": self.mean_rmse,
            "per_subject_rmse": dict(self.per_subject_rmse),
            "predictions": [list(p) for p in self.predictions],
        }


def loso_cv(table: FeatureTable, model_name: str, fixed_features,
            random_features=None, mode="monitoring", add_noise=False,
            seed=0, n_starts=5, maxiter=500) -> CvReport:
    """Leave-one-subject-out CV with a linear or mixed-effects model.

    mode "monitoring": when predicting week j for the held-out subject,
    the random effect is conditioned on that subject's observed residuals
    from earlier weeks.  mode "cold": no conditioning (prior only).
    """
    if model_name not in ("linear", "lmgp"):
        raise ValueError(f"unknown model {model_name!r}")
    random_features = list(random_features or fixed_features)
    fixed_features = list(fixed_features)
    subjects = list(dict.fromkeys(table.subjects))
    if len(subjects) < 2:
        raise InsufficientSubjects(f"{len(subjects)} subject(s)")
    scored = ~np.isnan(table.y)
    all_names = list(dict.fromkeys(fixed_features + random_features))
    cols = table.column_indices(all_names)
    fixed_idx = [all_names.index(n) for n in fixed_features]
    random_idx = [all_names.index(n) for n in random_features]
    sub_arr = np.array(table.subjects)
    week_arr = np.array(table.weeks)

    report = CvReport(group=table.group, model_name=model_name, mode=mode)
    for sid in subjects:
        train = (sub_arr != sid) & scored
        test = (sub_arr == sid) & scored
        if not test.any():
            continue
        std = znorm_fit(table.X[train][:, cols], names=all_names)
        Z_train = std.apply(table.X[train][:, cols])
        Z_test = std.apply(table.X[test][:, cols])
        y_train = table.y[train]
        y_test = table.y[test]
        test_weeks = week_arr[test]
        order = np.argsort(test_weeks, kind="stable")

        if model_name == "linear":
            lm = ols_fit(Z_train[:, fixed_idx], y_train, names=fixed_features)
            for i in order:
                pred = float(lm.predict(Z_test[i, fixed_idx])[0])
                report.predictions.append(
                    (sid, int(test_weeks[i]), float(y_test[i]), pred,
                     None, None))
        else:
            model = lmgp_fit(Z_train[:, fixed_idx], Z_train[:, random_idx],
                             y_train, list(sub_arr[train]),
                             fixed_names=fixed_features,
                             random_names=random_features,
                             n_starts=n_starts, seed=seed, maxiter=maxiter)
            ctx_phi, ctx_r = [], []
            for i in order:
                context = ((np.array(ctx_phi), np.array(ctx_r))
                           if (mode == "monitoring" and ctx_phi) else None)
                mean, _var, (lo, hi) = lmgp_predict(
                    model, Z_test[i, fixed_idx], Z_test[i, random_idx],
                    context=context, add_noise=add_noise)
                report.predictions.append(
                    (sid, int(test_weeks[i]), float(y_test[i]), mean,
                     float(lo), float(hi)))
                if mode == "monitoring":
                    fixed_pred = float(
                        model.fixed.predict(Z_test[i, fixed_idx])[0])
                    ctx_phi.append(Z_test[i, random_idx])
                    ctx_r.append(float(y_test[i]) - fixed_pred)
        errs = [(p[3] - p[2]) for p in report.predictions if p[0] == sid]
        report.per_subject_rmse[sid] = math.sqrt(
            float(np.mean(np.square(errs))))
    return report


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx, sy = x.std(), y.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(np.corrcoef(x, y)[0, 1])


def correlation_table(X, y, names):
    """Per-feature Pearson r against the target.

    Returns (dict name -> r, list of constant-column names flagged as 0).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < 3:
        raise ValueError("need at least 3 rows")
    corr, flagged = {}, []
    for j, name in enumerate(names):
        if X[:, j].std() == 0:
            corr[name] = 0.0
            flagged.append(name)
        else:
            corr[name] = pearson(X[:, j], y)
    return corr, flagged


def correlation_grid(corr: dict) -> list:
    """Rows (scale, sad_p, sad_np, pnp1, pnp2) in canonical scale order."""
    rows = []
    for k in SCALES:
        suffix = k.replace(".", "_")
        rows.append((k, *(corr.get(f"{fam}_{suffix}") for fam in FAMILIES)))
    return rows


def cross_correlation(X, names=None):
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 3:
        raise ValueError("need at least 3 rows")
    p = X.shape[1]
    M = np.eye(p)
    stds = X.std(axis=0)
    for a in range(p):
        for b in range(a + 1, p):
            r = 0.0 if (stds[a] == 0 or stds[b] == 0) else pearson(X[:, a],
                                                                   X[:, b])
            M[a, b] = M[b, a] = r
    return M


def rank_features(fit: LassoFit, correlations: dict, canonical_order=None):
    """Two descending rankings of the selected features: by |lasso
    coefficient| and by |pearson r|; ties break by canonical order."""
    selected = list(fit.selected)
    order = list(canonical_order or fit.names)
    coef = {n: abs(fit.coefficients[fit.names.index(n)]) for n in selected}
    by_coef = sorted(selected, key=lambda n: (-coef[n], order.index(n)))
    by_corr = sorted(selected,
                     key=lambda n: (-abs(correlations.get(n, 0.0)),
                                    order.index(n)))
    return by_coef, by_corr


def subset_experiment(table: FeatureTable, selected, rankings: dict,
                      fraction=0.5, mode="monitoring", add_noise=False,
                      seed=0, n_starts=5, maxiter=500) -> dict:
    """Mixed-effects CV with truncated fixed-effects feature lists.

    rankings: criterion name -> ranked feature list.  For each criterion
    the top ceil(fraction * m) features model the fixed part while the
    full selected set models the random part.  Returns criterion -> CvReport.
    """
    selected = list(selected)
    reports = {}
    for criterion, ranked in rankings.items():
        k = math.ceil(fraction * len(ranked))
        reports[criterion] = loso_cv(
            table, "lmgp", fixed_features=ranked[:k],
            random_features=selected, mode=mode, add_noise=add_noise,
            seed=seed, n_starts=n_starts, maxiter=maxiter)
    return reports

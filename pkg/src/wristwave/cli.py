"""Command-line pipeline: synth -> preprocess -> features -> select ->
train -> predict / cv -> report.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
failure.  Every artifact embeds the config hash; `report` refuses to mix
artifacts from different hashes.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import artifacts
from .config import PipelineConfig, load_config
from .errors import (NonConvergence, NonPositiveDefinite, OptimFailure,
                     RankDeficient, WristwaveError)
from .evaluate import (correlation_grid, correlation_table,
                       cross_correlation, loso_cv, rank_features)
from .features import FEATURE_NAMES, build_feature_vector
from .ingest import load_cohort
from .modeling.lasso import lambda_grid, lasso_select
from .modeling.lmgp import lmgp_fit, lmgp_predict, model_from_dict, model_to_dict
from .modeling.standardize import znorm_fit
from .synth import SynthConfig, generate_cohort
from .vm import secondwise_vm
from .wavelet import FilterBank

USAGE_ERROR, VALIDATION_ERROR, NUMERICAL_ERROR = 2, 1, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _write_runlog(out_dir, command, cfg: PipelineConfig, outputs):
    path = os.path.join(out_dir, f"{command}_runlog.json")
    artifacts.write_json(path, {
        "command": command,
        "config": cfg.as_flat_dict(),
        "outputs": sorted(os.path.basename(p) for p in outputs),
    }, cfg.content_hash())


def _require(path, what="input"):
    if path is None or not os.path.exists(path):
        raise CliError(f"{what} not found: {path}", USAGE_ERROR)
    return path


def cmd_synth(args, cfg):
    synth_cfg = SynthConfig(seed=cfg.seed, n_acute=args.n_acute,
                            n_chronic=args.n_chronic,
                            seconds_per_visit=args.seconds_per_visit,
                            samples_per_second=args.samples_per_second)
    manifest = generate_cohort(synth_cfg, args.out)
    _write_runlog(args.out, "synth", cfg, [manifest])
    print(f"wrote cohort manifest {manifest}")


def cmd_preprocess(args, cfg):
    metas, visits = load_cohort(_require(args.manifest, "manifest"))
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    for visit in visits:
        for side, rec in visit.recordings.items():
            series = secondwise_vm(rec)
            path = os.path.join(
                args.out, f"{visit.subject_id}_w{visit.week}_{side}_vm.csv")
            with open(path, "w", newline="", encoding="utf-8") as fh:
                fh.write("second_index,vm\n")
                for i, v in enumerate(series.values):
                    fh.write(f"{i},{float(v)!r}\n")
            outputs.append(path)
    _write_runlog(args.out, "preprocess", cfg, outputs)
    print(f"wrote {len(outputs)} VM series for {len(metas)} subjects")


def _dump_coeffs(coeffs, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("scale,index,value\n")
        for label, vec in ([(str(j), w) for j, w in sorted(coeffs.detail.items())]
                           + [("v7", coeffs.approx_v7)]
                           + sorted(coeffs.packets.items())):
            for i, v in enumerate(vec):
                fh.write(f"{label},{i},{float(v)!r}\n")


def cmd_features(args, cfg):
    metas, visits = load_cohort(_require(args.manifest, "manifest"))
    bank = FilterBank.create(cfg.wavelet_family)
    meta_by_id = {m.subject_id: m for m in metas}
    vectors = [build_feature_vector(v, meta_by_id[v.subject_id], bank)
               for v in visits]
    groups = {m.subject_id: m.group.value for m in metas}
    artifacts.write_feature_csv(args.out, vectors, groups,
                                cfg.content_hash())
    if args.dump_coeffs:
        os.makedirs(args.dump_coeffs, exist_ok=True)
        from .features import extract_coeffs
        for visit in visits:
            for side, rec in visit.recordings.items():
                _dump_coeffs(extract_coeffs(rec, bank), os.path.join(
                    args.dump_coeffs,
                    f"{visit.subject_id}_w{visit.week}_{side}_coeffs.csv"))
    _write_runlog(os.path.dirname(os.path.abspath(args.out)),
                  "features", cfg, [args.out])
    print(f"wrote feature table {args.out} ({len(vectors)} visits)")


def _load_group_table(path, group):
    tables, config_hash = artifacts.read_feature_csv(
        _require(path, "feature table"))
    if group not in tables:
        raise CliError(f"group {group!r} not present in {path} "
                       f"(have {sorted(tables)})", USAGE_ERROR)
    return tables[group], config_hash


def _scored_standardized(table):
    """Scored rows of a table, z-normed, constant columns dropped."""
    scored = ~np.isnan(table.y)
    X, y = table.X[scored], table.y[scored]
    keep = [j for j in range(X.shape[1]) if X[:, j].std() > 0]
    names = [table.names[j] for j in keep]
    std = znorm_fit(X[:, keep], names=names)
    return std.apply(X[:, keep]), y, names, std, scored


def cmd_select(args, cfg):
    table, feat_hash = _load_group_table(args.features, args.group)
    Z, y, names, _std, _ = _scored_standardized(table)
    lams = lambda_grid(Z, y, n_lambdas=cfg.lambda_count,
                       ratio=cfg.lambda_ratio)
    lam, fit = lasso_select(Z, y, lams=lams, folds=cfg.cv_folds,
                            names=names, seed=cfg.seed)
    corr, _ = correlation_table(Z, y, names)
    by_coef, by_corr = rank_features(fit, corr,
                                     canonical_order=FEATURE_NAMES)
    artifacts.check_same_hash([feat_hash, cfg.content_hash()], "inputs")
    artifacts.write_json(args.out, {
        "group": args.group,
        "lambda": lam,
        "selected": list(fit.selected),
        "coefficients": {n: float(c)
                         for n, c in zip(fit.names, fit.coefficients)},
        "intercept": fit.intercept,
        "rank_by_lasso": by_coef,
        "rank_by_corr": by_corr,
        "correlations": corr,
    }, cfg.content_hash())
    print(f"selected {len(fit.selected)} features at lambda={lam:.5g}")


def _resolve_features(args, cfg):
    if args.fixed_features:
        fixed = args.fixed_features.split(",")
        random = (args.random_features.split(",")
                  if args.random_features else fixed)
        return fixed, random
    if args.selection:
        doc = artifacts.read_json(_require(args.selection, "selection"))
        artifacts.check_same_hash([doc["config_hash"], cfg.content_hash()],
                                  "selection/config")
        sel = doc["selected"]
        if not sel:
            raise CliError("selection is empty; pass --fixed-features",
                           VALIDATION_ERROR)
        return sel, sel
    raise CliError("need --selection or --fixed-features", USAGE_ERROR)


def cmd_train(args, cfg):
    table, feat_hash = _load_group_table(args.features, args.group)
    fixed, random = _resolve_features(args, cfg)
    Z, y, names, std, scored = _scored_standardized(table)
    missing = [n for n in set(fixed + random) if n not in names]
    if missing:
        raise CliError(f"features unavailable after preprocessing: {missing}",
                       VALIDATION_ERROR)
    fi = [names.index(n) for n in fixed]
    ri = [names.index(n) for n in random]
    subjects = [s for s, keep in zip(table.subjects, scored) if keep]
    model = lmgp_fit(Z[:, fi], Z[:, ri], y, subjects, fixed_names=fixed,
                     random_names=random, n_starts=cfg.gp_starts,
                     seed=cfg.seed, maxiter=cfg.gp_maxiter)
    artifacts.check_same_hash([feat_hash, cfg.content_hash()], "inputs")
    artifacts.write_json(args.out,
                         model_to_dict(model, standardizer=std,
                                       extra={"group": args.group,
                                              "mode": cfg.mode}),
                         cfg.content_hash())
    print(f"trained model on {len(y)} visits -> {args.out}")


def cmd_predict(args, cfg):
    doc = artifacts.read_json(_require(args.model, "trained model"))
    artifacts.check_same_hash([doc["config_hash"], cfg.content_hash()],
                              "model/config")
    model, std = model_from_dict(doc)
    table, feat_hash = _load_group_table(args.features, args.group)
    artifacts.check_same_hash([feat_hash, cfg.content_hash()], "inputs")
    cols = [list(std.names).index(n)
            for n in dict.fromkeys(list(model.fixed_names)
                                   + list(model.random_names))]
    all_names = [std.names[j] for j in cols]
    fi = [all_names.index(n) for n in model.fixed_names]
    ri = [all_names.index(n) for n in model.random_names]
    full_idx = [table.names.index(n) for n in std.names]
    Z = std.apply(table.X[:, full_idx])[:, cols]
    rows = []
    for sid in dict.fromkeys(table.subjects):
        mask = np.array([s == sid for s in table.subjects])
        order = np.argsort(np.array(table.weeks)[mask], kind="stable")
        idx = np.nonzero(mask)[0][order]
        ctx_phi, ctx_r = [], []
        for i in idx:
            context = ((np.array(ctx_phi), np.array(ctx_r))
                       if (cfg.mode == "monitoring" and ctx_phi) else None)
            mean, var, (lo, hi) = lmgp_predict(
                model, Z[i, fi], Z[i, ri], context=context,
                add_noise=cfg.interval_add_noise)
            rows.append((sid, table.weeks[i], mean, var, lo, hi))
            y_i = table.y[i]
            if cfg.mode == "monitoring" and not np.isnan(y_i):
                ctx_phi.append(Z[i, ri])
                ctx_r.append(float(y_i)
                             - float(model.fixed.predict(Z[i, fi])[0]))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id", "week", "prediction", "variance",
                         "lo95", "hi95"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} predictions -> {args.out}")


def cmd_cv(args, cfg):
    table, feat_hash = _load_group_table(args.features, args.group)
    fixed, random = _resolve_features(args, cfg)
    artifacts.check_same_hash([feat_hash, cfg.content_hash()], "inputs")
    report = loso_cv(table, args.model, fixed_features=fixed,
                     random_features=random, mode=cfg.mode,
                     add_noise=cfg.interval_add_noise, seed=cfg.seed,
                     n_starts=cfg.gp_starts, maxiter=cfg.gp_maxiter)
    out_json = f"{args.out}_report.json"
    out_csv = f"{args.out}_predictions.csv"
    out_corr = f"{args.out}_correlations.csv"
    out_xcorr = f"{args.out}_crosscorr.csv"
    artifacts.write_json(out_json, report.to_dict(), cfg.content_hash())
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id", "week", "y_true", "y_pred",
                         "lo95", "hi95"])
        writer.writerows(report.predictions)
    scored = ~np.isnan(table.y)
    corr, _ = correlation_table(table.X[scored], table.y[scored],
                                table.names)
    with open(out_corr, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scale", "sad_p", "sad_np", "pnp1", "pnp2"])
        writer.writerows(correlation_grid(corr))
    M = cross_correlation(table.X[scored], table.names)
    with open(out_xcorr, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature"] + list(table.names))
        for name, row in zip(table.names, M):
            writer.writerow([name] + [repr(float(v)) for v in row])
    _write_runlog(os.path.dirname(os.path.abspath(out_json)), "cv", cfg,
                  [out_json, out_csv, out_corr, out_xcorr])
    print(f"{args.model} {args.group} mean RMSE {report.mean_rmse:.4f}")


def cmd_report(args, cfg):
    paths = sorted(p for p in os.listdir(args.dir)
                   if p.endswith("_report.json"))
    if not paths:
        raise CliError(f"no cv reports in {args.dir}", USAGE_ERROR)
    docs = [artifacts.read_json(os.path.join(args.dir, p)) for p in paths]
    artifacts.check_same_hash([d["config_hash"] for d in docs], "reports")
    lines = ["model comparison (mean RMSE, per-subject average)"]
    for doc in docs:
        lines.append(f"  {doc['group'] or '-':8s} {doc['model']:7s} "
                     f"mode={doc['mode']:10s} {doc['mean_rmse']:8.4f}")
    for p in sorted(os.listdir(args.dir)):
        if p.endswith("_correlations.csv"):
            lines.append(f"\nfeature/score correlations ({p})")
            with open(os.path.join(args.dir, p), encoding="utf-8") as fh:
                for row in csv.reader(fh):
                    cells = [row[0]] + [
                        (f"{float(c):+.2f}" if c not in ("", None) and
                         not c[0].isalpha() else c) for c in row[1:]]
                    lines.append("  " + "  ".join(f"{c:>8s}" for c in cells))
    text = "\n".join(lines) + "\n"
    out = os.path.join(args.dir, "summary.txt")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wristwave",
        description="Accelerometer-to-clinical-score regression pipeline")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--wavelet-family", dest="wavelet_family",
                        choices=["haar", "db4"])
    parser.add_argument("--mode", choices=["monitoring", "cold"])
    parser.add_argument("--interval-add-noise", action="store_const",
                        const=True, dest="interval_add_noise")
    parser.add_argument("--cv-folds", dest="cv_folds", type=int)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic cohort")
    p.add_argument("--out", required=True)
    p.add_argument("--n-acute", type=int, default=4)
    p.add_argument("--n-chronic", type=int, default=4)
    p.add_argument("--seconds-per-visit", type=int, default=3 * 128)
    p.add_argument("--samples-per-second", type=int, default=100)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("preprocess", help="emit second-wise VM series")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("features", help="extract the 41-column table")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-coeffs", help="debug: per-scale coefficient CSVs")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("select", help="L1 feature selection with CV")
    p.add_argument("--features", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    for name, fn in (("train", cmd_train), ("cv", cmd_cv)):
        p = sub.add_parser(name)
        p.add_argument("--features", required=True)
        p.add_argument("--group", required=True)
        p.add_argument("--selection")
        p.add_argument("--fixed-features")
        p.add_argument("--random-features")
        if name == "train":
            p.add_argument("--out", required=True)
        else:
            p.add_argument("--model", required=True,
                           choices=["linear", "lmgp"])
            p.add_argument("--out", required=True,
                           help="output path prefix")
        p.set_defaults(func=fn)

    p = sub.add_parser("predict", help="score visits with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="summarize artifacts in a directory")
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: getattr(args, k, None)
                 for k in ("seed", "wavelet_family", "mode",
                           "interval_add_noise", "cv_folds")}
    try:
        cfg = load_config(args.config, overrides)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        args.func(args, cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (NonConvergence, NonPositiveDefinite, OptimFailure,
            RankDeficient) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except WristwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())

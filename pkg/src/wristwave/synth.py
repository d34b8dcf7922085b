"""Synthetic cohort generation with known ground truth.

Two generators:

* generate_cohort: writes raw bilateral accelerometer CSVs plus a cohort
  manifest.  Per-second activity is a rest/bout mixture with bout
  oscillation inside the scale-2 frequency band; the paralysed side is
  the non-paralysed waveform scaled so the realized bilateral asymmetry
  tracks a configurable score -> asymmetry law.

* generate_lmgp_data: samples targets from the mixed-effects generative
  model y = X beta + g + eps with per-subject GP draws, returning the
  latent g for calibration tests.

All randomness comes from numpy's default_rng (PCG64), seeded and
platform-stable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveDefinite
from .ingest import MANIFEST_COLUMNS, SCORE_MAX, SCORE_MIN, write_manifest
from .modeling.gp import KernelParams, gram

WEEKS = tuple(range(2, 9))


def default_asymmetry_law(score: float) -> float:
    """Linear map: full recovery (63) -> symmetric use, floor (7) -> 0.8."""
    return 0.8 * (SCORE_MAX - score) / (SCORE_MAX - SCORE_MIN)


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_acute: int = 4
    n_chronic: int = 4
    seconds_per_visit: int = 3 * 128
    samples_per_second: int = 100
    acute_start: tuple = (15.0, 40.0)      # uniform range for week-1 score
    chronic_start: tuple = (20.0, 60.0)
    acute_drift: tuple = (3.0, 1.5)        # weekly (mean, sd)
    chronic_drift: tuple = (0.0, 0.8)
    bout_rate: float = 0.25                # fraction of active seconds
    bout_amplitude: float = 0.5            # peak VM in g during bouts
    bout_freq: float = 0.1875              # cycles/sample, inside scale-2 band
    noise_amplitude: float = 0.02          # independent per-side VM jitter
    asymmetry_law: object = field(default=default_asymmetry_law)

    def __post_init__(self):
        if self.seconds_per_visit % 128 != 0 or self.seconds_per_visit <= 0:
            raise ValueError("seconds_per_visit must be a positive multiple of 128")


def _clamp_score(s: float) -> float:
    return float(min(max(s, SCORE_MIN), SCORE_MAX))


def _trajectory(rng, start_range, drift, n_weeks=8):
    score = rng.uniform(*start_range)
    traj = [_clamp_score(score)]
    for _ in range(n_weeks - 1):
        score += rng.normal(drift[0], drift[1])
        traj.append(_clamp_score(score))
    return traj


def _vm_series(rng, cfg: SynthConfig) -> np.ndarray:
    """Non-negative per-second VM: rest seconds at ~0, bouts oscillating."""
    n = cfg.seconds_per_visit
    active = rng.random(n) < cfg.bout_rate
    k = np.arange(n)
    phase = rng.uniform(0, 2 * np.pi)
    osc = 0.5 * (1.0 + np.sin(2 * np.pi * cfg.bout_freq * k + phase))
    values = np.where(active, cfg.bout_amplitude * osc, 0.0)
    return values


def _write_recording(path, values, samples_per_second):
    """Emit (0, 0, 1 +/- v) samples whose chain-recovered VM is exact."""
    n_sec = len(values)
    sps = samples_per_second
    t = np.arange(n_sec * sps) / sps
    v = np.repeat(values, sps)
    sign = np.where(np.arange(len(v)) % 2 == 0, 1.0, -1.0)
    az = 1.0 + sign * v
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("t_seconds,ax_g,ay_g,az_g\n")
        for ti, zi in zip(t, az):
            fh.write(f"{ti:.6f},0.0,0.0,{float(zi)!r}\n")


def generate_cohort(cfg: SynthConfig, out_dir):
    """Write manifest + raw CSVs; returns the manifest path.

    Deterministic for a fixed config (byte-identical files per seed).
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    groups = ([("Acute", cfg.acute_start, cfg.acute_drift)] * cfg.n_acute
              + [("Chronic", cfg.chronic_start, cfg.chronic_drift)] * cfg.n_chronic)
    for idx, (group, start, drift) in enumerate(groups):
        sid = f"s{idx:03d}"
        side = "Left" if rng.random() < 0.5 else "Right"
        traj = _trajectory(rng, start, drift)
        ini = traj[0]
        for week in WEEKS:
            score = traj[week - 1]
            base = _vm_series(rng, cfg)
            target = float(cfg.asymmetry_law(score))
            scale = (1.0 - target) / (1.0 + target)
            # independent jitter keeps per-scale asymmetry columns from
            # being exact duplicates of each other
            jit = cfg.noise_amplitude
            v_np = base + jit * np.abs(rng.standard_normal(len(base)))
            v_p = scale * base + jit * np.abs(rng.standard_normal(len(base)))
            p_path = os.path.join(out_dir, f"{sid}_w{week}_paralysed.csv")
            np_path = os.path.join(out_dir, f"{sid}_w{week}_nonparalysed.csv")
            _write_recording(np_path, v_np, cfg.samples_per_second)
            _write_recording(p_path, v_p, cfg.samples_per_second)
            rows.append({
                "subject_id": sid, "group": group, "paralysed_side": side,
                "ini": f"{ini:.4f}", "week": week, "cahai": f"{score:.4f}",
                "path_paralysed": os.path.basename(p_path),
                "path_nonparalysed": os.path.basename(np_path),
            })
    manifest = os.path.join(out_dir, "manifest.csv")
    write_manifest(manifest, rows)
    return manifest


def generate_lmgp_data(beta, theta: KernelParams, subjects, seed=0):
    """Sample targets from y = [1, x]^T beta + g(phi) + eps per subject.

    subjects: list of (X_i, Phi_i) designs, one per subject, with J_i
    visits each.  Returns dict with stacked X, Phi, y, g, subject ids.
    """
    rng = np.random.default_rng(seed)
    beta = np.asarray(beta, dtype=float)
    X_all, Phi_all, y_all, g_all, sids = [], [], [], [], []
    for i, (X, Phi) in enumerate(subjects):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Phi = np.atleast_2d(np.asarray(Phi, dtype=float))
        J = X.shape[0]
        if theta.v0 > 0.0:
            C = gram(Phi, Phi, theta)
            try:
                L = np.linalg.cholesky(C + 1e-10 * np.eye(J))
            except np.linalg.LinAlgError:
                raise NonPositiveDefinite("kernel Gram matrix")
            g = L @ rng.standard_normal(J)
        else:
            g = np.zeros(J)
        eps = (rng.standard_normal(J) * np.sqrt(theta.sigma2)
               if theta.sigma2 > 0 else np.zeros(J))
        y = beta[0] + X @ beta[1:] + g + eps
        X_all.append(X); Phi_all.append(Phi)
        y_all.append(y); g_all.append(g)
        sids += [f"s{i:03d}"] * J
    return {
        "X": np.vstack(X_all), "Phi": np.vstack(Phi_all),
        "y": np.concatenate(y_all), "g": np.concatenate(g_all),
        "subjects": sids,
    }

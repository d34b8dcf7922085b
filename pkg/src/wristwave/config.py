"""Flat key=value pipeline configuration with a stable content hash."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class PipelineConfig:
    wavelet_family: str = "db4"
    levels: int = 7                 # fixed decomposition depth
    lambda_count: int = 100
    lambda_ratio: float = 1e-3
    cv_folds: int = 5
    gp_starts: int = 5
    gp_maxiter: int = 500
    mode: str = "monitoring"        # or "cold"
    interval_add_noise: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.levels != 7:
            raise ValueError("decomposition depth is fixed at 7")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.mode not in ("monitoring", "cold"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def as_flat_dict(self) -> dict:
        return {k: str(v) for k, v in asdict(self).items()}

    def content_hash(self) -> str:
        text = "\n".join(f"{k}={v}"
                         for k, v in sorted(self.as_flat_dict().items()))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


_BOOLS = {"true": True, "false": False, "1": True, "0": False,
          "yes": True, "no": False}


def _coerce(field_name: str, raw: str):
    default = getattr(PipelineConfig(), field_name)
    if isinstance(default, bool):
        return _BOOLS[raw.strip().lower()]
    return type(default)(raw)


def load_config(path=None, overrides=None) -> PipelineConfig:
    """Read key=value lines (``#`` comments allowed); overrides win."""
    values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line: {line!r}")
                key, raw = (s.strip() for s in line.split("=", 1))
                values[key] = _coerce(key, raw)
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    return replace(PipelineConfig(), **values)

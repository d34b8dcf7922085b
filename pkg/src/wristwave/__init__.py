"""Wrist-accelerometer wavelet features and longitudinal GP regression.

Pipeline: raw bilateral triaxial recordings -> gravity-removed vector
magnitude -> orthonormal wavelet decomposition -> per-scale and bilateral
asymmetry features -> L1 feature selection -> linear or GP mixed-effects
prediction of a weekly clinical score, evaluated leave-one-subject-out.
"""

__version__ = "0.1.0"

from . import evaluate, features, ingest, modeling, synth, vm, wavelet  # noqa: F401

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wristwave.synth import SynthConfig, generate_cohort
from wristwave.wavelet import FilterBank


@pytest.fixture(scope="session")
def haar():
    return FilterBank.create("haar")


@pytest.fixture(scope="session")
def db4():
    return FilterBank.create("db4")


@pytest.fixture(scope="session", params=["haar", "db4"])
def bank(request):
    return FilterBank.create(request.param)


@pytest.fixture(scope="session")
def small_cohort(tmp_path_factory):
    """A 2+2 subject cohort on disk, shared across tests."""
    out = tmp_path_factory.mktemp("cohort")
    cfg = SynthConfig(seed=7, n_acute=2, n_chronic=2,
                      seconds_per_visit=128, samples_per_second=10)
    manifest = generate_cohort(cfg, out)
    return manifest


@pytest.fixture
def rng():
    return np.random.default_rng(0)

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from rsscrb._backend import HAVE_NUMBA, use_backend

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
BACKENDS = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    with use_backend(request.param):
        yield request.param


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("RSSCRB_OUTPUT_DIR", str(tmp_path))
    return tmp_path

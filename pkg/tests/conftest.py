import sys

import numpy as np
import pytest

from gradmode import _kernels_py
from gradmode.profiles import GaussianSusyPair, Grid

try:
    from gradmode import _kernels_ext
except ImportError:  # pragma: no cover - pure install
    _kernels_ext = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_ext is not None:
    BACKENDS.append(pytest.param(_kernels_ext, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def oscillator():
    return GaussianSusyPair(n0=1.0, alpha=1.0)


@pytest.fixture
def acceptance_grid():
    return Grid(-8.0, 8.0, 1601)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])

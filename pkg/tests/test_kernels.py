import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gradmode import _kernels_py, kernels

PIVMIN = np.finfo(float).tiny


def _dense(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def _random_tridiag(rng, n):
    return rng.normal(size=n) * 3, rng.normal(size=n - 1)


def test_backend_selected():
    assert kernels.BACKEND in ("python", "cython")


@settings(max_examples=40, deadline=None)
@given(
    d=arrays(np.float64, 12, elements=st.floats(-5, 5)),
    e=arrays(np.float64, 11, elements=st.floats(0.05, 3)),
    x=st.floats(-12, 12),
)
def test_sturm_count_matches_dense(d, e, x):
    lam = np.linalg.eigvalsh(_dense(d, e))
    # skip shifts that sit on an eigenvalue to rounding accuracy
    if np.min(np.abs(lam - x)) < 1e-9:
        return
    pivmin = PIVMIN * max(1.0, np.max(e * e))
    assert _kernels_py.sturm_count(d, e * e, x, pivmin) == int(np.sum(lam < x))


def test_bisection_matches_dense(backend, rng):
    for n in (5, 17, 64):
        d, e = _random_tridiag(rng, n)
        lam = np.linalg.eigvalsh(_dense(d, e))
        r = np.max(np.abs(d)) + 2 * np.max(np.abs(e))
        got = backend.bisect_eigenvalues(d, e * e, 0, n, -r - 1, r + 1, PIVMIN)
        np.testing.assert_allclose(got, lam, rtol=0, atol=1e-13 * r)


def test_bisection_partial_range(backend, rng):
    d, e = _random_tridiag(rng, 30)
    lam = np.linalg.eigvalsh(_dense(d, e))
    got = backend.bisect_eigenvalues(d, e * e, 4, 3, -50.0, 50.0, PIVMIN)
    np.testing.assert_allclose(got, lam[4:7], atol=1e-12)


@pytest.mark.parametrize("shift", [0.0, 0.37, -2.5, 10.0])
def test_shifted_solve_matches_dense(backend, rng, shift):
    d, e = _random_tridiag(rng, 25)
    d[3] = shift  # zero pivot on the diagonal forces the row-swap branch
    b = rng.normal(size=25)
    x = backend.shifted_solve(d, e, shift, b, PIVMIN)
    np.testing.assert_allclose((_dense(d, e) - shift * np.eye(25)) @ x, b, atol=1e-10 * np.max(np.abs(x)))


def test_backends_bit_identical(rng):
    try:
        from gradmode import _kernels_ext
    except ImportError:
        pytest.skip("compiled kernels not built")
    d, e = _random_tridiag(rng, 200)
    b = rng.normal(size=200)
    e2 = e * e
    assert _kernels_py.sturm_count(d, e2, 0.3, PIVMIN) == _kernels_ext.sturm_count(d, e2, 0.3, PIVMIN)
    assert np.array_equal(
        _kernels_py.bisect_eigenvalues(d, e2, 0, 10, -20.0, 20.0, PIVMIN),
        _kernels_ext.bisect_eigenvalues(d, e2, 0, 10, -20.0, 20.0, PIVMIN),
    )
    assert np.array_equal(
        _kernels_py.shifted_solve(d, e, 0.1, b, PIVMIN), _kernels_ext.shifted_solve(d, e, 0.1, b, PIVMIN)
    )


def test_env_forces_pure_python():
    env = dict(os.environ, GRADMODE_PURE_PYTHON="1")
    res = subprocess.run(
        [sys.executable, "-c", "from gradmode import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert res.stdout.strip() == "python"


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")
def test_cli_outputs_independent_of_backend(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "profile": {"kind": "GaussianSusyPair", "n0": 1.0, "alpha": 1.0},
        "grid": {"x_min": -8.0, "x_max": 8.0, "n_points": 401},
        "k0": 5.0,
        "susy_check": True,
    }))
    outs = []
    for flag in ("0", "1"):
        out = tmp_path / flag
        env = dict(os.environ, GRADMODE_PURE_PYTHON=flag)
        subprocess.run([sys.executable, "-m", "gradmode", "run", str(cfg), "--out", str(out), "--quiet"],
                       env=env, check=True)
        outs.append(out)
    for f in ("report.json", "spectrum.csv"):
        assert (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()

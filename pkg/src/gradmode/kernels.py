"""Select the compiled tridiagonal kernels when available, else the pure-Python ones.

Set ``GRADMODE_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("GRADMODE_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_ext as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

sturm_count = _impl.sturm_count
bisect_eigenvalues = _impl.bisect_eigenvalues
shifted_solve = _impl.shifted_solve

__all__ = ["BACKEND", "sturm_count", "bisect_eigenvalues", "shifted_solve"]

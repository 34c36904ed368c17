"""Pure-Python symmetric tridiagonal kernels (fallback for ``_kernels_ext``).

The matrix is given by its diagonal ``d`` (length n) and off-diagonal ``e``
(length n-1); the Sturm routines take the squared off-diagonal ``e2``.
Both implementations follow the same arithmetic step for step.
"""
import numpy as np


def sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues strictly less than ``x``."""
    d = d.tolist() if hasattr(d, "tolist") else d
    e2 = e2.tolist() if hasattr(e2, "tolist") else e2
    return _sturm(d, e2, x, pivmin)


def _sturm(d, e2, x, pivmin):
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def bisect_eigenvalues(d, e2, k_first, k_count, lo, hi, pivmin, max_iter=256):
    """Eigenvalues ``k_first .. k_first+k_count-1`` (ascending, 0-based) by bisection.

    ``[lo, hi]`` must enclose the whole spectrum. Each interval is halved until
    its midpoint is no longer representable strictly inside it.
    """
    dl = d.tolist()
    el = e2.tolist()
    out = np.empty(k_count)
    # bracket reuse: eigenvalue k+1 is never below eigenvalue k
    left = lo
    for j in range(k_count):
        k = k_first + j
        a, b = left, hi
        for _ in range(max_iter):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if _sturm(dl, el, mid, pivmin) > k:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        left = a
    return out


def shifted_solve(d, e, shift, rhs, pivmin):
    """Solve ``(T - shift I) x = rhs`` by LU with partial pivoting.

    Pivots smaller than ``pivmin`` in magnitude are replaced by ``pivmin``; this
    is what makes the routine usable for inverse iteration at an eigenvalue.
    """
    n = len(d)
    dd = [float(v) - shift for v in d.tolist()]
    du = e.tolist() + [0.0]
    dl = e.tolist()
    du2 = [0.0] * n
    piv = [False] * n
    for i in range(n - 1):
        if abs(dd[i]) >= abs(dl[i]):
            if abs(dd[i]) < pivmin:
                dd[i] = pivmin if dd[i] >= 0 else -pivmin
            fact = dl[i] / dd[i]
            dl[i] = fact
            dd[i + 1] -= fact * du[i]
        else:
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            dl[i] = fact
            temp = dd[i + 1]
            dd[i + 1] = du[i] - fact * temp
            du[i] = temp
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            piv[i] = True
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = pivmin if dd[n - 1] >= 0 else -pivmin

    b = rhs.tolist()
    for i in range(n - 1):
        if piv[i]:
            b[i], b[i + 1] = b[i + 1], b[i]
        b[i + 1] -= dl[i] * b[i]
    x = [0.0] * n
    x[n - 1] = b[n - 1] / dd[n - 1]
    if n > 1:
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return np.array(x)

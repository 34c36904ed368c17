# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled symmetric tridiagonal kernels; same API and arithmetic as ``_kernels_py``."""
import numpy as np

from libc.math cimport fabs


cdef inline Py_ssize_t _sturm(const double[::1] d, const double[::1] e2, double x,
                              double pivmin) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def sturm_count(d, e2, double x, double pivmin):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(e2, dtype=np.float64)
    return _sturm(dv, ev, x, pivmin)


def bisect_eigenvalues(d, e2, Py_ssize_t k_first, Py_ssize_t k_count, double lo, double hi,
                       double pivmin, int max_iter=256):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(e2, dtype=np.float64)
    out = np.empty(k_count)
    cdef double[::1] ov = out
    cdef double a, b, mid, left = lo
    cdef Py_ssize_t j, k
    cdef int it
    with nogil:
        for j in range(k_count):
            k = k_first + j
            a = left
            b = hi
            for it in range(max_iter):
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                if _sturm(dv, ev, mid, pivmin) > k:
                    b = mid
                else:
                    a = mid
            ov[j] = 0.5 * (a + b)
            left = a
    return out


def shifted_solve(d, e, double shift, rhs, double pivmin):
    cdef Py_ssize_t n = len(d)
    cdef double[::1] dd = np.array(d, dtype=np.float64) - shift
    du_arr = np.zeros(n)
    du_arr[:n - 1] = e
    cdef double[::1] du = du_arr
    cdef double[::1] dl = np.array(e, dtype=np.float64)
    cdef double[::1] du2 = np.zeros(n)
    cdef unsigned char[::1] piv = np.zeros(n, dtype=np.uint8)
    cdef double[::1] b = np.array(rhs, dtype=np.float64)
    out = np.zeros(n)
    cdef double[::1] x = out
    cdef Py_ssize_t i
    cdef double fact, temp
    with nogil:
        for i in range(n - 1):
            if fabs(dd[i]) >= fabs(dl[i]):
                if fabs(dd[i]) < pivmin:
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
                piv[i] = 1
        if fabs(dd[n - 1]) < pivmin:
            dd[n - 1] = pivmin if dd[n - 1] >= 0 else -pivmin

        for i in range(n - 1):
            if piv[i]:
                temp = b[i]
                b[i] = b[i + 1]
                b[i + 1] = temp
            b[i + 1] -= dl[i] * b[i]
        x[n - 1] = b[n - 1] / dd[n - 1]
        if n > 1:
            x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
        i = n - 3
        while i >= 0:
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
            i -= 1
    return out

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trapezoidal memory convolution (OpenMP over output times)."""

import numpy as np
cimport cython
from cython.parallel cimport prange


def history_convolution(kernel, ops, double h):
    """Q[k] = int_0^{t_k} kernel(t_k - t') ops(t') dt' by the trapezoid rule.

    Same contract as the NumPy fallback: ``kernel`` (K,), ``ops`` (K, d),
    result (K, d) with Q[0] = 0. Each Q[k] is summed serially, so the result
    does not depend on the thread count.
    """
    cdef const double complex[::1] kern = np.ascontiguousarray(kernel, dtype=np.complex128)
    cdef const double complex[:, ::1] a = np.ascontiguousarray(ops, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    if kern.shape[0] < n:
        raise ValueError(f"kernel has {kern.shape[0]} samples, need {n}")
    out_arr = np.zeros((n, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t k, i, c
    cdef double complex w
    for k in prange(1, n, nogil=True, schedule="dynamic", chunksize=16):
        for i in range(k + 1):
            w = kern[k - i]
            for c in range(d):
                out[k, c] += w * a[i, c]
        for c in range(d):
            out[k, c] = h * (out[k, c] - 0.5 * (kern[k] * a[0, c] + kern[0] * a[k, c]))
    return out_arr

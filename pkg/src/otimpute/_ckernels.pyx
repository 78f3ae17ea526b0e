# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled log-domain kernels (hot inner loops of the dual solver)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()

NAME = "c"

cdef double _NEG_INF = -1e308


def lse_update(double[::1] points, double[::1] support, double[::1] logw,
               double[::1] pot, double eps):
    """One log-domain half sweep; see _npkernels.lse_update for semantics."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t m = support.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    base_arr = np.empty(m, dtype=np.float64)
    slope_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] base = base_arr
    cdef double[::1] slope = slope_arr
    cdef Py_ssize_t i, j
    cdef double p, a, mx, s
    with nogil:
        for j in range(m):
            base[j] = logw[j] - pot[j] / eps
            slope[j] = support[j] / eps
        for i in range(n):
            p = points[i]
            mx = _NEG_INF
            for j in range(m):
                a = base[j] + p * slope[j]
                if a > mx:
                    mx = a
            s = 0.0
            for j in range(m):
                s += exp(base[j] + p * slope[j] - mx)
            out[i] = eps * (mx + log(s))
    return out_arr


def tilt_stats(double[::1] points, double[::1] support, double[::1] logw,
               double[::1] pot, double eps):
    """Log-normalizer, mean and variance of the tilted conditional per point."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t m = support.shape[0]
    logz_arr = np.empty(n, dtype=np.float64)
    mean_arr = np.empty(n, dtype=np.float64)
    var_arr = np.empty(n, dtype=np.float64)
    base_arr = np.empty(m, dtype=np.float64)
    slope_arr = np.empty(m, dtype=np.float64)
    buf_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] logz = logz_arr
    cdef double[::1] mean = mean_arr
    cdef double[::1] var = var_arr
    cdef double[::1] base = base_arr
    cdef double[::1] slope = slope_arr
    cdef double[::1] buf = buf_arr
    cdef Py_ssize_t i, j
    cdef double p, a, mx, z, s1, mu, d, s2
    with nogil:
        for j in range(m):
            base[j] = logw[j] - pot[j] / eps
            slope[j] = support[j] / eps
        for i in range(n):
            p = points[i]
            mx = _NEG_INF
            for j in range(m):
                a = base[j] + p * slope[j]
                if a > mx:
                    mx = a
            z = 0.0
            s1 = 0.0
            for j in range(m):
                a = exp(base[j] + p * slope[j] - mx)
                buf[j] = a
                z += a
                s1 += a * support[j]
            mu = s1 / z
            s2 = 0.0
            for j in range(m):
                d = support[j] - mu
                s2 += buf[j] * d * d
            logz[i] = mx + log(z)
            mean[i] = mu
            var[i] = s2 / z
    return logz_arr, mean_arr, var_arr

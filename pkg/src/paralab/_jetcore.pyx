# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled order-3 jet kernels.

Only the canonical entries (i <= j <= k) are computed; every permutation is
then written from that single value so the outputs are symmetric bit for bit.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def mul(double av, const double[::1] ag, const double[:, ::1] ah, const double[:, :, ::1] at,
        double bv, const double[::1] bg, const double[:, ::1] bh, const double[:, :, ::1] bt):
    cdef Py_ssize_t n = ag.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s
    g_arr = np.empty(n)
    h_arr = np.empty((n, n))
    t_arr = np.empty((n, n, n))
    cdef double[::1] g = g_arr
    cdef double[:, ::1] h = h_arr
    cdef double[:, :, ::1] t = t_arr

    for i in range(n):
        g[i] = ag[i] * bv + av * bg[i]
    for i in range(n):
        for j in range(i, n):
            s = ah[i, j] * bv + (ag[i] * bg[j] + ag[j] * bg[i]) + av * bh[i, j]
            h[i, j] = s
            h[j, i] = s
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                s = (at[i, j, k] * bv
                     + (ah[i, j] * bg[k] + ah[i, k] * bg[j] + ah[j, k] * bg[i])
                     + (ag[i] * bh[j, k] + ag[j] * bh[i, k] + ag[k] * bh[i, j])
                     + av * bt[i, j, k])
                t[i, j, k] = s
                t[i, k, j] = s
                t[j, i, k] = s
                t[j, k, i] = s
                t[k, i, j] = s
                t[k, j, i] = s
    return av * bv, g_arr, h_arr, t_arr


def compose(const double[::1] ag, const double[:, ::1] ah, const double[:, :, ::1] at,
            double d1, double d2, double d3):
    """Chain rule for ``u(f)`` given the first three derivatives of ``u`` at ``f``."""
    cdef Py_ssize_t n = ag.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s
    g_arr = np.empty(n)
    h_arr = np.empty((n, n))
    t_arr = np.empty((n, n, n))
    cdef double[::1] g = g_arr
    cdef double[:, ::1] h = h_arr
    cdef double[:, :, ::1] t = t_arr

    for i in range(n):
        g[i] = d1 * ag[i]
    for i in range(n):
        for j in range(i, n):
            s = d2 * (ag[i] * ag[j]) + d1 * ah[i, j]
            h[i, j] = s
            h[j, i] = s
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                s = (d3 * (ag[i] * ag[j] * ag[k])
                     + d2 * (ah[i, j] * ag[k] + ah[i, k] * ag[j] + ah[j, k] * ag[i])
                     + d1 * at[i, j, k])
                t[i, j, k] = s
                t[i, k, j] = s
                t[j, i, k] = s
                t[j, k, i] = s
                t[k, i, j] = s
                t[k, j, i] = s
    return g_arr, h_arr, t_arr

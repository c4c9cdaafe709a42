# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-level DWT kernels.

Same contract as ``_py_kernels``: symmetric-extension analysis with
downsampling by two, and the valid part of the upsampling synthesis.
Operates on batches of streams laid out as C-contiguous (streams, samples).
"""

import numpy as np


cdef inline Py_ssize_t _reflect(Py_ssize_t t, Py_ssize_t n) noexcept nogil:
    while t < 0 or t >= n:
        if t < 0:
            t = -t - 1
        if t >= n:
            t = 2 * n - 1 - t
    return t


def analysis(double[:, ::1] x, double[::1] dec_lo, double[::1] dec_hi):
    cdef Py_ssize_t streams = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t taps = dec_lo.shape[0]
    cdef Py_ssize_t k = (n + taps - 1) // 2
    ca_arr = np.zeros((streams, k))
    cd_arr = np.zeros((streams, k))
    cdef double[:, ::1] ca = ca_arr
    cdef double[:, ::1] cd = cd_arr
    cdef Py_ssize_t s, i, j, t
    cdef double acc_lo, acc_hi, v
    with nogil:
        for s in range(streams):
            for i in range(k):
                acc_lo = 0.0
                acc_hi = 0.0
                for j in range(taps):
                    t = _reflect(2 * i + 1 - j, n)
                    v = x[s, t]
                    acc_lo += dec_lo[j] * v
                    acc_hi += dec_hi[j] * v
                ca[s, i] = acc_lo
                cd[s, i] = acc_hi
    return ca_arr, cd_arr


def synthesis(double[:, ::1] ca, double[:, ::1] cd,
              double[::1] rec_lo, double[::1] rec_hi):
    cdef Py_ssize_t streams = ca.shape[0]
    cdef Py_ssize_t k = ca.shape[1]
    cdef Py_ssize_t taps = rec_lo.shape[0]
    cdef Py_ssize_t out_len = 2 * k - taps + 2
    out_arr = np.zeros((streams, out_len))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t s, m, i, j, lo, hi
    cdef double acc
    with nogil:
        for s in range(streams):
            for m in range(out_len):
                # Full-convolution index; only filter offsets j = (m + taps - 2) - 2*i
                # with 0 <= j < taps contribute.
                lo = m // 2
                hi = (m + taps - 2) // 2
                if hi > k - 1:
                    hi = k - 1
                acc = 0.0
                for i in range(lo, hi + 1):
                    j = m + taps - 2 - 2 * i
                    acc += ca[s, i] * rec_lo[j] + cd[s, i] * rec_hi[j]
                out[s, m] = acc
    return out_arr

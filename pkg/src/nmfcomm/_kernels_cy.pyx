# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled solver kernels: BLAS dgemm for the matrix products plus fused
elementwise passes, avoiding the large temporaries of the numpy path.

Semantics match ``_kernels_py`` exactly (same formulas, same eps floors);
tests assert numerical parity between the two backends.
"""

import numpy as np

from libc.math cimport log
from scipy.linalg.cython_blas cimport dgemm

BACKEND = "compiled"


cdef void _gemm_nn(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # Row-major C = A @ B via the column-major identity C^T = B^T A^T.
    cdef int m = a.shape[0], k = a.shape[1], n = b.shape[1]
    cdef double one = 1.0, zero = 0.0
    dgemm("N", "N", &n, &m, &k, &one, &b[0, 0], &n, &a[0, 0], &k, &zero, &out[0, 0], &n)


cdef void _gemm_tn(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # Row-major C = A.T @ B with A (p x m), B (p x n), C (m x n).
    cdef int p = a.shape[0], m = a.shape[1], n = b.shape[1]
    cdef double one = 1.0, zero = 0.0
    dgemm("N", "T", &n, &m, &p, &one, &b[0, 0], &n, &a[0, 0], &m, &zero, &out[0, 0], &n)


cdef void _gemm_nt(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # Row-major C = A @ B.T with A (m x p), B (n x p), C (m x n).
    cdef int m = a.shape[0], p = a.shape[1], n = b.shape[0]
    cdef double one = 1.0, zero = 0.0
    dgemm("T", "N", &n, &m, &p, &one, &b[0, 0], &p, &a[0, 0], &p, &zero, &out[0, 0], &n)


def reconstruct(double[:, ::1] w, double[:, ::1] h):
    out = np.empty((w.shape[0], h.shape[1]))
    cdef double[:, ::1] mv = out
    with nogil:
        _gemm_nn(w, h, mv)
    return out


def kl_data_fit(double[:, ::1] v, double[:, ::1] v_hat, double eps):
    cdef Py_ssize_t i, j
    cdef double total = 0.0, vij, vh
    with nogil:
        for i in range(v.shape[0]):
            for j in range(v.shape[1]):
                vij = v[i, j]
                vh = v_hat[i, j]
                total += vh
                if vij > 0.0:
                    total += vij * log(vij / (vh if vh > eps else eps))
    return total


def multiplicative_update_h(double[:, ::1] v, double[:, ::1] w,
                            double[:, ::1] h, double[::1] beta, double eps):
    cdef Py_ssize_t n = v.shape[0], k = w.shape[1]
    cdef Py_ssize_t i, j, kk
    ratio_arr = np.empty((n, n))
    numer_arr = np.empty((k, n))
    colsum_arr = np.zeros(k)
    out_arr = np.empty((k, n))
    cdef double[:, ::1] ratio = ratio_arr
    cdef double[:, ::1] numer = numer_arr
    cdef double[::1] colsum = colsum_arr
    cdef double[:, ::1] out = out_arr
    cdef double vh, denom
    with nogil:
        _gemm_nn(w, h, ratio)
        for i in range(n):
            for j in range(n):
                vh = ratio[i, j]
                ratio[i, j] = v[i, j] / (vh if vh > eps else eps)
        _gemm_tn(w, ratio, numer)
        for i in range(n):
            for kk in range(k):
                colsum[kk] += w[i, kk]
        for kk in range(k):
            for j in range(n):
                denom = colsum[kk] + beta[kk] * h[kk, j]
                if denom < eps:
                    denom = eps
                vh = h[kk, j] * numer[kk, j] / denom
                out[kk, j] = vh if vh > eps else eps
    return out_arr


def multiplicative_update_w(double[:, ::1] v, double[:, ::1] w,
                            double[:, ::1] h, double[::1] beta, double eps):
    cdef Py_ssize_t n = v.shape[0], k = w.shape[1]
    cdef Py_ssize_t i, j, kk
    ratio_arr = np.empty((n, n))
    numer_arr = np.empty((n, k))
    rowsum_arr = np.zeros(k)
    out_arr = np.empty((n, k))
    cdef double[:, ::1] ratio = ratio_arr
    cdef double[:, ::1] numer = numer_arr
    cdef double[::1] rowsum = rowsum_arr
    cdef double[:, ::1] out = out_arr
    cdef double vh, denom
    with nogil:
        _gemm_nn(w, h, ratio)
        for i in range(n):
            for j in range(n):
                vh = ratio[i, j]
                ratio[i, j] = v[i, j] / (vh if vh > eps else eps)
        _gemm_nt(ratio, h, numer)
        for kk in range(k):
            for j in range(n):
                rowsum[kk] += h[kk, j]
        for i in range(n):
            for kk in range(k):
                denom = rowsum[kk] + w[i, kk] * beta[kk]
                if denom < eps:
                    denom = eps
                vh = w[i, kk] * numer[i, kk] / denom
                out[i, kk] = vh if vh > eps else eps
    return out_arr

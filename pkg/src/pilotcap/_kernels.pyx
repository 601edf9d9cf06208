# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Cholesky, triangular solves, cyclic Jacobi, SplitMix64
Box-Muller normals and the Monte Carlo accumulation loop.

Mirrors pilotcap._fallback exactly in signatures and return conventions.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, fabs
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double TWO_POW_M53 = 1.0 / 9007199254740992.0
cdef double TWO_PI = 6.283185307179586


cdef inline uint64_t _splitmix(uint64_t seed, uint64_t k) noexcept nogil:
    cdef uint64_t z = seed + (k + 1) * GAMMA
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t seed, uint64_t k) noexcept nogil:
    return <double>((_splitmix(seed, k) >> 11) + 1) * TWO_POW_M53


cdef inline void _normals(uint64_t seed, uint64_t start, Py_ssize_t n, double* out) noexcept nogil:
    cdef Py_ssize_t i = 0
    cdef double r, theta
    cdef uint64_t k = start
    while i < n:
        r = sqrt(-2.0 * log(_uniform(seed, k)))
        theta = TWO_PI * _uniform(seed, k + 1)
        out[i] = r * cos(theta)
        if i + 1 < n:
            out[i + 1] = r * sin(theta)
        i += 2
        k += 2


def cholesky_lower(a, double tol):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t m = A.shape[0]
    L_arr = np.zeros((m, m))
    cdef double[:, ::1] L = L_arr
    cdef Py_ssize_t i, j, k
    cdef double d, s
    for j in range(m):
        d = A[j, j]
        for k in range(j):
            d -= L[j, k] * L[j, k]
        if not d > tol:
            return L_arr, j, d
        L[j, j] = sqrt(d)
        for i in range(j + 1, m):
            s = A[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / L[j, j]
    return L_arr, -1, 0.0


def cho_solve(L_in, b_in):
    cdef const double[:, ::1] L = np.ascontiguousarray(L_in, dtype=np.float64)
    b_arr = np.asarray(b_in, dtype=np.float64)
    x_arr = np.array(b_arr.reshape(b_arr.shape[0], -1), dtype=np.float64, order="C")
    cdef double[:, ::1] x = x_arr
    cdef Py_ssize_t m = L.shape[0], ncol = x.shape[1]
    cdef Py_ssize_t i, k, c
    cdef double s
    for c in range(ncol):
        for i in range(m):
            s = x[i, c]
            for k in range(i):
                s -= L[i, k] * x[k, c]
            x[i, c] = s / L[i, i]
        for i in range(m - 1, -1, -1):
            s = x[i, c]
            for k in range(i + 1, m):
                s -= L[k, i] * x[k, c]
            x[i, c] = s / L[i, i]
    return x_arr.reshape(b_arr.shape)


def jacobi_eigh(a, int max_sweeps, double rtol):
    A_arr = np.array(a, dtype=np.float64, order="C")
    cdef double[:, ::1] A = A_arr
    cdef Py_ssize_t m = A.shape[0]
    V_arr = np.eye(m)
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t p, q, r
    cdef double scale = 0.0, off, apq, theta, t, c, s, xp, xq
    cdef int sweeps = 0
    for p in range(m):
        for q in range(m):
            scale += A[p, q] * A[p, q]
    scale = sqrt(scale)
    while True:
        off = 0.0
        for p in range(m):
            for q in range(m):
                if p != q:
                    off += A[p, q] * A[p, q]
        off = sqrt(off)
        if not off > rtol * scale:
            return np.diag(A_arr).copy(), V_arr, sweeps, True
        if sweeps >= max_sweeps:
            return np.diag(A_arr).copy(), V_arr, sweeps, False
        sweeps += 1
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for r in range(m):
                    xp = A[r, p]
                    xq = A[r, q]
                    A[r, p] = c * xp - s * xq
                    A[r, q] = s * xp + c * xq
                for r in range(m):
                    xp = A[p, r]
                    xq = A[q, r]
                    A[p, r] = c * xp - s * xq
                    A[q, r] = s * xp + c * xq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for r in range(m):
                    xp = V[r, p]
                    xq = V[r, q]
                    V[r, p] = c * xp - s * xq
                    V[r, q] = s * xp + c * xq


def splitmix64(uint64_t seed, uint64_t start, Py_ssize_t n):
    out_arr = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _splitmix(seed, start + <uint64_t>i)
    return out_arr


def uniforms(uint64_t seed, uint64_t start, Py_ssize_t n):
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _uniform(seed, start + <uint64_t>i)
    return out_arr


def normals(uint64_t seed, uint64_t start, Py_ssize_t n):
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    if n > 0:
        _normals(seed, start, n, &out[0])
    return out_arr


def mmse_trials(factor, gain, double x_tau, Py_ssize_t t_tau, uint64_t seed,
                uint64_t start, Py_ssize_t n_trials):
    cdef const double[:, ::1] F = np.ascontiguousarray(factor, dtype=np.float64)
    cdef const double[:, ::1] G = np.ascontiguousarray(gain, dtype=np.float64)
    cdef Py_ssize_t m = F.shape[0]
    cdef Py_ssize_t k = m * (1 + t_tau)
    cdef Py_ssize_t stride = k + (k & 1)
    s_hh_arr = np.zeros((m, m))
    s_tt_arr = np.zeros((m, m))
    s_ht_arr = np.zeros((m, m))
    s_ht2_arr = np.zeros((m, m))
    cdef double[:, ::1] s_hh = s_hh_arr
    cdef double[:, ::1] s_tt = s_tt_arr
    cdef double[:, ::1] s_ht = s_ht_arr
    cdef double[:, ::1] s_ht2 = s_ht2_arr
    z_arr = np.empty(stride)
    h_arr = np.empty(m)
    ybar_arr = np.empty(m)
    hhat_arr = np.empty(m)
    herr_arr = np.empty(m)
    cdef double[::1] z = z_arr
    cdef double[::1] h = h_arr
    cdef double[::1] ybar = ybar_arr
    cdef double[::1] hhat = hhat_arr
    cdef double[::1] herr = herr_arr
    cdef Py_ssize_t trial, i, j, t
    cdef double acc, prod
    cdef double inv_t = 1.0 / <double>t_tau
    with nogil:
        for trial in range(n_trials):
            _normals(seed, start + <uint64_t>(trial * stride), stride, &z[0])
            for i in range(m):
                acc = 0.0
                for j in range(m):
                    acc = acc + F[i, j] * z[j]
                h[i] = acc
            for i in range(m):
                acc = 0.0
                for t in range(t_tau):
                    acc = acc + z[m + t * m + i]
                ybar[i] = x_tau * h[i] + acc * inv_t
            for i in range(m):
                acc = 0.0
                for j in range(m):
                    acc = acc + G[i, j] * ybar[j]
                hhat[i] = acc
                herr[i] = h[i] - acc
            for i in range(m):
                for j in range(m):
                    s_hh[i, j] += hhat[i] * hhat[j]
                    s_tt[i, j] += herr[i] * herr[j]
                    prod = hhat[i] * herr[j]
                    s_ht[i, j] += prod
                    s_ht2[i, j] += prod * prod
    return s_hh_arr, s_tt_arr, s_ht_arr, s_ht2_arr

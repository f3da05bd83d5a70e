# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, int8_t

cnp.import_array()

ctypedef double complex cplx


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _parity(uint64_t v) nogil:
    return __builtin_popcountll(v) & 1


def apply_matrix1(cplx[::1] psi, int n, int q, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t step = 1 << (n - 1 - q)
    cdef Py_ssize_t base, j
    cdef cplx a0, a1
    with nogil:
        base = 0
        while base < size:
            for j in range(base, base + step):
                a0 = psi[j]
                a1 = psi[j + step]
                psi[j] = m00 * a0 + m01 * a1
                psi[j + step] = m10 * a0 + m11 * a1
            base += 2 * step


def apply_diag1(cplx[::1] psi, int n, int q, cplx d0, cplx d1):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t bit = 1 << (n - 1 - q)
    cdef Py_ssize_t i
    cdef bint scale0 = d0 != 1
    with nogil:
        for i in range(size):
            if i & bit:
                psi[i] = psi[i] * d1
            elif scale0:
                psi[i] = psi[i] * d0


def apply_x(cplx[::1] psi, int n, int q):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t bit = 1 << (n - 1 - q)
    cdef Py_ssize_t i
    cdef cplx tmp
    with nogil:
        for i in range(size):
            if not (i & bit):
                tmp = psi[i]
                psi[i] = psi[i | bit]
                psi[i | bit] = tmp


def apply_cnot(cplx[::1] psi, int n, int c, int t):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t cb = 1 << (n - 1 - c)
    cdef Py_ssize_t tb = 1 << (n - 1 - t)
    cdef Py_ssize_t i
    cdef cplx tmp
    with nogil:
        for i in range(size):
            if (i & cb) and not (i & tb):
                tmp = psi[i]
                psi[i] = psi[i | tb]
                psi[i | tb] = tmp


def apply_cz(cplx[::1] psi, int n, int a, int b):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t m = (1 << (n - 1 - a)) | (1 << (n - 1 - b))
    cdef Py_ssize_t i
    with nogil:
        for i in range(size):
            if (i & m) == m:
                psi[i] = -psi[i]


def apply_ccz(cplx[::1] psi, int n, int a, int b, int c):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t m = (1 << (n - 1 - a)) | (1 << (n - 1 - b)) | (1 << (n - 1 - c))
    cdef Py_ssize_t i
    with nogil:
        for i in range(size):
            if (i & m) == m:
                psi[i] = -psi[i]


def apply_pauli(cplx[::1] psi, int n, uint64_t xbits, uint64_t zbits, cplx phase):
    cdef Py_ssize_t size = psi.shape[0]
    cdef Py_ssize_t i, j
    cdef cplx a, b
    with nogil:
        if zbits:
            for i in range(size):
                if _parity(<uint64_t>i & zbits):
                    psi[i] = -psi[i]
        if xbits:
            for i in range(size):
                j = i ^ <Py_ssize_t>xbits
                if i < j:
                    a = psi[i]
                    psi[i] = psi[j]
                    psi[j] = a
        if phase != 1:
            for i in range(size):
                psi[i] = psi[i] * phase


def postselect_decode(outcomes, check_masks, uint64_t flag_mask, decode_masks):
    cdef uint64_t[::1] outs = np.ascontiguousarray(outcomes, dtype=np.uint64)
    cdef uint64_t[::1] checks = np.ascontiguousarray(check_masks, dtype=np.uint64)
    cdef uint64_t[::1] decs = np.ascontiguousarray(decode_masks, dtype=np.uint64)
    cdef Py_ssize_t size = outs.shape[0]
    cdef Py_ssize_t nc = checks.shape[0]
    cdef Py_ssize_t nd = decs.shape[0]
    status_arr = np.zeros(size, dtype=np.int8)
    decoded_arr = np.zeros(size, dtype=np.int64)
    cdef int8_t[::1] status = status_arr
    cdef int64_t[::1] decoded = decoded_arr
    cdef Py_ssize_t i, j
    cdef uint64_t o
    cdef int64_t acc
    with nogil:
        for i in range(size):
            o = outs[i]
            if o & flag_mask:
                status[i] = 1
            else:
                for j in range(nc):
                    if _parity(o & checks[j]):
                        status[i] = 2
                        break
            acc = 0
            for j in range(nd):
                acc = (acc << 1) | _parity(o & decs[j])
            decoded[i] = acc
    return status_arr, decoded_arr


def sample_cdf(const double[::1] cdf, u):
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t size = uu.shape[0]
    cdef Py_ssize_t m = cdf.shape[0]
    out_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef Py_ssize_t i, lo, hi, mid
    cdef double x
    with nogil:
        for i in range(size):
            x = uu[i]
            lo = 0
            hi = m - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if x < cdf[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            out[i] = lo
    return out_arr

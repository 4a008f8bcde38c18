# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: batched 3x3 complex matrix exponentials.

Same contract as the pure-NumPy twin in ``pure.py``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

ctypedef double complex cplx

cdef int TAYLOR_ORDER = 12
cdef double SCALE_LIMIT = 0.5


cdef inline void _matmul3(const cplx* a, const cplx* b, cplx* out) nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (a[3 * i] * b[j]
                              + a[3 * i + 1] * b[3 + j]
                              + a[3 * i + 2] * b[6 + j])


cdef void _expm3(const cplx* m, cplx* out) nogil:
    cdef cplx a[9]
    cdef cplx term[9]
    cdef cplx tmp[9]
    cdef double norm = 0.0, row
    cdef double scale = 1.0, inv
    cdef int i, j, k = 0

    for i in range(3):
        # |re| + |im| bounds |.|; only the scaling power needs the norm
        row = 0.0
        for j in range(3):
            row += (m[3 * i + j].real if m[3 * i + j].real >= 0 else -m[3 * i + j].real) \
                 + (m[3 * i + j].imag if m[3 * i + j].imag >= 0 else -m[3 * i + j].imag)
        if row > norm:
            norm = row
    while norm > SCALE_LIMIT and k < 60:
        norm *= 0.5
        scale *= 0.5
        k += 1

    for i in range(9):
        a[i] = m[i] * scale
        term[i] = a[i]
        out[i] = a[i]
    out[0] += 1.0
    out[4] += 1.0
    out[8] += 1.0
    for j in range(2, TAYLOR_ORDER + 1):
        _matmul3(term, a, tmp)
        inv = 1.0 / j
        for i in range(9):
            term[i] = tmp[i] * inv
            out[i] += term[i]
    for j in range(k):
        _matmul3(out, out, tmp)
        for i in range(9):
            out[i] = tmp[i]


def expm3(m):
    """exp(M) for a single 3x3 complex matrix."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] mm = np.ascontiguousarray(m, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] out = np.empty((3, 3), dtype=np.complex128)
    _expm3(<cplx*> mm.data, <cplx*> out.data)
    return out


def expm3_batch(ms):
    """exp(M) for a stack of 3x3 complex matrices, shape (..., 3, 3)."""
    arr = np.ascontiguousarray(ms, dtype=np.complex128)
    shape = arr.shape
    cdef cnp.ndarray[cplx, ndim=3, mode="c"] flat = arr.reshape(-1, 3, 3)
    cdef cnp.ndarray[cplx, ndim=3, mode="c"] out = np.empty_like(flat)
    cdef Py_ssize_t n = flat.shape[0], i
    cdef cplx* src = <cplx*> flat.data
    cdef cplx* dst = <cplx*> out.data
    with nogil:
        for i in range(n):
            _expm3(src + 9 * i, dst + 9 * i)
    return out.reshape(shape)


def group_orbit_apply(g1, g2, s1, s2, z):
    """exp(s1[i]*G1 + s2[i]*G2) @ z[i] for each i."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] a1 = np.ascontiguousarray(g1, dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] a2 = np.ascontiguousarray(g2, dtype=np.complex128)
    cdef cnp.ndarray[double, ndim=1, mode="c"] t1 = np.ascontiguousarray(s1, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] t2 = np.ascontiguousarray(s2, dtype=np.float64)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = t1.shape[0], i
    cdef int j
    if t2.shape[0] != n or zz.shape[0] != n:
        raise ValueError("s1, s2 and z must share their leading dimension")
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] out = np.empty((n, 3), dtype=np.complex128)
    cdef cplx m[9]
    cdef cplx e[9]
    cdef cplx* p1 = <cplx*> a1.data
    cdef cplx* p2 = <cplx*> a2.data
    cdef cplx* pz = <cplx*> zz.data
    cdef cplx* po = <cplx*> out.data
    with nogil:
        for i in range(n):
            for j in range(9):
                m[j] = t1[i] * p1[j] + t2[i] * p2[j]
            _expm3(m, e)
            for j in range(3):
                po[3 * i + j] = (e[3 * j] * pz[3 * i]
                                 + e[3 * j + 1] * pz[3 * i + 1]
                                 + e[3 * j + 2] * pz[3 * i + 2])
    return out

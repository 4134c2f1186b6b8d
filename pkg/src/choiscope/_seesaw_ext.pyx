# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled see-saw kernel. Same contract as ``choiscope._seesaw_py``.

The whole alternating loop runs without the GIL; eigenproblems go to LAPACK
``zheev`` through scipy's Cython bindings. Work matrices are kept in
column-major order as LAPACK expects.
"""

import numpy as np
from libc.math cimport INFINITY
from scipy.linalg.cython_lapack cimport zheev

ctypedef double complex cplx

NAME = "compiled"


cdef void _contract_output(const cplx[:, :, :, ::1] J, const cplx* a, cplx* out,
                           int da, int db) noexcept nogil:
    cdef int i, j, m, n
    cdef cplx s, t
    for n in range(db):
        for m in range(db):
            s = 0
            for i in range(da):
                t = 0
                for j in range(da):
                    t = t + a[j].conjugate() * J[i, m, j, n]
                s = s + a[i] * t
            out[m + n * db] = s


cdef void _contract_input(const cplx[:, :, :, ::1] J, const cplx* b, cplx* out,
                          int da, int db) noexcept nogil:
    cdef int i, j, m, n
    cdef cplx s, t
    for j in range(da):
        for i in range(da):
            s = 0
            for m in range(db):
                t = 0
                for n in range(db):
                    t = t + b[n] * J[i, m, j, n]
                s = s + b[m].conjugate() * t
            out[i + j * da] = s


cdef double _min_eig(cplx* mat, int n, double* w, cplx* work, int lwork,
                     double* rwork, cplx* vec_out, int* info) noexcept nogil:
    cdef char jobz = c'V'
    cdef char uplo = c'L'
    cdef int k
    zheev(&jobz, &uplo, &n, mat, &n, w, work, &lwork, rwork, info)
    for k in range(n):
        vec_out[k] = mat[k]
    return w[0]


def contract_output(j4, a):
    cdef const cplx[:, :, :, ::1] J = np.ascontiguousarray(j4, dtype=np.complex128)
    cdef cplx[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int da = J.shape[0], db = J.shape[1]
    out = np.empty(db * db, dtype=np.complex128)
    cdef cplx[::1] ov = out
    _contract_output(J, &av[0], &ov[0], da, db)
    return out.reshape(db, db, order="F")


def contract_input(j4, b):
    cdef const cplx[:, :, :, ::1] J = np.ascontiguousarray(j4, dtype=np.complex128)
    cdef cplx[::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef int da = J.shape[0], db = J.shape[1]
    out = np.empty(da * da, dtype=np.complex128)
    cdef cplx[::1] ov = out
    _contract_input(J, &bv[0], &ov[0], da, db)
    return out.reshape(da, da, order="F")


def seesaw(j4, a0, int max_iters, double stop_tol):
    cdef const cplx[:, :, :, ::1] J = np.ascontiguousarray(j4, dtype=np.complex128)
    cdef int da = J.shape[0], db = J.shape[1]
    cdef int nmax = max(da, db)
    cdef int lwork = max(1, 33 * nmax)

    a_arr = np.array(a0, dtype=np.complex128).reshape(-1)
    a_arr /= np.linalg.norm(a_arr)
    b_arr = np.zeros(db, dtype=np.complex128)
    hist_arr = np.empty(2 * max(max_iters, 0), dtype=float)
    cdef cplx[::1] a = a_arr
    cdef cplx[::1] b = b_arr
    cdef double[::1] hist = hist_arr
    cdef cplx[::1] x = np.empty(da, dtype=np.complex128)
    cdef cplx[::1] mb = np.empty(db * db, dtype=np.complex128)
    cdef cplx[::1] ma = np.empty(da * da, dtype=np.complex128)
    cdef double[::1] w = np.empty(nmax, dtype=float)
    cdef cplx[::1] work = np.empty(lwork, dtype=np.complex128)
    cdef double[::1] rwork = np.empty(max(1, 3 * nmax - 2), dtype=float)

    cdef int it = 0, info = 0, i
    cdef double prev = INFINITY, value = INFINITY, lam_b

    with nogil:
        while it < max_iters:
            _contract_output(J, &a[0], &mb[0], da, db)
            lam_b = _min_eig(&mb[0], db, &w[0], &work[0], lwork, &rwork[0], &b[0], &info)
            if info != 0:
                break
            hist[2 * it] = lam_b
            _contract_input(J, &b[0], &ma[0], da, db)
            value = _min_eig(&ma[0], da, &w[0], &work[0], lwork, &rwork[0], &x[0], &info)
            if info != 0:
                break
            for i in range(da):
                a[i] = x[i].conjugate()
            hist[2 * it + 1] = value
            it += 1
            if prev - value <= stop_tol:
                break
            prev = value

    if info != 0:
        raise ArithmeticError(f"zheev failed with info={info}")
    return a_arr, b_arr, float(value), hist_arr[: 2 * it].copy(), it

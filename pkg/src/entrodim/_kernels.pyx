# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batched IMEX-Euler stepping and farthest-point ordering.

Semantics match entrodim._kernels_py; see that module for documentation.
BLAS calls go through scipy's bundled implementation.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, INFINITY
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_NAN = 2


def imex_steps(
    cnp.ndarray[cnp.float64_t, ndim=2] C not None,
    cnp.ndarray[cnp.float64_t, ndim=2] S not None,
    cnp.ndarray[cnp.float64_t, ndim=1] denom not None,
    double dt_w,
    double beta,
    double pexp,
    long nsteps,
    double blow_sq,
    long check_every,
    cnp.ndarray[cnp.float64_t, ndim=1] lamj=None,
    cnp.ndarray[cnp.float64_t, ndim=2] w_out=None,
    cnp.ndarray[cnp.float64_t, ndim=2] v_out=None,
    bint pair_mode=False,
    long offset=0,
):
    # C is (E, M) C-contiguous: its buffer is the column-major (M, E) matrix C'.
    # S is (K, M) C-contiguous: its buffer is the column-major (M, K) matrix S'.
    cdef long E = C.shape[0]
    cdef long M = C.shape[1]
    cdef long K = S.shape[0]
    if S.shape[1] != M:
        raise ValueError("synthesis matrix has wrong mode count")
    # the state is updated in place; a silent copy would orphan the caller
    if not C.flags.c_contiguous or not S.flags.c_contiguous:
        raise ValueError("imex_steps needs C-contiguous state and synthesis arrays")

    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.empty((E, K), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] GH = np.empty((E, M), dtype=np.float64)

    cdef double* cptr = <double*> C.data
    cdef double* sptr = <double*> S.data
    cdef double* vptr = <double*> V.data
    cdef double* gptr = <double*> GH.data
    cdef double* dptr = <double*> denom.data
    cdef double* lamptr = NULL
    if lamj is not None:
        lamptr = <double*> lamj.data

    cdef int mi = <int> M, ki = <int> K, ei = <int> E
    cdef double one = 1.0, zero = 0.0
    cdef double x, w, vv, d
    cdef long n, e, j, k, R
    cdef bint record = w_out is not None
    cdef bint cubic = pexp == 4.0
    cdef double pm2 = pexp - 2.0
    cdef int status = STATUS_OK

    for n in range(1, nsteps + 1):
        # V' (K, E) = S'^T (K, M) @ C' (M, E)
        dgemm("T", "N", &ki, &ei, &mi, &one, sptr, &mi, cptr, &mi, &zero, vptr, &ki)
        if cubic:
            for k in range(E * K):
                x = vptr[k]
                vptr[k] = beta * x * x * x
        else:
            for k in range(E * K):
                x = vptr[k]
                vptr[k] = beta * x * pow(fabs(x), pm2)
        # GH' (M, E) = S' (M, K) @ V' (K, E)
        dgemm("N", "N", &mi, &ei, &ki, &one, sptr, &mi, vptr, &ki, &zero, gptr, &mi)
        for e in range(E):
            for j in range(M):
                cptr[e * M + j] = (cptr[e * M + j] - dt_w * gptr[e * M + j]) / dptr[j]
        if record:
            if pair_mode:
                R = E // 2
                for e in range(R):
                    w = 0.0
                    vv = 0.0
                    for j in range(M):
                        d = cptr[2 * e * M + j] - cptr[(2 * e + 1) * M + j]
                        w += d * d
                        vv += lamptr[j] * d * d
                    w_out[offset + n, e] = w
                    v_out[offset + n, e] = vv
            else:
                for e in range(E):
                    w = 0.0
                    vv = 0.0
                    for j in range(M):
                        d = cptr[e * M + j]
                        w += d * d
                        vv += lamptr[j] * d * d
                    w_out[offset + n, e] = w
                    v_out[offset + n, e] = vv
        if n % check_every == 0 or n == nsteps:
            for e in range(E):
                w = 0.0
                for j in range(M):
                    w += cptr[e * M + j] * cptr[e * M + j]
                if w != w:
                    return STATUS_NAN, n
                if w > blow_sq:
                    return STATUS_BLOWUP, n
    return STATUS_OK, nsteps


def fps_radii(
    cnp.ndarray[cnp.float64_t, ndim=2] points not None,
    double stop_radius=0.0,
    long start_index=0,
):
    points = np.ascontiguousarray(points)
    cdef long n = points.shape[0]
    cdef long dim = points.shape[1]
    cdef double* p = <double*> points.data
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dmin = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] sel = np.empty(n, dtype=np.intp)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rad = np.empty(n, dtype=np.float64)
    cdef long i, j, k, best, cur, count
    cdef double s, d, rbest

    cur = start_index
    sel[0] = cur
    rad[0] = INFINITY
    count = 1
    for i in range(n):
        s = 0.0
        for j in range(dim):
            d = p[i * dim + j] - p[cur * dim + j]
            s += d * d
        dmin[i] = sqrt(s)

    while count < n:
        best = 0
        rbest = dmin[0]
        for i in range(1, n):
            if dmin[i] > rbest:
                rbest = dmin[i]
                best = i
        if rbest <= stop_radius:
            break
        sel[count] = best
        rad[count] = rbest
        count += 1
        for i in range(n):
            s = 0.0
            for j in range(dim):
                d = p[i * dim + j] - p[best * dim + j]
                s += d * d
            s = sqrt(s)
            if s < dmin[i]:
                dmin[i] = s
    return np.asarray(sel[:count]).copy(), np.asarray(rad[:count]).copy()

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_kernels_py``; same signatures."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"

DEF MAXL = 32


cdef inline bint _next_perm(int* a, int n) nogil:
    cdef int i = n - 2, j, t
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    t = a[i]; a[i] = a[j]; a[j] = t
    i += 1
    j = n - 1
    while i < j:
        t = a[i]; a[i] = a[j]; a[j] = t
        i += 1
        j -= 1
    return True


cdef inline bint _contains(int* tau, int* chain, int M, int L) nogil:
    cdef int i, k, prev, cur
    cdef bint ok
    for i in range(M - L + 1):
        prev = tau[i + chain[0]]
        ok = True
        for k in range(1, L):
            cur = tau[i + chain[k]]
            if cur < prev:
                ok = False
                break
            prev = cur
        if ok:
            return True
    return False


cdef void _load(object pinv, int* chain, int* L):
    cdef int i
    L[0] = len(pinv)
    if L[0] > MAXL:
        raise ValueError("pattern too long for kernel")
    for i in range(L[0]):
        chain[<int>pinv[i]] = i


def count_outgrowths(int M, pinv):
    cdef int chain[MAXL]
    cdef int tau[MAXL]
    cdef int L, i
    cdef long long count = 0
    if M > MAXL:
        raise ValueError("M too large for kernel")
    _load(pinv, chain, &L)
    for i in range(M):
        tau[i] = i
    with nogil:
        while True:
            if _contains(tau, chain, M, L):
                count += 1
            if not _next_perm(tau, M):
                break
    return int(count)


def outgrowth_table(int M, pinv):
    cdef int chain[MAXL]
    cdef int tau[MAXL]
    cdef int L, i
    cdef long long row = 0
    if M > MAXL:
        raise ValueError("M too large for kernel")
    _load(pinv, chain, &L)
    n = count_outgrowths(M, pinv)
    out = np.empty((n, M), dtype=np.int8)
    cdef signed char[:, ::1] view = out
    for i in range(M):
        tau[i] = i
    with nogil:
        while True:
            if _contains(tau, chain, M, L):
                for i in range(M):
                    view[row, tau[i]] = <signed char>i
                row += 1
            if not _next_perm(tau, M):
                break
    return out


def window_codes(values, int L):
    cdef const double[::1] x = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], w, i, j, nw
    cdef int idx[MAXL]
    cdef int64_t fact[MAXL]
    cdef int t, a, b, smaller
    cdef int64_t code
    cdef bint tie
    if L > MAXL:
        raise ValueError("window too long for kernel")
    if L > n:
        return np.empty(0, dtype=np.int64)
    nw = n - L + 1
    out = np.empty(nw, dtype=np.int64)
    cdef int64_t[::1] res = out
    fact[0] = 1
    for i in range(1, L):
        fact[i] = fact[i - 1] * i
    with nogil:
        for w in range(nw):
            # stable insertion argsort of the window
            for i in range(L):
                idx[i] = <int>i
            for i in range(1, L):
                t = idx[i]
                j = i - 1
                while j >= 0 and x[w + idx[j]] > x[w + t]:
                    idx[j + 1] = idx[j]
                    j -= 1
                idx[j + 1] = t
            tie = False
            for i in range(L - 1):
                if x[w + idx[i]] == x[w + idx[i + 1]]:
                    tie = True
                    break
            if tie:
                res[w] = -1
                continue
            code = 0
            for a in range(L - 1):
                smaller = 0
                for b in range(a + 1, L):
                    if idx[b] < idx[a]:
                        smaller += 1
                code += smaller * fact[L - 1 - a]
            res[w] = code
    return out


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


def xoshiro_fill(cnp.ndarray state, double[::1] out):
    cdef uint64_t[::1] st = state
    cdef uint64_t s0 = st[0], s1 = st[1], s2 = st[2], s3 = st[3]
    cdef uint64_t result, t
    cdef Py_ssize_t i
    cdef double scale = 1.0 / 9007199254740992.0
    with nogil:
        for i in range(out.shape[0]):
            result = _rotl(s1 * 5, 7) * 9
            t = s1 << 17
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = _rotl(s3, 45)
            out[i] = (result >> 11) * scale
    st[0] = s0
    st[1] = s1
    st[2] = s2
    st[3] = s3

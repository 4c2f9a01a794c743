# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith normal form kernel on 64-bit integers.

Mirrors ``_snf_py.snf`` exactly. Any intermediate that leaves the int64 range
raises ``OverflowError`` so the caller can redo the work with Python ints.
"""

from libc.limits cimport LLONG_MIN
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int pf_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int pf_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int pf_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int pf_mul(long long a, long long b, long long *r) nogil
    int pf_add(long long a, long long b, long long *r) nogil
    int pf_sub(long long a, long long b, long long *r) nogil


cdef inline long long floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long absval(long long a) nogil:
    return -a if a < 0 else a


cdef int axpy(long long *dst, long long *src, long long q, Py_ssize_t count,
              Py_ssize_t stride) nogil:
    # dst[k*stride] += q * src[k*stride]; returns 1 on overflow
    cdef Py_ssize_t k
    cdef long long prod, s
    for k in range(count):
        s = src[k * stride]
        if s != 0:
            if pf_mul(q, s, &prod):
                return 1
            if pf_add(dst[k * stride], prod, &dst[k * stride]):
                return 1
            # keep LLONG_MIN out so negation and division stay defined
            if dst[k * stride] == LLONG_MIN:
                return 1
    return 0


cdef void swap_stride(long long *a, long long *b, Py_ssize_t count, Py_ssize_t stride) nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    for k in range(count):
        tmp = a[k * stride]
        a[k * stride] = b[k * stride]
        b[k * stride] = tmp


cdef int run(long long *S, long long *U, long long *V, Py_ssize_t m, Py_ssize_t n) nogil:
    cdef Py_ssize_t t = 0, i, j, bi, bj, bad
    cdef long long bv, v, p, q
    cdef bint found, clean
    cdef Py_ssize_t lim = m if m < n else n
    while t < lim:
        found = False
        bv = 0
        bi = bj = 0
        for i in range(t, m):
            for j in range(t, n):
                v = absval(S[i * n + j])
                if v != 0 and (not found or v < bv):
                    found = True
                    bv = v
                    bi = i
                    bj = j
        if not found:
            break
        if bi != t:
            swap_stride(&S[t * n], &S[bi * n], n, 1)
            if U != NULL:
                swap_stride(&U[t * m], &U[bi * m], m, 1)
        if bj != t:
            swap_stride(&S[t], &S[bj], m, n)
            if V != NULL:
                swap_stride(&V[t], &V[bj], n, n)
        while True:
            clean = True
            p = S[t * n + t]
            for i in range(t + 1, m):
                if S[i * n + t] != 0:
                    q = floordiv(S[i * n + t], p)
                    if axpy(&S[i * n], &S[t * n], -q, n, 1):
                        return 1
                    if U != NULL and axpy(&U[i * m], &U[t * m], -q, m, 1):
                        return 1
                    if S[i * n + t] != 0:
                        clean = False
            for j in range(t + 1, n):
                if S[t * n + j] != 0:
                    q = floordiv(S[t * n + j], p)
                    if axpy(&S[j], &S[t], -q, m, n):
                        return 1
                    if V != NULL and axpy(&V[j], &V[t], -q, n, n):
                        return 1
                    if S[t * n + j] != 0:
                        clean = False
            if not clean:
                bi = t
                bj = t
                bv = absval(S[t * n + t])
                for i in range(t + 1, m):
                    v = absval(S[i * n + t])
                    if v != 0 and v < bv:
                        bi = i
                        bj = t
                        bv = v
                for j in range(t + 1, n):
                    v = absval(S[t * n + j])
                    if v != 0 and v < bv:
                        bi = t
                        bj = j
                        bv = v
                if bi != t:
                    swap_stride(&S[t * n], &S[bi * n], n, 1)
                    if U != NULL:
                        swap_stride(&U[t * m], &U[bi * m], m, 1)
                if bj != t:
                    swap_stride(&S[t], &S[bj], m, n)
                    if V != NULL:
                        swap_stride(&V[t], &V[bj], n, n)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            if axpy(&S[t * n], &S[bad * n], 1, n, 1):
                return 1
            if U != NULL and axpy(&U[t * m], &U[bad * m], 1, m, 1):
                return 1
        if S[t * n + t] < 0:
            for j in range(n):
                if pf_sub(0, S[t * n + j], &S[t * n + j]):
                    return 1
            if U != NULL:
                for j in range(m):
                    if pf_sub(0, U[t * m + j], &U[t * m + j]):
                        return 1
        t += 1
    return 0


cdef long long *load(rows, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long *buf = <long long *>malloc(max(m * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                buf[i * n + j] = r[j]
                if buf[i * n + j] == LLONG_MIN:
                    raise OverflowError("entry exceeds 64 bits")
    except BaseException:
        free(buf)
        raise
    return buf


cdef long long *eye(Py_ssize_t n) except NULL:
    cdef long long *buf = <long long *>malloc(max(n * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n * n):
        buf[i] = 0
    for i in range(n):
        buf[i * n + i] = 1
    return buf


cdef list dump(long long *buf, Py_ssize_t m, Py_ssize_t n):
    return [[buf[i * n + j] for j in range(n)] for i in range(m)]


def snf(rows, Py_ssize_t m, Py_ssize_t n, bint transforms=True):
    """Same contract as ``_snf_py.snf``; raises ``OverflowError`` past int64."""
    cdef long long *S = NULL
    cdef long long *U = NULL
    cdef long long *V = NULL
    cdef int status
    try:
        S = load(rows, m, n)
        if transforms:
            U = eye(m)
            V = eye(n)
        with nogil:
            status = run(S, U, V, m, n)
        if status:
            raise OverflowError("intermediate entry exceeds 64 bits")
        return (dump(U, m, m) if transforms else None, dump(S, m, n),
                dump(V, n, n) if transforms else None)
    finally:
        free(S)
        free(U)
        free(V)

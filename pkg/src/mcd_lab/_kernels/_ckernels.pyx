# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contracts as ``_pykernels`` on int64 inputs.

Callers route any input that could overflow 63 bits to the Python backend.
"""

from libc.stdlib cimport malloc, realloc, free, qsort

from ..errors import SearchOverflow

ctypedef long long i64


cdef i64 _gcd(i64 a, i64 b) nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef i64 _inv_mod(i64 a, i64 m) nogil:
    # extended Euclid; a and m coprime, m > 1
    cdef i64 t = 0, nt = 1, r = m, nr = a % m, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += m
    return t


cdef struct DfsState:
    i64 *w
    i64 *suffix
    i64 *coeffs
    int n
    long long nodes
    long long cap
    int overflow


cdef class _Collector:
    cdef list sols
    cdef int limit

    def __init__(self, int limit):
        self.sols = []
        self.limit = limit


cdef int _rec(DfsState *st, int i, i64 r, _Collector col) except -1:
    cdef i64 w = st.w[i], g, h, m, c, step, rh
    cdef int k
    if i == st.n - 1:
        st.nodes += 1
        if r % w == 0:
            st.coeffs[i] = r // w
            col.sols.append(tuple([st.coeffs[k] for k in range(st.n)]))
            if col.limit and len(col.sols) >= col.limit:
                return 1
        return 0
    g = st.suffix[i + 1]
    h = _gcd(w, g)
    if r % h:
        return 0
    m = g // h
    step = m
    if m == 1:
        c = 0
    else:
        rh = (r // h) % m
        c = (rh * _inv_mod((w // h) % m, m)) % m
    while c * w <= r:
        st.nodes += 1
        if st.nodes > st.cap:
            st.overflow = 1
            return 1
        st.coeffs[i] = c
        if _rec(st, i + 1, r - c * w, col):
            return 1
        c += step
    return 0


def dfs_solve(weights, i64 target, int limit=0, long long node_cap=10**7):
    cdef int n = len(weights), i
    cdef DfsState st
    if target < 0:
        return [], 0
    if n == 0:
        return ([()] if target == 0 else []), 1
    st.w = <i64 *> malloc(n * sizeof(i64))
    st.suffix = <i64 *> malloc((n + 1) * sizeof(i64))
    st.coeffs = <i64 *> malloc(n * sizeof(i64))
    try:
        for i in range(n):
            st.w[i] = weights[i]
            st.coeffs[i] = 0
        st.suffix[n] = 0
        for i in range(n - 1, -1, -1):
            st.suffix[i] = _gcd(st.w[i], st.suffix[i + 1])
        if target % st.suffix[0]:
            return [], 1
        st.n = n
        st.nodes = 0
        st.cap = node_cap
        st.overflow = 0
        col = _Collector(limit)
        _rec(&st, 0, target, col)
        if st.overflow:
            raise SearchOverflow(f"DFS exceeded node cap {node_cap}", st.nodes)
        return col.sols, st.nodes
    finally:
        free(st.w)
        free(st.suffix)
        free(st.coeffs)


def reach_table(weights, i64 bound, long long node_cap=10**7):
    cdef i64 size, t, w
    cdef unsigned char[:] out
    if bound < 0:
        return bytearray()
    size = bound + 1
    if size > node_cap:
        raise SearchOverflow(f"sieve of {size} cells exceeds node cap {node_cap}", size)
    table = bytearray(size)
    out = table
    out[0] = 1
    for wobj in weights:
        w = wobj
        for t in range(w, size):
            if out[t - w]:
                out[t] = 1
    return table


cdef int _cmp_i64(const void *a, const void *b) noexcept nogil:
    cdef i64 x = (<i64 *> a)[0], y = (<i64 *> b)[0]
    return (x > y) - (x < y)


def bounded_sums(weights, i64 bound, long long node_cap=10**7):
    cdef i64 *cur
    cdef i64 *nxt
    cdef i64 *grown
    cdef long long ncur = 1, nnext, cap_next, j, k, nodes = 0
    cdef i64 v, w
    if bound < 0:
        return []
    cur = <i64 *> malloc(sizeof(i64))
    cur[0] = 0
    try:
        for wobj in weights:
            w = wobj
            cap_next = ncur * 2 + 16
            nxt = <i64 *> malloc(cap_next * sizeof(i64))
            nnext = 0
            for j in range(ncur):
                v = cur[j]
                while v <= bound:
                    if nnext == cap_next:
                        cap_next *= 2
                        grown = <i64 *> realloc(nxt, cap_next * sizeof(i64))
                        if grown == NULL:
                            free(nxt)
                            raise MemoryError()
                        nxt = grown
                    nxt[nnext] = v
                    nnext += 1
                    nodes += 1
                    v += w
                if nodes > node_cap:
                    free(nxt)
                    raise SearchOverflow(f"enumeration exceeded node cap {node_cap}", nodes)
            qsort(nxt, nnext, sizeof(i64), _cmp_i64)
            k = 0
            for j in range(nnext):
                if k == 0 or nxt[j] != nxt[k - 1]:
                    nxt[k] = nxt[j]
                    k += 1
            free(cur)
            cur = nxt
            ncur = k
        return [cur[j] for j in range(ncur)]
    finally:
        free(cur)


def cd_mask(reach, targets, i64 upto):
    cdef const unsigned char[:] r = reach
    cdef i64 size = upto + 1, d, t
    out_arr = bytearray(size)
    cdef unsigned char[:] out = out_arr
    for d in range(size):
        out[d] = r[d]
    for tobj in targets:
        t = tobj
        for d in range(size):
            if out[d] and (t - d < 0 or not r[t - d]):
                out[d] = 0
    return out_arr


def maximal_mask(mask, weights):
    cdef const unsigned char[:] m = mask
    cdef i64 size = len(mask), d, w
    out_arr = bytearray(mask)
    cdef unsigned char[:] out = out_arr
    for wobj in weights:
        w = wobj
        for d in range(size - w):
            if m[d + w]:
                out[d] = 0
    return out_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Semantics and iteration order match ``_fallback.py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

ctypedef cnp.int64_t i64

cdef extern from *:
    """
    static inline long long pl_mulmod(long long a, long long b, long long m) {
        return (long long)(((__int128)a * (__int128)b) % m);
    }
    """
    long long pl_mulmod(long long a, long long b, long long m) nogil


cdef inline i64 _pmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline int _val(i64 g, i64 p, int cap) nogil:
    cdef int e = 0
    if g == 0:
        return cap
    while g % p == 0 and e < cap:
        g //= p
        e += 1
    return e


cdef void _powers(const i64* y, int k, int d, i64 Q, i64* pw) nogil:
    # pw[i*(d+1) + e] = y_i^e mod Q
    cdef int i, e
    for i in range(k):
        pw[i * (d + 1)] = 1 % Q
        for e in range(1, d + 1):
            pw[i * (d + 1) + e] = pl_mulmod(pw[i * (d + 1) + e - 1], y[i], Q)


cdef i64 _fmod(const i64[:, ::1] exps, const i64* c, int N, int k, int d, i64 Q, const i64* pw) nogil:
    cdef i64 s = 0, m
    cdef int a, i
    for a in range(N):
        if c[a] == 0:
            continue
        m = c[a]
        for i in range(k):
            m = pl_mulmod(m, pw[i * (d + 1) + exps[a, i]], Q)
        s += m
        if s >= Q:
            s -= Q
    return s


cdef int _gradval(const i64[:, ::1] exps, const i64* c, int N, int k, int d, i64 Q, i64 p, int r,
                  const i64* pw) nogil:
    cdef int i, j, a, e = r, v
    cdef i64 g, m
    for i in range(k):
        g = 0
        for a in range(N):
            if c[a] == 0 or exps[a, i] == 0:
                continue
            m = pl_mulmod(c[a], exps[a, i] % Q, Q)
            for j in range(k):
                if j == i:
                    m = pl_mulmod(m, pw[j * (d + 1) + exps[a, j] - 1], Q)
                else:
                    m = pl_mulmod(m, pw[j * (d + 1) + exps[a, j]], Q)
            g += m
            if g >= Q:
                g -= Q
        v = _val(g, p, r)
        if v < e:
            e = v
            if e == 0:
                break
    return e


def padic_scan(const i64[:, ::1] exps, coeffs, frontier, i64 p, int r, i64 budget):
    """Refine one level of the unit-residue tree with x0 fixed to 1.

    Returns ``(found, witness, e, next_frontier, overflow)``.
    """
    cdef int N = exps.shape[0], k = exps.shape[1]
    cdef int d = 0, i
    for i in range(k):
        d += exps[0, i]
    cdef i64 Q = 1, step = 1
    for i in range(r):
        Q *= p
    step = Q // p
    cdef cnp.ndarray[i64, ndim=1] c_arr = np.mod(np.asarray(coeffs, dtype=np.int64), Q)
    cdef i64* c = <i64*> c_arr.data
    cdef cnp.ndarray[i64, ndim=2] fr
    cdef i64 F
    if r == 1:
        fr = np.ones((1, k), dtype=np.int64)
        F = 1
    else:
        fr = np.ascontiguousarray(frontier, dtype=np.int64)
        F = fr.shape[0]
    cdef i64 lo = 1 if r == 1 else 0
    cdef i64 hi = p - 1
    cdef cnp.ndarray[i64, ndim=1] y_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] t_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pw_arr = np.zeros(k * (d + 1), dtype=np.int64)
    cdef i64* y = <i64*> y_arr.data
    cdef i64* t = <i64*> t_arr.data
    cdef i64* pw = <i64*> pw_arr.data
    cdef i64 cap = 1024
    cdef cnp.ndarray[i64, ndim=2] nxt = np.empty((cap, k), dtype=np.int64)
    cdef i64 nn = 0, node
    cdef bint overflow = False, done
    cdef int e, j
    for node in range(F):
        for i in range(1, k):
            t[i] = lo
        while True:
            y[0] = 1 % Q
            for i in range(1, k):
                if r == 1:
                    y[i] = t[i]
                else:
                    y[i] = (fr[node, i] + step * t[i]) % Q
            _powers(y, k, d, Q, pw)
            if _fmod(exps, c, N, k, d, Q, pw) == 0:
                e = _gradval(exps, c, N, k, d, Q, p, r, pw)
                if 2 * e + 1 <= r:
                    return True, y_arr.copy(), e, None, overflow
                if nn < budget:
                    if nn == cap:
                        cap *= 2
                        nxt = np.resize(nxt, (cap, k))
                    for i in range(k):
                        nxt[nn, i] = y[i]
                    nn += 1
                else:
                    overflow = True
            # odometer over t[1..k-1], last index fastest
            j = k - 1
            done = True
            while j >= 1:
                if t[j] < hi:
                    t[j] += 1
                    done = False
                    break
                t[j] = lo
                j -= 1
            if done:
                break
    return False, None, -1, nxt[:nn].copy(), overflow


def zero_valuations(const i64[:, ::1] exps, coeffs, i64 p, int r):
    """Counts, per e in 0..r, of unit x mod p^r with x0 = 1, f(x) = 0 mod p^r and v_p(grad f(x)) = e."""
    cdef int N = exps.shape[0], k = exps.shape[1]
    cdef int d = 0, i, j, e
    for i in range(k):
        d += exps[0, i]
    cdef i64 Q = 1
    for i in range(r):
        Q *= p
    cdef cnp.ndarray[i64, ndim=1] c_arr = np.mod(np.asarray(coeffs, dtype=np.int64), Q)
    cdef i64* c = <i64*> c_arr.data
    cdef cnp.ndarray[i64, ndim=1] y_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pw_arr = np.zeros(k * (d + 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] counts = np.zeros(r + 1, dtype=np.int64)
    cdef i64* y = <i64*> y_arr.data
    cdef i64* pw = <i64*> pw_arr.data
    cdef bint done
    with nogil:
        y[0] = 1 % Q
        for i in range(1, k):
            y[i] = 1
        while True:
            _powers(y, k, d, Q, pw)
            if _fmod(exps, c, N, k, d, Q, pw) == 0:
                e = _gradval(exps, c, N, k, d, Q, p, r, pw)
                counts[e] += 1
            j = k - 1
            done = True
            while j >= 1:
                y[j] += 1
                if y[j] % p == 0:
                    y[j] += 1
                if y[j] < Q:
                    done = False
                    break
                y[j] = 1
                j -= 1
            if done:
                break
    return counts


def simplex_scan(const i64[:, ::1] exps, const double[::1] coeffs, i64 M):
    """Evaluate f on the integer simplex grid {g >= 0, sum g = M} in lex-descending order.

    Returns ``(event, point_a, point_b, min_abs)``: event 1 = interior exact zero
    (point_a), event 2 = interior sign change (point_a positive, point_b
    negative), event 0 = neither, in which case min_abs = min |f(g / M)| over the
    whole closed grid.
    """
    cdef int N = exps.shape[0], k = exps.shape[1]
    cdef int d = 0, i, j, a
    for i in range(k):
        d += exps[0, i]
    cdef cnp.ndarray[i64, ndim=1] g_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pos_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] neg_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] pw_arr = np.zeros(k * (d + 1), dtype=np.float64)
    cdef i64* g = <i64*> g_arr.data
    cdef double* pw = <double*> pw_arr.data
    cdef bint have_pos = False, have_neg = False, interior
    cdef double val, m, min_abs = 1e308, scale = 1.0
    cdef i64 tail
    cdef int event = 0
    for i in range(d):
        scale *= M
    g[0] = M
    with nogil:
        while True:
            interior = True
            for i in range(k):
                if g[i] == 0:
                    interior = False
                pw[i * (d + 1)] = 1.0
                for j in range(1, d + 1):
                    pw[i * (d + 1) + j] = pw[i * (d + 1) + j - 1] * <double> g[i]
            val = 0.0
            for a in range(N):
                if coeffs[a] == 0.0:
                    continue
                m = coeffs[a]
                for i in range(k):
                    m = m * pw[i * (d + 1) + exps[a, i]]
                val += m
            if fabs(val) < min_abs:
                min_abs = fabs(val)
            if interior:
                if val == 0.0:
                    for i in range(k):
                        pos_arr[i] = g[i]
                    event = 1
                    break
                if val > 0.0 and not have_pos:
                    have_pos = True
                    for i in range(k):
                        pos_arr[i] = g[i]
                elif val < 0.0 and not have_neg:
                    have_neg = True
                    for i in range(k):
                        neg_arr[i] = g[i]
                if have_pos and have_neg:
                    event = 2
                    break
            # next composition in lex-descending order
            j = k - 2
            while j >= 0 and g[j] == 0:
                j -= 1
            if j < 0:
                break
            tail = 0
            for i in range(j + 1, k):
                tail += g[i]
                g[i] = 0
            g[j] -= 1
            g[j + 1] = tail + 1
    if event == 1:
        return 1, pos_arr, None, 0.0
    if event == 2:
        return 2, pos_arr, neg_arr, 0.0
    return 0, None, None, min_abs / scale


def residue_counts(const i64[:, ::1] table, const i64[:, ::1] A, i64 Q):
    """For each row a of A, the number of rows t of ``table`` with <a, t> = 0 mod Q."""
    cdef i64 R = table.shape[0], K = A.shape[0]
    cdef int N = table.shape[1], i
    cdef i64 row, t, s
    cdef cnp.ndarray[i64, ndim=1] out = np.zeros(K, dtype=np.int64)
    with nogil:
        for row in range(K):
            for t in range(R):
                s = 0
                for i in range(N):
                    s += A[row, i] * table[t, i]
                if s % Q == 0:
                    out[row] += 1
    return out


def prime_tuples(const i64[::1] primes, int k, i64 R2):
    """All k-tuples of the given ascending primes with squared norm <= R2, lex ascending."""
    cdef int P = primes.shape[0]
    if P == 0 or k <= 0:
        return np.zeros((0, max(k, 0)), dtype=np.int64)
    cdef i64 cap = 1024, nn = 0
    cdef cnp.ndarray[i64, ndim=2] out = np.empty((cap, k), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] part_arr = np.zeros(k + 1, dtype=np.int64)
    cdef i64* idx = <i64*> idx_arr.data
    cdef i64* part = <i64*> part_arr.data
    cdef i64 p0sq = primes[0] * primes[0]
    cdef int level = 0, i
    cdef i64 s
    idx[0] = 0
    part[0] = 0
    while level >= 0:
        if idx[level] >= P:
            level -= 1
            if level >= 0:
                idx[level] += 1
            continue
        s = part[level] + primes[idx[level]] * primes[idx[level]]
        if s + (k - 1 - level) * p0sq > R2:
            # larger primes at this level only grow the norm
            level -= 1
            if level >= 0:
                idx[level] += 1
            continue
        if level == k - 1:
            if nn == cap:
                cap *= 2
                out = np.resize(out, (cap, k))
            for i in range(k):
                out[nn, i] = primes[idx[i]]
            nn += 1
            idx[level] += 1
        else:
            part[level + 1] = s
            level += 1
            idx[level] = 0
    return out[:nn].copy()


def pair_minor_data(const i64[:, ::1] V, const i64[::1] I, const i64[::1] J):
    """Gram determinant |u|^2 |v|^2 - <u,v>^2 and gcd of 2x2 minors for each pair (V[I], V[J])."""
    cdef i64 P = I.shape[0], t, uu, vv, uv, g, mnr
    cdef int N = V.shape[1], a, b
    cdef cnp.ndarray[i64, ndim=1] gram = np.zeros(P, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] gcds = np.zeros(P, dtype=np.int64)
    cdef i64 x, y
    with nogil:
        for t in range(P):
            x = I[t]
            y = J[t]
            uu = 0
            vv = 0
            uv = 0
            for a in range(N):
                uu += V[x, a] * V[x, a]
                vv += V[y, a] * V[y, a]
                uv += V[x, a] * V[y, a]
            gram[t] = uu * vv - uv * uv
            g = 0
            for a in range(N):
                for b in range(a + 1, N):
                    mnr = V[x, a] * V[y, b] - V[x, b] * V[y, a]
                    if mnr != 0:
                        g = _gcd(g, mnr)
                if g == 1:
                    break
            gcds[t] = g
    return gram, gcds

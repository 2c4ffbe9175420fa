"""NumPy / pure-Python twins of the compiled kernels in ``_core.pyx``.

Every function returns exactly what its compiled counterpart returns,
including iteration order, so callers and tests can swap them freely.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

_CHUNK = 1 << 15


def _modmat(Q: int):
    # int64 products stay exact while Q*Q fits; otherwise use Python ints
    return np.int64 if Q < 3_000_000_000 else object


def _fvals_mod(exps, coeffs, Y, Q, dtype):
    """f(Y) mod Q for rows Y, via repeated modular products."""
    vals = np.zeros(Y.shape[0], dtype=dtype)
    for a, c in enumerate(coeffs):
        if c == 0:
            continue
        m = np.full(Y.shape[0], c, dtype=dtype)
        for i, e in enumerate(exps[a]):
            for _ in range(int(e)):
                m = (m * Y[:, i]) % Q
        vals = (vals + m) % Q
    return vals


def _grad_mod(exps, coeffs, y, Q):
    k = exps.shape[1]
    out = []
    for i in range(k):
        g = 0
        for a, c in enumerate(coeffs):
            if c == 0 or exps[a][i] == 0:
                continue
            m = c * int(exps[a][i]) % Q
            for j in range(k):
                e = int(exps[a][j]) - (1 if j == i else 0)
                m = m * pow(int(y[j]), e, Q) % Q
            g = (g + m) % Q
        out.append(g)
    return out


def _val(g: int, p: int, cap: int) -> int:
    if g == 0:
        return cap
    e = 0
    while g % p == 0 and e < cap:
        g //= p
        e += 1
    return e


def _gradval(exps, coeffs, y, p, r, Q):
    return min(_val(g, p, r) for g in _grad_mod(exps, coeffs, y, Q))


def _children(frontier, p, r, k, Q):
    """Child residues in the same order as the compiled odometer."""
    if r == 1:
        ts = itertools.product(range(1, p), repeat=k - 1)
        for t in ts:
            yield (1,) + t
        return
    step = Q // p
    for node in frontier:
        node = [int(v) for v in node]
        for t in itertools.product(range(p), repeat=k - 1):
            yield (1 % Q,) + tuple((node[i + 1] + step * t[i]) % Q for i in range(k - 1))


def padic_scan(exps, coeffs, frontier, p, r, budget):
    exps = np.asarray(exps, dtype=np.int64)
    p, r, budget = int(p), int(r), int(budget)
    k = exps.shape[1]
    Q = p**r
    dtype = _modmat(Q)
    cs = [int(c) % Q for c in coeffs]
    nxt = []
    overflow = False
    gen = _children(frontier, p, r, k, Q)
    while True:
        block = list(itertools.islice(gen, _CHUNK))
        if not block:
            break
        Y = np.array(block, dtype=dtype)
        zeros = np.flatnonzero(_fvals_mod(exps, cs, Y, Q, dtype) == 0)
        for idx in zeros:
            y = block[idx]
            e = _gradval(exps, cs, y, p, r, Q)
            if 2 * e + 1 <= r:
                return True, np.array(y, dtype=np.int64), e, None, overflow
            if len(nxt) < budget:
                nxt.append(y)
            else:
                overflow = True
    arr = np.array(nxt, dtype=np.int64).reshape(len(nxt), k)
    return False, None, -1, arr, overflow


def zero_valuations(exps, coeffs, p, r):
    exps = np.asarray(exps, dtype=np.int64)
    p, r = int(p), int(r)
    k = exps.shape[1]
    Q = p**r
    dtype = _modmat(Q)
    cs = [int(c) % Q for c in coeffs]
    units = [u for u in range(1, Q) if u % p]
    counts = np.zeros(r + 1, dtype=np.int64)
    gen = ((1 % Q,) + t for t in itertools.product(units, repeat=k - 1))
    while True:
        block = list(itertools.islice(gen, _CHUNK))
        if not block:
            break
        Y = np.array(block, dtype=dtype)
        for idx in np.flatnonzero(_fvals_mod(exps, cs, Y, Q, dtype) == 0):
            counts[_gradval(exps, cs, block[idx], p, r, Q)] += 1
    return counts


def _compositions(M: int, k: int):
    """Compositions of M into k parts, lex-descending, as one array."""
    if k == 1:
        return np.array([[M]], dtype=np.int64)
    parts = []
    for g0 in range(M, -1, -1):
        rest = _compositions(M - g0, k - 1)
        parts.append(np.column_stack([np.full(rest.shape[0], g0, dtype=np.int64), rest]))
    return np.vstack(parts)


def simplex_scan(exps, coeffs, M):
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    M = int(M)
    k = exps.shape[1]
    d = int(exps[0].sum())
    min_abs = math.inf
    first_pos = first_neg = None
    for g0 in range(M, -1, -1):
        rest = _compositions(M - g0, k - 1) if k > 1 else np.zeros((1, 0), dtype=np.int64)
        G = np.column_stack([np.full(rest.shape[0], g0, dtype=np.int64), rest])
        Gf = G.astype(np.float64)
        vals = np.zeros(G.shape[0])
        for a, c in enumerate(coeffs):
            if c == 0.0:
                continue
            m = np.full(G.shape[0], c)
            for i in range(k):
                for _ in range(int(exps[a, i])):
                    m = m * Gf[:, i]
            vals = vals + m
        interior = (G > 0).all(axis=1)
        if vals.size:
            min_abs = min(min_abs, float(np.abs(vals).min()))
        inf = G.shape[0]

        def first(mask):
            hit = np.flatnonzero(interior & mask)
            return int(hit[0]) if hit.size else inf

        iz = first(vals == 0.0)
        ip = -1 if first_pos is not None else first(vals > 0.0)
        ineg = -1 if first_neg is not None else first(vals < 0.0)
        isign = max(ip, ineg)
        if iz < isign:
            return 1, G[iz].copy(), None, 0.0
        if isign < inf:
            pos = first_pos if first_pos is not None else G[ip].copy()
            neg = first_neg if first_neg is not None else G[ineg].copy()
            return 2, pos, neg, 0.0
        if ip >= 0 and ip < inf:
            first_pos = G[ip].copy()
        if ineg >= 0 and ineg < inf:
            first_neg = G[ineg].copy()
    return 0, None, None, min_abs / float(M) ** d


def residue_counts(table, A, Q):
    table = np.asarray(table, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64)
    out = np.zeros(A.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // max(1, table.shape[0]))
    for s in range(0, A.shape[0], step):
        prod = A[s : s + step] @ table.T
        out[s : s + step] = (prod % int(Q) == 0).sum(axis=1)
    return out


def prime_tuples(primes, k, R2):
    primes = [int(p) for p in primes]
    k, R2 = int(k), int(R2)
    if not primes or k <= 0:
        return np.zeros((0, max(k, 0)), dtype=np.int64)
    p0sq = primes[0] ** 2
    out = []

    def rec(prefix, s):
        level = len(prefix)
        for p in primes:
            t = s + p * p
            if t + (k - 1 - level) * p0sq > R2:
                break
            if level == k - 1:
                out.append(prefix + [p])
            else:
                rec(prefix + [p], t)

    rec([], 0)
    return np.array(out, dtype=np.int64).reshape(len(out), k)


def pair_minor_data(V, I, J):
    V = np.asarray(V, dtype=np.int64)
    I = np.asarray(I, dtype=np.int64)
    J = np.asarray(J, dtype=np.int64)
    U, W = V[I], V[J]
    uu = np.einsum("ij,ij->i", U, U)
    vv = np.einsum("ij,ij->i", W, W)
    uv = np.einsum("ij,ij->i", U, W)
    gram = uu * vv - uv * uv
    N = V.shape[1]
    g = np.zeros(len(I), dtype=np.int64)
    for a, b in itertools.combinations(range(N), 2):
        g = np.gcd(g, U[:, a] * W[:, b] - U[:, b] * W[:, a])
    return gram, g

"""Integer lattices: solution and congruence lattices, intersections, saturation,
exact determinants, enumeration, successive minima and minimal-determinant
sublattices.

All lattice arithmetic is done on Python integers.  Floating point appears
only inside the enumeration bounds, which carry a relative slack and are
followed by an exact integer norm filter, so returned point sets are exact.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import INF, Infinity, frak_c, is_prime
from .forms import MonomialBasis, veronese

DEFAULT_ENUM_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured node or box budget."""


def _ivec(v: Iterable) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _bareiss_det(M: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _gram(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[_dot(u, v) for v in rows] for u in rows]


def _rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return 0
    ncols = len(A[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank]
        for i in range(rank + 1, len(A)):
            if A[i][c]:
                f = A[i][c]
                A[i] = [p[c] * x - f * y for x, y in zip(A[i], p)]
        rank += 1
        if rank == len(A):
            break
    return rank


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Unimodular row reduction on the first ``ncols`` columns.

    Returns the transformed rows (same count, same length) and the number of
    pivot rows; rows past that index are zero on the first ``ncols`` columns.
    """
    A = [list(r) for r in rows]
    m = len(A)
    piv_row = 0
    for c in range(ncols):
        if piv_row >= m:
            break
        while True:
            nz = [i for i in range(piv_row, m) if A[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(A[i][c]))
            A[piv_row], A[best] = A[best], A[piv_row]
            p = A[piv_row]
            done = True
            for i in range(piv_row + 1, m):
                if A[i][c]:
                    q = A[i][c] // p[c]
                    A[i] = [x - q * y for x, y in zip(A[i], p)]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[piv_row][c] != 0:
            piv_row += 1
    return A, piv_row


def integer_kernel(M: Sequence[Sequence[int]], N: int | None = None) -> list[tuple[int, ...]]:
    """A basis of {y in Z^N : M y = 0}, LLL-reduced."""
    M = [_ivec(r) for r in M]
    if N is None:
        N = len(M[0])
    k = len(M)
    # rows [M^T | I]: the identity part of the rows killed on the left is the kernel
    rows = [[M[j][i] for j in range(k)] + [1 if t == i else 0 for t in range(N)] for i in range(N)]
    A, rank = _echelon(rows, k)
    ker = [tuple(r[k:]) for r in A[rank:]]
    return lll_reduce(ker) if ker else []


def lattice_basis(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A basis of the Z-span of possibly dependent integer generators, LLL-reduced."""
    gens = [_ivec(g) for g in generators]
    if not gens:
        return []
    N = len(gens[0])
    A, rank = _echelon([list(g) for g in gens], N)
    basis = [tuple(r) for r in A[:rank]]
    return lll_reduce(basis) if basis else []


# ---------------------------------------------------------------------------
# integral LLL (exact, Cohen's Algorithm 2.6.7 with delta = 99/100)


def lll_reduce(vectors: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list[tuple[int, ...]]:
    """LLL-reduce linearly independent integer vectors using only integer arithmetic."""
    b = [list(_ivec(v)) for v in vectors]
    n = len(b)
    if n <= 1:
        return [tuple(v) for v in b]
    dn, dd = delta.numerator, delta.denominator
    # d[0] = 1, d[i+1] = Gram determinant of b[0..i]; lam[k][j] for j < k
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def gso_row(k: int) -> None:
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("vectors are linearly dependent")
                d[k + 1] = u

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        Bn = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (Bn * t + mu * lam[i][k]) // d[k + 1]
        d[k] = Bn

    gso_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gso_row(k)
        red(k, k - 1)
        mu = lam[k][k - 1]
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * mu * mu:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return [tuple(v) for v in b]


def _gso_float(basis: Sequence[Sequence[int]]) -> tuple[list[list[float]], list[float]]:
    """Gram-Schmidt coefficients mu and squared lengths B* from exact rationals."""
    r = len(basis)
    G = _gram(basis)
    mu = [[Fraction(0)] * r for _ in range(r)]
    Bs = [Fraction(0)] * r
    for i in range(r):
        for j in range(i):
            s = Fraction(G[i][j]) - sum(mu[j][k] * mu[i][k] * Bs[k] for k in range(j))
            mu[i][j] = s / Bs[j]
        Bs[i] = Fraction(G[i][i]) - sum(mu[i][k] ** 2 * Bs[k] for k in range(i))
    return [[float(x) for x in row] for row in mu], [float(x) for x in Bs]


def _fincke_pohst(basis, mu, Bs, R2: int, budget: int, skip_sign: bool = False):
    """All integer coefficient vectors x with ||sum x_i b_i||^2 <= R2.

    Float bounds are widened by a relative slack, candidates are then
    filtered by the exact integer norm.  With ``skip_sign`` only one of
    each +-pair is produced (the one whose last nonzero coefficient is
    positive) and the zero vector is dropped.
    """
    r = len(basis)
    N = len(basis[0]) if r else 0
    slack = 1e-9 * R2 + 1e-9
    out: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []
    x = [0] * r
    nodes = 0

    def rec(i: int, rem: float, nonzero_above: bool):
        nonlocal nodes
        c = -sum(x[j] * mu[j][i] for j in range(i + 1, r))
        span = math.sqrt(max(rem, 0.0) / Bs[i]) if Bs[i] > 0 else 0.0
        lo = math.ceil(c - span - 1e-9)
        hi = math.floor(c + span + 1e-9)
        if skip_sign and not nonzero_above:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
            used = (xi - c) ** 2 * Bs[i]
            if used > rem + slack:
                continue
            x[i] = xi
            if i == 0:
                if skip_sign and not (nonzero_above or xi > 0):
                    continue
                v = tuple(sum(x[j] * basis[j][t] for j in range(r)) for t in range(N))
                n2 = _dot(v, v)
                if n2 <= R2:
                    out.append((tuple(x), v, n2))
            else:
                rec(i - 1, rem - used, nonzero_above or xi != 0)
        x[i] = 0

    if r:
        rec(r - 1, float(R2) + slack, False)
    return out


@dataclass(frozen=True)
class CongruenceSpec:
    """{y : <c, y> = 0 mod Q}; Q = INF means the exact equation <c, y> = 0."""

    c: tuple[int, ...]
    Q: int | Infinity

    def __post_init__(self):
        object.__setattr__(self, "c", _ivec(self.c))
        if self.Q is not INF and int(self.Q) < 1:
            raise ValueError("modulus must be >= 1")


class IntegerLattice:
    """An immutable sublattice of Z^N given by a basis of independent integer vectors."""

    __slots__ = ("ambient_dim", "basis", "_det_sq", "_lock", "_minima", "_lll", "_gso", "_reduced")

    def __init__(self, basis: Sequence[Sequence[int]], ambient_dim: int | None = None, *, check: bool = True):
        rows = tuple(_ivec(v) for v in basis)
        if ambient_dim is None:
            if not rows:
                raise ValueError("ambient_dim is required for the zero lattice")
            ambient_dim = len(rows[0])
        if any(len(v) != ambient_dim for v in rows):
            raise ValueError("basis vectors must all have length ambient_dim")
        if check and _rank(rows) != len(rows):
            raise ValueError("basis vectors are linearly dependent")
        self.ambient_dim = int(ambient_dim)
        self.basis = rows
        self._det_sq = _bareiss_det(_gram(rows))
        self._lock = threading.Lock()
        self._minima = None
        self._lll = None
        self._gso = None
        self._reduced = None

    @classmethod
    def standard(cls, N: int) -> "IntegerLattice":
        return cls([[1 if i == j else 0 for j in range(N)] for i in range(N)], N, check=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def det_sq(self) -> int:
        """Exact Gram determinant."""
        return self._det_sq

    @property
    def det(self) -> float:
        return math.sqrt(self._det_sq)

    def __repr__(self) -> str:
        return f"IntegerLattice(rank={self.rank}, ambient_dim={self.ambient_dim}, det_sq={self._det_sq})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.rank != other.rank or self.det_sq != other.det_sq:
            return False
        return all(membership(self, v) for v in other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.rank, self._det_sq))

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [list(v) for v in self.basis]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerLattice":
        return cls(obj["basis"], int(obj["ambient_dim"]))

    def lll_basis(self) -> tuple[tuple[int, ...], ...]:
        with self._lock:
            if self._lll is None:
                self._lll = tuple(lll_reduce(self.basis))
                self._gso = _gso_float(self._lll)
            return self._lll

    def _lll_gso(self):
        self.lll_basis()
        return self._lll, self._gso


# ---------------------------------------------------------------------------
# constructors


def solution_lattice(c: Sequence[int]) -> IntegerLattice:
    """Lambda_c = {y in Z^N : <c, y> = 0}."""
    c = _ivec(c)
    if not any(c):
        raise ValueError("solution_lattice needs c != 0")
    N = len(c)
    return IntegerLattice(integer_kernel([c], N), N, check=False)


def congruence_lattice(spec: CongruenceSpec | tuple) -> IntegerLattice:
    """{y in Z^N : <c, y> = 0 mod Q}, as the projection of the kernel of [c | Q]."""
    if not isinstance(spec, CongruenceSpec):
        spec = CongruenceSpec(*spec)
    if spec.Q is INF:
        return solution_lattice(spec.c)
    N, Q = len(spec.c), int(spec.Q)
    ker = integer_kernel([list(spec.c) + [Q]], N + 1)
    proj = [v[:N] for v in ker]
    return IntegerLattice(lll_reduce(proj), N, check=False)


def intersect(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    """Exact intersection: left kernel of the stacked bases, mapped back through L1."""
    if L1.ambient_dim != L2.ambient_dim:
        raise ValueError("lattices live in different ambient dimensions")
    N = L1.ambient_dim
    if L1.rank == 0 or L2.rank == 0:
        return IntegerLattice([], N)
    stacked = list(L1.basis) + [tuple(-x for x in v) for v in L2.basis]
    # z . stacked = 0  <=>  stacked^T z = 0
    cols = [[row[t] for row in stacked] for t in range(N)]
    ker = integer_kernel(cols, len(stacked))
    r1 = L1.rank
    vecs = [tuple(sum(z[i] * L1.basis[i][t] for i in range(r1)) for t in range(N)) for z in ker]
    return IntegerLattice(lll_reduce(vecs) if vecs else [], N, check=False)


def _solve_coords(L: IntegerLattice, v: Sequence[int]) -> list[Fraction] | None:
    """Rational s with s . basis = v, or None when v is outside the span."""
    r = L.rank
    G = _gram(L.basis)
    rhs = [_dot(b, v) for b in L.basis]
    A = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(G, rhs)]
    for c in range(r):
        piv = next(i for i in range(c, r) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        for i in range(r):
            if i != c and A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    s = [A[i][r] / A[i][i] for i in range(r)]
    back = [sum(s[i] * L.basis[i][t] for i in range(r)) for t in range(L.ambient_dim)]
    if any(b != x for b, x in zip(back, v)):
        return None
    return s


def membership(L: IntegerLattice, v: Sequence[int]) -> bool:
    v = _ivec(v)
    if len(v) != L.ambient_dim:
        raise ValueError("vector length does not match the ambient dimension")
    if not any(v):
        return True
    if L.rank == 0:
        return False
    s = _solve_coords(L, v)
    return s is not None and all(x.denominator == 1 for x in s)


def coordinates(L: IntegerLattice, v: Sequence[int]) -> tuple[int, ...]:
    """Integer coordinates of a lattice vector in ``L.basis``."""
    s = _solve_coords(L, _ivec(v))
    if s is None or any(x.denominator != 1 for x in s):
        raise ValueError("vector is not in the lattice")
    return tuple(int(x) for x in s)


def det(L: IntegerLattice) -> float:
    return L.det


# ---------------------------------------------------------------------------
# enumeration and minima


def predicted_box(L: IntegerLattice, X: float) -> float:
    """Number of coefficient boxes the enumeration may visit (product of per-level widths)."""
    _, (_, Bs) = L._lll_gso()
    out = 1.0
    for b in Bs:
        out *= 2.0 * math.floor(X / math.sqrt(b) + 1e-9) + 1.0
    return out


def _enumerate(L: IntegerLattice, R2: int, budget: int, skip_sign: bool = False):
    if L.rank == 0:
        return [] if skip_sign else [((), (0,) * L.ambient_dim, 0)]
    basis, (mu, Bs) = L._lll_gso()
    return _fincke_pohst(basis, mu, Bs, R2, budget, skip_sign)


def _radius_sq(X: float) -> int:
    if X < 0:
        return -1
    R2 = math.floor(X * X)
    # guard against X*X landing just below an integer
    if (R2 + 1) <= X * X * (1 + 1e-12):
        R2 += 1
    return R2


def enumerate_points(L: IntegerLattice, X: float, budget: int = DEFAULT_ENUM_BUDGET) -> list[tuple[int, ...]]:
    """Every point of L in the closed ball of radius X, in lex order."""
    if X < 0:
        return []
    if predicted_box(L, X) > budget:
        raise BudgetExceeded(f"predicted box {predicted_box(L, X):.3g} exceeds budget {budget}")
    pts = [v for _, v, _ in _enumerate(L, _radius_sq(X), budget)]
    return sorted(pts)


def _greedy_independent(cands):
    """Pick vectors in the given order, keeping each one that raises the rank."""
    chosen = []
    for item in cands:
        if _rank([c[1] for c in chosen] + [item[1]]) > len(chosen):
            chosen.append(item)
    return chosen


def successive_minima_sq(L: IntegerLattice, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[int, ...]:
    """Exact squared successive minima lambda_i^2."""
    with L._lock:
        cached = L._minima
    if cached is not None:
        return cached
    basis, _ = L._lll_gso()
    R2 = max((_dot(b, b) for b in basis), default=0)
    cands = _enumerate(L, R2, budget, skip_sign=True)
    cands.sort(key=lambda t: (t[2], t[1]))
    chosen = _greedy_independent(cands)
    if len(chosen) != L.rank:  # pragma: no cover - would mean the LLL basis lies outside R2
        raise RuntimeError("minima search missed a direction")
    mins = tuple(c[2] for c in chosen)
    with L._lock:
        if L._minima is None:
            L._minima = mins
        return L._minima


def successive_minima(L: IntegerLattice, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[float, ...]:
    return tuple(math.sqrt(m) for m in successive_minima_sq(L, budget))


def _minor_gcd_rows(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal (k x k) minors of a k x r integer matrix."""
    k = len(rows)
    if k == 0:
        return 1
    r = len(rows[0])
    g = 0
    for cols in itertools.combinations(range(r), k):
        g = math.gcd(g, _bareiss_det([[row[c] for c in cols] for row in rows]))
        if g == 1:
            return 1
    return g


def reduced_basis(L: IntegerLattice, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[tuple[int, ...], ...]:
    """Greedy primitive basis: v_i is a shortest lattice vector extending v_1..v_{i-1}
    to a primitive set, so lambda_i <= ||v_i|| <= (3/2)^(i-1) lambda_i.

    Ties are broken by the lex order of the coordinates in Z^N.
    """
    with L._lock:
        if L._reduced is not None:
            return L._reduced
    r = L.rank
    if r == 0:
        return ()
    lam2 = successive_minima_sq(L, budget)
    basis, _ = L._lll_gso()
    chosen: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for i in range(r):
        cap = math.ceil(1.5 ** (2 * i) * lam2[i]) + 1
        R2 = lam2[i]
        pick = None
        while pick is None:
            cands = _enumerate(L, R2, budget, skip_sign=True)
            cands.sort(key=lambda t: (t[2], t[1]))
            for x, v, _ in cands:
                coords = [c[0] for c in chosen] + [x]
                if _minor_gcd_rows(coords) == 1:
                    pick = (x, v)
                    break
            if pick is None:
                if R2 >= cap:  # pragma: no cover - excluded by the (3/2)^(i-1) bound
                    raise RuntimeError("no primitive extension found")
                R2 = min(cap, max(R2 + 1, int(R2 * 1.5625)))
        chosen.append(pick)
    out = tuple(v for _, v in chosen)
    with L._lock:
        if L._reduced is None:
            L._reduced = out
        return L._reduced


def prime_points(L: IntegerLattice, X: float, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """pi(L, X): lattice points in the ball of radius X with every coordinate a positive prime."""
    if X < 2 * math.sqrt(L.ambient_dim) - 1e-12:
        return 0
    return sum(1 for v in enumerate_points(L, X, budget) if all(is_prime(t) for t in v))


# ---------------------------------------------------------------------------
# minors, saturation, minimal determinants


def gcd_minors(*vectors: Sequence[int]) -> int:
    """gcd of all k x k minors of the k x N matrix with the given rows (0 iff dependent)."""
    rows = [_ivec(v) for v in vectors]
    if not rows:
        raise ValueError("gcd_minors needs at least one vector")
    return _minor_gcd_rows(rows)


def saturation(vectors: Sequence[Sequence[int]]) -> tuple[IntegerLattice, int]:
    """The smallest primitive lattice containing the vectors, and its index over their span."""
    vecs = [_ivec(v) for v in vectors if any(v)]
    if not vectors:
        raise ValueError("saturation needs at least one vector")
    N = len(vectors[0])
    span = IntegerLattice(lattice_basis(vecs), N, check=False) if vecs else IntegerLattice([], N)
    if span.rank == 0:
        return span, 1
    if span.rank == N:
        sat = IntegerLattice.standard(N)
    else:
        perp = integer_kernel(span.basis, N)
        sat = IntegerLattice(integer_kernel(perp, N), N, check=False)
    q, rem = divmod(span.det_sq, sat.det_sq)
    idx = math.isqrt(q)
    if rem or idx * idx != q:  # pragma: no cover - exact by construction
        raise ArithmeticError("saturation index is not an integer")
    return sat, idx


def frak_c_lattice(L: IntegerLattice, budget: int = 10**5) -> tuple:
    """(frak_c of the greedy reduced basis, max of frak_c over bases with ||v_j|| <= 2 (3/2)^(j-1) lambda_j).

    The basis vectors are the columns of A, so A has one row per ambient
    coordinate.  Values are floats or INF.
    """
    red = reduced_basis(L)

    def c_of(vs):
        A = [[v[t] for v in vs] for t in range(L.ambient_dim)]
        return frak_c(A, [0] * L.ambient_dim)

    lower = c_of(red)
    lam2 = successive_minima_sq(L)
    basis, _ = L._lll_gso()
    per_slot = []
    for j in range(L.rank):
        R2 = math.floor(4 * 1.5 ** (2 * j) * lam2[j] * (1 + 1e-12))
        pts = [(x, v) for x, v, _ in _enumerate(L, R2, DEFAULT_ENUM_BUDGET, skip_sign=False) if any(v)]
        per_slot.append(pts)
    total = math.prod(len(s) for s in per_slot)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate bases exceed budget {budget}")
    best = lower
    for combo in itertools.product(*per_slot):
        coords = [x for x, _ in combo]
        if abs(_bareiss_det([list(c) for c in coords])) != 1:
            continue
        val = c_of([v for _, v in combo])
        if val is INF or (best is not INF and val > best):
            best = val
            if best is INF:
                break
    return lower, best


def _gram_det2(x, y) -> int:
    return _dot(x, x) * _dot(y, y) - _dot(x, y) ** 2


def _sat_det_sq(vs: Sequence[Sequence[int]]) -> int:
    """det(saturation)^2 = Gram determinant / (gcd of maximal minors)^2; 0 if dependent."""
    g = _minor_gcd_rows(vs)
    if g == 0:
        return 0
    return _bareiss_det(_gram(vs)) // (g * g)


def d_r(x: Sequence[int], y: Sequence[int] | None = None, r: int = 2, budget: int = DEFAULT_ENUM_BUDGET) -> float:
    """Minimum determinant of a rank-r sublattice of Z^N containing x (and y).

    With every defining vector given, this is det(saturation).  Otherwise the
    search is exhaustive: an optimal lattice L of determinant D is the
    saturation of the given vectors together with some of its successive-minimum
    vectors, and Minkowski's second theorem (lambda_i >= 1 in Z^N) bounds
    those by ||z||^2 <= (4/3) D^2 for r = 2, ||z||^2 <= 2 D^2 for one missing
    vector at r = 3, and ||y||^2 ||z||^2 <= 2 D^2 for two.  D is replaced by
    the best value found so far, starting from coordinate completions.
    """
    if r not in (2, 3):
        raise ValueError("d_r supports r in {2, 3}")
    x = _ivec(x)
    fixed = [x] + ([_ivec(y)] if y is not None else [])
    N = len(x)
    if _rank(fixed) != len(fixed):
        raise ValueError("given vectors are linearly dependent")
    if len(fixed) > r:
        raise ValueError("more vectors than the requested rank")
    if len(fixed) == r:
        return math.sqrt(_sat_det_sq(fixed))
    if r > N:
        raise ValueError("rank exceeds the ambient dimension")
    missing = r - len(fixed)
    units = [tuple(1 if i == j else 0 for j in range(N)) for i in range(N)]
    best = min(
        s for s in (_sat_det_sq(fixed + list(e)) for e in itertools.combinations(units, missing)) if s
    )
    hermite = Fraction(4, 3) if r == 2 else Fraction(2)
    R2 = math.floor(hermite * best)
    cands = _enumerate(IntegerLattice.standard(N), R2, budget, skip_sign=True)
    cands.sort(key=lambda t: t[2])
    if missing == 1:
        for _, z, n2 in cands:
            if n2 > hermite * best:
                break
            s = _sat_det_sq(fixed + [z])
            if s and s < best:
                best = s
        return math.sqrt(best)
    for i, (_, y1, n1) in enumerate(cands):
        if n1 * n1 > 2 * best:
            break
        for _, z, n2 in cands[i + 1 :]:
            if n1 * n2 > 2 * best:
                break
            s = _sat_det_sq([x, y1, z])
            if s and s < best:
                best = s
    return math.sqrt(best)


def d2_formula(x: Sequence[int], y: Sequence[int]) -> float:
    """det of the saturation of {x, y} as sqrt(||x||^2||y||^2 - <x,y>^2) / G(x, y)."""
    g = gcd_minors(x, y)
    if g == 0:
        raise ValueError("x and y are dependent")
    return math.sqrt(_gram_det2(_ivec(x), _ivec(y))) / g


def delta_vectors(u: Sequence[int], v: Sequence[int]) -> float:
    """||u|| ||v|| / det(Zu + Zv)."""
    u, v = _ivec(u), _ivec(v)
    gram = _gram_det2(u, v)
    if gram == 0:
        raise ValueError("vectors are dependent")
    return math.sqrt(_dot(u, u) * _dot(v, v) / gram)


def delta_xy(x: Sequence[int], y: Sequence[int], basis: MonomialBasis) -> float:
    """Delta(x, y) = ||nu(x)|| ||nu(y)|| / det(Z nu(x) + Z nu(y))."""
    return delta_vectors(veronese(_ivec(x), basis), veronese(_ivec(y), basis))

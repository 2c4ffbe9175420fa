"""Prime-point counting statistics over the shared set of non-diagonal prime vectors.

Every sum over prime vectors runs in ascending lex order of x and is reduced
with ``math.fsum``, so reports are bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import _kernels
from ._parallel import pmap
from .arith import ScaleParams, iterated_log, primes_up_to, rad, scale_params
from .forms import Form, MonomialBasis, monomial_basis, sample_primitive_batch, veronese_array
from .lattice import _dot, gcd_minors, intersect, solution_lattice
from .lattice import delta_vectors

DEFAULT_XI_BUDGET = 5_000_000
_INT64_SAFE = 2**62


class XiBudgetExceeded(RuntimeError):
    pass


def _radius_sq(d: int, n: int, B: float) -> int:
    k = n + 1 - d
    if k <= 0:
        raise ValueError(f"counting needs n + 1 > d (radius exponent 1/(n+1-d) = 1/{k} is undefined)")
    if B <= 1:
        raise ValueError("B must exceed 1")
    r2 = float(B) ** (2.0 / k)
    near = round(r2)
    if abs(r2 - near) <= 1e-9 * max(1.0, r2):
        return int(near)
    return math.floor(r2)


@dataclass(frozen=True)
class PrimeVectorSet:
    d: int
    n: int
    B: float
    radius: float
    vectors: np.ndarray  # shape (|Xi'|, n+1), int64, ascending lex order

    def __len__(self) -> int:
        return int(self.vectors.shape[0])

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(t) for t in v) for v in self.vectors]


def enumerate_Xi(d: int, n: int, B: float, budget: int = DEFAULT_XI_BUDGET) -> PrimeVectorSet:
    """Prime (n+1)-tuples with ||x|| <= B^(1/(n+1-d)), all-equal tuples removed."""
    R2 = _radius_sq(d, n, B)
    k = n + 1
    if 4 * k > R2:
        V = np.zeros((0, k), dtype=np.int64)
    else:
        # every other coordinate is at least 2, which caps each prime
        primes = primes_up_to(math.isqrt(R2 - 4 * (k - 1)))
        est = len(primes) ** k
        if est > 50 * budget:
            raise XiBudgetExceeded(f"prime box of size {est} is far beyond the budget {budget}")
        V = np.asarray(_kernels.prime_tuples(np.array(primes, dtype=np.int64), k, R2), dtype=np.int64)
        V = V.reshape(-1, k)
        V = V[~(V == V[:, :1]).all(axis=1)]
    if V.shape[0] > budget:
        raise XiBudgetExceeded(f"|Xi'| = {V.shape[0]} exceeds the budget {budget}")
    return PrimeVectorSet(d, n, float(B), math.sqrt(R2), V)


def cone_member(v: Sequence, t: Sequence, gamma: float) -> bool:
    """|<v,t>| <= ||v|| ||t|| / (2 gamma), compared as 4 gamma^2 <v,t>^2 <= ||v||^2 ||t||^2.

    Integer inputs are compared exactly (gamma is taken as the exact rational
    value of the float).
    """
    if all(isinstance(x, (int, np.integer)) for x in list(v) + list(t)):
        v = [int(x) for x in v]
        t = [int(x) for x in t]
        g = Fraction(gamma)
        return 4 * g * g * _dot(v, t) ** 2 <= _dot(v, v) * _dot(t, t)
    v = np.asarray(v, float)
    t = np.asarray(t, float)
    return 4 * gamma * gamma * float(v @ t) ** 2 <= float(v @ v) * float(t @ t)


def _cone_mask(Nu: np.ndarray, a: Sequence[int], gamma: float, inner: np.ndarray) -> np.ndarray:
    """Vectorised cone test with an exact recheck of near-ties."""
    af = np.asarray(a, dtype=np.float64)
    nn = np.einsum("ij,ij->i", Nu.astype(np.float64), Nu.astype(np.float64))
    lhs = 4.0 * gamma * gamma * inner.astype(np.float64) ** 2
    rhs = nn * float(af @ af)
    mask = lhs <= rhs
    close = np.flatnonzero(np.abs(lhs - rhs) <= 1e-9 * np.maximum(rhs, 1.0))
    for i in close:
        mask[i] = cone_member([int(x) for x in Nu[i]], [int(x) for x in a], gamma)
    return mask


def _nu(Xi: PrimeVectorSet) -> np.ndarray:
    return veronese_array(Xi.vectors, monomial_basis(Xi.d, Xi.n))


def _inner(Nu: np.ndarray, a: Sequence[int]) -> np.ndarray:
    a = [int(c) for c in a]
    big = max(abs(c) for c in a) * (int(np.abs(Nu).max(initial=0)) if Nu.size else 0) * len(a)
    if Nu.dtype != object and big < _INT64_SAFE:
        return Nu @ np.array(a, dtype=np.int64)
    return np.array([sum(int(c) * int(x) for c, x in zip(a, row)) for row in Nu], dtype=object)


@dataclass(frozen=True)
class CountReport:
    form: tuple[int, ...]
    d: int
    n: int
    B: float
    solutions: int
    N_prime: float
    N_ploc: float
    scale: ScaleParams
    solution_list: tuple[tuple[int, ...], ...] = ()

    def to_json(self, with_solutions: bool = True) -> dict:
        out = {
            "form": list(self.form),
            "d": self.d,
            "n": self.n,
            "B": self.B,
            "solutions": self.solutions,
            "N_prime": self.N_prime,
            "N_ploc": self.N_ploc,
            "scale": self.scale.to_json(),
        }
        if with_solutions:
            out["solution_list"] = [list(x) for x in self.solution_list]
        return out


def _sums(f: Form, B: float, Xi: PrimeVectorSet, Nu: np.ndarray):
    sp = scale_params(B)
    inner = _inner(Nu, f.coeffs)
    exact = np.asarray(inner == 0, dtype=bool)
    W = sp.W
    cong = np.asarray(np.mod(inner, W) == 0, dtype=bool)
    cone = _cone_mask(Nu, f.coeffs, sp.alpha, inner)
    norms = np.sqrt(np.einsum("ij,ij->i", Nu.astype(np.float64), Nu.astype(np.float64)))
    return sp, exact, cong & cone, norms


def count_Nprime(f: Form, B: float, Xi: PrimeVectorSet | None = None) -> CountReport:
    """N'_V(B) = (log B)^(n+1) #{x in Xi' : f(x) = 0}, together with N^ploc_V(B)."""
    return _count(f, B, Xi)


def count_Nploc(f: Form, B: float, Xi: PrimeVectorSet | None = None) -> CountReport:
    """N^ploc_V(B) = (log B)^(n+1) alpha W / ||a|| sum 1/||nu(x)|| over x in Xi' with
    <a, nu(x)> = 0 mod W and a in the alpha-cone of nu(x)."""
    return _count(f, B, Xi)


def _count(f: Form, B: float, Xi: PrimeVectorSet | None) -> CountReport:
    if Xi is None:
        Xi = enumerate_Xi(f.d, f.n, B)
    elif (Xi.d, Xi.n) != (f.d, f.n) or Xi.B != float(B):
        raise ValueError("Xi' was built for different parameters")
    logB = math.log(B)
    if len(Xi) == 0:
        return CountReport(f.coeffs, f.d, f.n, float(B), 0, 0.0, 0.0, scale_params(B))
    Nu = _nu(Xi)
    sp, exact, loc, norms = _sums(f, B, Xi, Nu)
    sols = tuple(tuple(int(t) for t in Xi.vectors[i]) for i in np.flatnonzero(exact))
    s = math.fsum(1.0 / norms[i] for i in np.flatnonzero(loc))
    Nploc = logB ** (f.n + 1) * sp.alpha * sp.W / f.norm * s
    return CountReport(f.coeffs, f.d, f.n, float(B), len(sols), logB ** (f.n + 1) * len(sols), Nploc, sp, sols)


def delta_mix(f: Form, B: float, Xi: PrimeVectorSet | None = None) -> float:
    """(log B)^(n+1) alpha W / ||a|| * sum of 1/||nu(x)|| over exact prime zeros x."""
    Xi = enumerate_Xi(f.d, f.n, B) if Xi is None else Xi
    if len(Xi) == 0:
        return 0.0
    Nu = _nu(Xi)
    sp, exact, _, norms = _sums(f, B, Xi, Nu)
    s = math.fsum(1.0 / norms[i] for i in np.flatnonzero(exact))
    return math.log(B) ** (f.n + 1) * sp.alpha * sp.W / f.norm * s


def delta_loc(f: Form, B: float, Xi: PrimeVectorSet | None = None) -> float:
    """(log B)^(n+1) alpha^2 W^2 / ||a||^2 * sum of 1/||nu(x)||^2 over the N^ploc support."""
    Xi = enumerate_Xi(f.d, f.n, B) if Xi is None else Xi
    if len(Xi) == 0:
        return 0.0
    Nu = _nu(Xi)
    sp, _, loc, norms = _sums(f, B, Xi, Nu)
    s = math.fsum(1.0 / norms[i] ** 2 for i in np.flatnonzero(loc))
    return math.log(B) ** (f.n + 1) * (sp.alpha * sp.W) ** 2 / f.norm_sq * s


def enumerate_Omega(d: int, n: int, B: float, Xi: PrimeVectorSet | None = None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Ordered pairs (x, y) of distinct members of Xi'."""
    Xi = enumerate_Xi(d, n, B) if Xi is None else Xi
    T = Xi.tuples()
    return [(x, y) for x in T for y in T if x != y]


def _pair_dets(Nu: np.ndarray):
    """sqrt(gram)/G for all pairs i < j, as (I, J, det) arrays."""
    m = Nu.shape[0]
    I, J = np.triu_indices(m, k=1)
    I = I.astype(np.int64)
    J = J.astype(np.int64)
    nmax = int(np.abs(Nu).max(initial=0))
    if Nu.dtype != object and (nmax**4) * Nu.shape[1] ** 2 < _INT64_SAFE:
        gram, g = _kernels.pair_minor_data(np.ascontiguousarray(Nu, dtype=np.int64), I, J)
        gram = np.asarray(gram)
        g = np.asarray(g)
        if (gram <= 0).any():
            raise ValueError("dependent Veronese images in Omega'")
        dets = np.sqrt(gram.astype(np.float64)) / g.astype(np.float64)
        return I, J, dets
    rows = [tuple(int(x) for x in r) for r in Nu]
    dets = np.empty(len(I))
    for k, (i, j) in enumerate(zip(I, J)):
        u, v = rows[i], rows[j]
        gram = _dot(u, u) * _dot(v, v) - _dot(u, v) ** 2
        if gram <= 0:
            raise ValueError("dependent Veronese images in Omega'")
        dets[k] = math.sqrt(gram) / gcd_minors(u, v)
    return I, J, dets


def compute_E(d: int, n: int, B: float, method: str = "gram", Xi: PrimeVectorSet | None = None) -> float:
    """E'_{d,n}(B) = (log B)^(2n+2) sum over Omega' of 1/det(Lambda_nu(x) cap Lambda_nu(y)).

    ``gram`` uses det(Lambda_u cap Lambda_v) = sqrt(|u|^2|v|^2 - <u,v>^2) / G(u, v);
    ``intersect`` builds every intersection lattice explicitly.
    """
    Xi = enumerate_Xi(d, n, B) if Xi is None else Xi
    if len(Xi) < 2:
        return 0.0
    Nu = _nu(Xi)
    if method == "gram":
        _, _, dets = _pair_dets(Nu)
        inv = [1.0 / x for x in dets]
    elif method == "intersect":
        rows = [tuple(int(x) for x in r) for r in Nu]
        lats = [solution_lattice(r) for r in rows]
        inv = [1.0 / intersect(lats[i], lats[j]).det for i in range(len(rows)) for j in range(i + 1, len(rows))]
    else:
        raise ValueError(f"unknown method {method!r}")
    # each unordered pair stands for (x, y) and (y, x)
    return math.log(B) ** (2 * n + 2) * 2.0 * math.fsum(inv)


def compute_E_lower(d: int, n: int, B: float, Xi: PrimeVectorSet | None = None) -> float:
    """(log B)^(2n+2) sum over Omega' of 1/(||nu(x)|| ||nu(y)||), a lower bound for E'."""
    Xi = enumerate_Xi(d, n, B) if Xi is None else Xi
    if len(Xi) < 2:
        return 0.0
    Nu = _nu(Xi).astype(np.float64)
    inv = 1.0 / np.linalg.norm(Nu, axis=1)
    I, J = np.triu_indices(len(inv), k=1)
    return math.log(B) ** (2 * n + 2) * 2.0 * math.fsum((inv[I] * inv[J]).tolist())


def eps_xy(x: Sequence[int], y: Sequence[int], B: float, basis: MonomialBasis) -> float:
    """E_{x,y}(B) = min{1, Delta(x,y)^2 / alpha^2} + [G(x, y) does not divide W/rad(W)]."""
    from .forms import veronese

    sp = scale_params(B)
    delta = delta_vectors(veronese(tuple(int(t) for t in x), basis), veronese(tuple(int(t) for t in y), basis))
    G = gcd_minors(x, y)
    q = sp.W // rad(sp.W)
    indicator = 1 if (G == 0 or q % G != 0) else 0
    return min(1.0, delta * delta / (sp.alpha * sp.alpha)) + indicator


def ell2(n: int, X: float, Y: float, Delta: float) -> int:
    """l'_{2,n}(X, Y; Delta): ordered pairs of prime vectors, ||x|| <= X, ||y|| <= Y,
    linearly independent, whose saturation has determinant <= Delta."""
    k = n + 1

    def prime_vectors(R: float) -> list[tuple[int, ...]]:
        R2 = math.floor(R * R + 1e-9)
        if R2 < 4 * k:
            return []
        primes = primes_up_to(math.isqrt(R2 - 4 * (k - 1)))
        V = np.asarray(_kernels.prime_tuples(np.array(primes, dtype=np.int64), k, R2)).reshape(-1, k)
        return [tuple(int(t) for t in v) for v in V]

    xs, ys = prime_vectors(X), prime_vectors(Y)
    if Delta < 1 or not xs or not ys:
        return 0
    D2 = Fraction(Delta) ** 2
    count = 0
    for x in xs:
        for y in ys:
            gram = _dot(x, x) * _dot(y, y) - _dot(x, y) ** 2
            if gram == 0:
                continue
            g = gcd_minors(x, y)
            if gram <= D2 * g * g:
                count += 1
    return count


def zeta(s: float) -> float:
    if s <= 1:
        raise ValueError("zeta(s) diverges for s <= 1")
    return float(mpmath.zeta(s))


def ball_volume(m: int) -> float:
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def iota(d: int, n: int) -> float:
    """iota'_{d,n} = V_{N-2} / (2 zeta(N-2))."""
    N = monomial_basis(d, n).N
    if N - 2 <= 1:
        raise ValueError(f"iota' needs N - 2 > 1, got N = {N}")
    return ball_volume(N - 2) / (2.0 * zeta(N - 2))


@dataclass(frozen=True)
class VarianceResult:
    d: int
    n: int
    A: float
    B: float
    epsilon: float
    mean_sq_diff: float
    stderr: float
    comparison_scale: float
    xi_size: int
    rows: tuple[dict, ...]

    def to_json(self, with_rows: bool = True) -> dict:
        out = {
            "d": self.d,
            "n": self.n,
            "A": self.A,
            "B": self.B,
            "epsilon": self.epsilon,
            "mean_sq_diff": self.mean_sq_diff,
            "stderr": self.stderr,
            "comparison_scale": self.comparison_scale,
            "xi_size": self.xi_size,
        }
        if with_rows:
            out["rows"] = list(self.rows)
        return out


def default_B(A: float, n: int, epsilon: float = 0.1) -> float:
    """B = A (log A)^(2n+2+epsilon)."""
    return A * math.log(A) ** (2 * n + 2 + epsilon)


def variance_experiment(
    d: int,
    n: int,
    A: float,
    B: float | None = None,
    m: int = 100,
    seed: int = 0,
    epsilon: float = 0.1,
    threads: int | None = None,
) -> VarianceResult:
    """Monte-Carlo mean of (N'_V(B) - N^ploc_V(B))^2 over uniform primitive a in the ball of radius A."""
    if m < 1:
        raise ValueError("the ensemble needs at least one sample")
    if B is None:
        B = default_B(A, n, epsilon)
    basis = monomial_basis(d, n)
    Xi = enumerate_Xi(d, n, B)
    rng = np.random.default_rng(seed)
    coeffs = sample_primitive_batch(basis.N, A, m, rng)

    def one(i: int) -> dict:
        f = Form(basis, tuple(int(c) for c in coeffs[i]))
        rep = _count(f, B, Xi)
        diff = rep.N_prime - rep.N_ploc
        return {
            "form_id": i,
            "A": float(A),
            "B": float(B),
            "N_prime": rep.N_prime,
            "N_ploc": rep.N_ploc,
            "diff_sq": diff * diff,
        }

    rows = pmap(one, range(m), threads)
    sq = [r["diff_sq"] for r in rows]
    mean = math.fsum(sq) / m
    var = math.fsum((s - mean) ** 2 for s in sq) / (m - 1) if m > 1 else 0.0
    comp = B * B / (A * A * iterated_log(A, 2) ** (n - 2 - epsilon))
    return VarianceResult(d, n, float(A), float(B), epsilon, mean, math.sqrt(var / m), comp, len(Xi), tuple(rows))

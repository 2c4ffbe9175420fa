"""Local solubility over R+ and over the p-adic units, and the local densities sigma', tau'.

Verdicts carry certificates that can be re-checked independently:

* p-adic Soluble: a unit residue vector x mod p^r with f(x) = 0 mod p^r and
  v_p(grad f(x)) = e, 2e + 1 <= r (Hensel lifting then gives a unit point).
* p-adic Insoluble(r): the residue tree has no unit zero mod p^r.
* real Soluble: a strictly positive point on the unit sphere with tiny |f|,
  bracketed by a sign change or hit exactly on a grid.
* real Insoluble: either a one-signed expansion of f*(x0+...+xn)^k, or a
  grid on the simplex whose smallest |f| beats the Lipschitz slack.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from ._parallel import child_rngs, pmap
from .arith import factorize, is_prime, primes_up_to, scale_params
from .forms import Form, MonomialBasis, gradient, monomial_basis, sample_primitive_batch, veronese_array

DEFAULT_P_MAX = 101
DEFAULT_FRONTIER_BUDGET = 200_000
DEFAULT_RESIDUE_BUDGET = 10**7
_INT64_SAFE = 2**62


def default_r_max(d: int) -> int:
    return 2 * d + 3


def euler_phi(Q: int) -> int:
    if Q < 1:
        raise ValueError("euler_phi needs Q >= 1")
    out = Q
    for p in (factorize(Q) if Q > 1 else {}):
        out = out // p * (p - 1)
    return out


def _units(Q: int) -> list[int]:
    if Q == 1:
        return [0]
    return [u for u in range(Q) if math.gcd(u, Q) == 1]


# ---------------------------------------------------------------------------
# real places


@dataclass(frozen=True)
class RealConfig:
    samples: int = 10_000
    seed: int = 0
    polya_max: int = 40
    mesh_start: int = 16
    mesh_max: int = 512
    mesh_points_max: int = 3_000_000


@dataclass(frozen=True)
class RealVerdict:
    status: str  # "Soluble" | "Insoluble" | "Unknown"
    witness: tuple[float, ...] | None = None
    residual: float | None = None
    method: str | None = None
    mesh_h: float | None = None
    margin: float | None = None
    lipschitz: float | None = None
    polya_power: int | None = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        for k in ("witness", "residual", "method", "mesh_h", "margin", "lipschitz", "polya_power"):
            v = getattr(self, k)
            if v is not None:
                out[k] = list(v) if isinstance(v, tuple) else v
        return out


def lipschitz_bound(f: Form) -> float:
    """L(a) = d * ||a||_1, a bound for sum_i |df/du_i| on [0, 1]^(n+1)."""
    return float(f.d * sum(abs(c) for c in f.coeffs))


def _eval_float(f: Form, u: Sequence[float]) -> float:
    return math.fsum(
        c * math.prod(x**e for x, e in zip(u, ex)) for c, ex in zip(f.coeffs, f.basis.exponents) if c
    )


def _bisect(f: Form, pos: np.ndarray, neg: np.ndarray, iters: int = 200) -> np.ndarray:
    lo, hi = np.asarray(pos, float), np.asarray(neg, float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        v = _eval_float(f, mid)
        if v == 0.0:
            return mid
        if v > 0:
            lo = mid
        else:
            hi = mid
        if np.array_equal(lo, hi):
            break
    return 0.5 * (lo + hi)


def _soluble(f: Form, point, method: str) -> RealVerdict:
    u = np.asarray(point, dtype=float)
    u = u / np.linalg.norm(u)
    return RealVerdict("Soluble", witness=tuple(float(x) for x in u), residual=abs(_eval_float(f, u)), method=method)


def polya_certificate(f: Form, k_max: int = 40) -> int | None:
    """Smallest k <= k_max with f * (x0+...+xn)^k one-signed coefficientwise, else None.

    A one-signed expansion with some nonzero coefficient is positive (or
    negative) at every point with positive coordinates, so f has no zero
    there.  Exact int64 arithmetic; the search stops early if growth would
    overflow.
    """
    n, d = f.n, f.d
    k = n + 1
    # dense coefficients indexed by the first n exponents; the last one is implied
    D = d + k_max
    C = np.zeros((D + 1,) * n, dtype=np.int64)
    for c, ex in zip(f.coeffs, f.basis.exponents):
        C[ex[:n]] += c
    bound = _INT64_SAFE // (k + 1)
    for j in range(k_max + 1):
        if j > 0:
            new = C.copy()
            for i in range(n):
                sl_dst = [slice(None)] * n
                sl_src = [slice(None)] * n
                sl_dst[i] = slice(1, None)
                sl_src[i] = slice(0, -1)
                new[tuple(sl_dst)] += C[tuple(sl_src)]
            C = new
        mn, mx = int(C.min()), int(C.max())
        if mn >= 0 or mx <= 0:
            return j
        if max(-mn, mx) > bound:
            return None
    return None


def real_positive_soluble(f: Form, cfg: RealConfig = RealConfig()) -> RealVerdict:
    """Decide whether f has a zero with all coordinates strictly positive."""
    E = f.basis.exponent_array()
    a = np.array(f.coeffs, dtype=np.float64)
    # random sign search on the positive cap
    if cfg.samples > 0:
        rng = np.random.default_rng(cfg.seed)
        U = np.abs(rng.standard_normal((cfg.samples, f.n + 1)))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        vals = veronese_array(U, f.basis) @ a
        zero = np.flatnonzero(vals == 0.0)
        if zero.size:
            return _soluble(f, U[zero[0]], "sample")
        pos, neg = np.flatnonzero(vals > 0), np.flatnonzero(vals < 0)
        if pos.size and neg.size:
            return _soluble(f, _bisect(f, U[pos[0]], U[neg[0]]), "sign-change")
    k = polya_certificate(f, cfg.polya_max) if cfg.polya_max >= 0 else None
    if k is not None:
        return RealVerdict("Insoluble", method="polya", polya_power=k)
    L = lipschitz_bound(f)
    M = cfg.mesh_start
    while M <= cfg.mesh_max and math.comb(M + f.n, f.n) <= cfg.mesh_points_max:
        event, pa, pb, min_abs = _kernels.simplex_scan(E, a, M)
        if event == 1:
            return _soluble(f, np.asarray(pa, float) / M, "grid-zero")
        if event == 2:
            return _soluble(f, _bisect(f, np.asarray(pa, float) / M, np.asarray(pb, float) / M), "grid-sign-change")
        h = 1.0 / M
        if min_abs > L * h:
            return RealVerdict("Insoluble", method="mesh", mesh_h=h, margin=float(min_abs), lipschitz=L)
        M *= 2
    return RealVerdict("Unknown")


# ---------------------------------------------------------------------------
# p-adic places


@dataclass(frozen=True)
class PadicVerdict:
    p: int
    status: str  # "Soluble" | "Insoluble" | "Undecided"
    level: int
    witness: tuple[int, ...] | None = None
    grad_valuation: int | None = None
    budget_hit: bool = False

    def to_json(self) -> dict:
        out = {"p": self.p, "status": self.status, "level": self.level}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["grad_valuation"] = self.grad_valuation
        if self.budget_hit:
            out["budget_hit"] = True
        return out


def unit_solubility_padic(
    f: Form, p: int, r_max: int | None = None, budget: int = DEFAULT_FRONTIER_BUDGET
) -> PadicVerdict:
    """Breadth-first search of unit residue vectors mod p, p^2, ... (x0 scaled to 1).

    Returns Soluble at the first node with f = 0 mod p^r and 2 v_p(grad f) + 1 <= r,
    Insoluble(r) when level r has no unit zero at all, Undecided at r_max.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    r_max = default_r_max(f.d) if r_max is None else int(r_max)
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if p ** r_max >= 2**62:
        raise ValueError("p^r_max does not fit the residue arithmetic")
    E = f.basis.exponent_array()
    coeffs = list(f.coeffs)
    frontier = np.zeros((0, f.n + 1), dtype=np.int64)
    lost = False
    for r in range(1, r_max + 1):
        found, wit, e, nxt, overflow = _kernels.padic_scan(E, coeffs, frontier, p, r, budget)
        if found:
            return PadicVerdict(p, "Soluble", r, tuple(int(v) for v in wit), int(e), lost)
        lost = lost or bool(overflow)
        if len(nxt) == 0:
            if lost:
                return PadicVerdict(p, "Undecided", r, budget_hit=True)
            return PadicVerdict(p, "Insoluble", r)
        frontier = np.ascontiguousarray(nxt, dtype=np.int64)
    return PadicVerdict(p, "Undecided", r_max, budget_hit=lost)


def _vp(v: int, p: int, cap: int) -> int:
    if v == 0:
        return cap
    e = 0
    while v % p == 0 and e < cap:
        v //= p
        e += 1
    return e


def verify_padic_certificate(f: Form, v: PadicVerdict) -> bool:
    """Re-check a Soluble certificate with exact integer arithmetic."""
    if v.status != "Soluble" or v.witness is None:
        return False
    p, r, e = v.p, v.level, v.grad_valuation
    Q = p**r
    x = v.witness
    if any(t % p == 0 for t in x) or 2 * e + 1 > r:
        return False
    if f(x) % Q:
        return False
    ge = min(_vp(g % Q, p, r) for g in gradient(f, x))
    return ge == e


def grad_valuation_class(f: Form | Sequence[int], p: int, r: int, basis: MonomialBasis | None = None) -> frozenset[int]:
    """Every e in 0..r with a unit x mod p^r, f(x) = 0 mod p^r and v_p(grad f(x)) = e."""
    f = _as_form(f, basis)
    counts = _kernels.zero_valuations(f.basis.exponent_array(), list(f.coeffs), p, r)
    return frozenset(int(e) for e in np.flatnonzero(np.asarray(counts)))


def _as_form(f, basis: MonomialBasis | None) -> Form:
    if isinstance(f, Form):
        return f
    if basis is None:
        raise ValueError("a basis is required for raw coefficient vectors")
    return Form(basis, tuple(int(c) for c in f))


# ---------------------------------------------------------------------------
# non-Archimedean density sigma'


@lru_cache(maxsize=64)
def _unit_table(d: int, n: int, Q: int) -> np.ndarray:
    """nu(b) mod Q for every unit b with b0 = 1, in odometer order."""
    units = _units(Q)
    basis = monomial_basis(d, n)
    E = basis.exponent_array()
    B = np.array([(1 % Q,) + t for t in itertools.product(units, repeat=n)], dtype=np.int64)
    T = np.ones((B.shape[0], basis.N), dtype=np.int64) % max(Q, 1)
    for j in range(n + 1):
        for k in range(basis.N):
            for _ in range(int(E[k, j])):
                T[:, k] = (T[:, k] * B[:, j]) % Q
    T.setflags(write=False)
    return T


def _check_residue_budget(n: int, Q: int, budget: int) -> None:
    size = euler_phi(Q) ** n
    if size > budget:
        raise ValueError(f"phi({Q})^{n} = {size} unit residues exceed the budget {budget}")


def sigma_counts(A, Q: int, basis: MonomialBasis, budget: int = DEFAULT_RESIDUE_BUDGET) -> np.ndarray:
    """#{unit b mod Q with b0 = 1 : <a, nu(b)> = 0 mod Q} for each row a of A."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if Q * Q * basis.N >= _INT64_SAFE:
        raise ValueError("modulus too large for the residue scan")
    _check_residue_budget(basis.n, Q, budget)
    T = _unit_table(basis.d, basis.n, Q)
    A = np.array([[int(c) % Q for c in a] for a in A], dtype=np.int64).reshape(-1, basis.N)
    return np.asarray(_kernels.residue_counts(T, A, Q), dtype=np.int64)


def sigma_from_count(count: int, Q: int, n: int) -> Fraction:
    # all unit b are unit multiples of those with b0 = 1
    return Fraction(Q * int(count), euler_phi(Q) ** n)


def sigma_prime(a: Sequence[int], Q: int, basis: MonomialBasis, budget: int = DEFAULT_RESIDUE_BUDGET) -> Fraction:
    """sigma'(a; Q) = Q / phi(Q)^(n+1) * #{unit b mod Q : <a, nu(b)> = 0 mod Q}, exactly."""
    cnt = int(sigma_counts([a], Q, basis, budget)[0])
    return sigma_from_count(cnt, Q, basis.n)


def sigma_prime_many(A, Q: int, basis: MonomialBasis, budget: int = DEFAULT_RESIDUE_BUDGET) -> list[Fraction]:
    return [sigma_from_count(c, Q, basis.n) for c in sigma_counts(A, Q, basis, budget)]


def residue_vectors(p: int, r: int, N: int) -> np.ndarray:
    """All of (Z/p^r)^N with some entry a unit, in odometer order."""
    Q = p**r
    grid = np.array(list(itertools.product(range(Q), repeat=N)), dtype=np.int64).reshape(-1, N)
    return grid[(grid % p != 0).any(axis=1)]


def sigma_mean_exact(p: int, r: int, basis: MonomialBasis) -> Fraction:
    """Mean of sigma'(a; p^r) over every a mod p^r with a unit entry, by full enumeration."""
    A = residue_vectors(p, r, basis.N)
    counts = sigma_counts(A, p**r, basis)
    total = sum(int(c) for c in counts)
    return sigma_from_count(total, p**r, basis.n) / len(A)


def sigma_mean_closed_form(p: int, N: int) -> Fraction:
    return (1 - Fraction(1, p**N)) ** -1 * (1 - Fraction(1, p ** (N - 1)))


def _basis_for(b_len: int, N: int) -> MonomialBasis:
    n = b_len - 1
    for d in range(1, N + 1):
        if math.comb(n + d, d) == N:
            return monomial_basis(d, n)
        if math.comb(n + d, d) > N:
            break
    raise ValueError(f"no degree d with N_(d,{n}) = {N}")


def count_solution_residues(
    b: Sequence[int],
    p: int,
    r: int,
    N: int | None = None,
    basis: MonomialBasis | None = None,
    method: str = "dp",
) -> int:
    """#{a mod p^r with a unit entry : <a, nu(b)> = 0 mod p^r}.

    ``method="enumerate"`` scans all of (Z/p^r)^N; ``"dp"`` counts the same set
    exactly by convolving coordinate by coordinate.
    """
    if basis is None:
        if N is None:
            raise ValueError("give N or basis")
        basis = _basis_for(len(b), N)
    Q = p**r
    nu = np.array([_nu_mod(b, basis, Q)], dtype=np.int64)
    if not (nu % p != 0).any():
        raise ValueError("nu(b) has no unit entry mod p")
    if method == "enumerate":
        return int(_kernels.residue_counts(residue_vectors(p, r, basis.N), nu, Q)[0])
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    return int(count_solution_residues_many(nu, p, r)[0])


def count_solution_residues_many(V: np.ndarray, p: int, r: int) -> np.ndarray:
    """For each row v of V: #{a mod p^r with a unit entry : <a, v> = 0 mod p^r}.

    Tracks, per row, how many partial vectors reach each residue of the partial
    inner product, split by whether a unit entry has appeared yet.  The cyclic
    convolutions go through the FFT; counts stay below 2^53, and the rounding
    slack is checked.
    """
    Q = p**r
    V = np.asarray(V, dtype=np.int64) % Q
    m = V.shape[0]
    xs = np.arange(Q)
    is_unit = (xs % p != 0).astype(np.float64)
    none = np.zeros((m, Q))
    none[:, 0] = 1.0
    some = np.zeros((m, Q))
    offsets = (np.arange(m) * Q)[:, None]
    for j in range(V.shape[1]):
        t = (xs[None, :] * V[:, j : j + 1]) % Q + offsets
        h_unit = np.bincount(t.ravel(), weights=np.broadcast_to(is_unit, t.shape).ravel(), minlength=m * Q).reshape(m, Q)
        h_all = np.bincount(t.ravel(), minlength=m * Q).reshape(m, Q).astype(np.float64)
        Fn, Fs = np.fft.rfft(none, axis=1), np.fft.rfft(some, axis=1)
        Hu, Ha = np.fft.rfft(h_unit, axis=1), np.fft.rfft(h_all, axis=1)
        none, some = (np.fft.irfft(Fn * (Ha - Hu), n=Q, axis=1), np.fft.irfft(Fn * Hu + Fs * Ha, n=Q, axis=1))
        for arr in (none, some):
            rounded = np.rint(arr)
            if np.abs(arr - rounded).max(initial=0.0) > 0.25:
                raise ArithmeticError("FFT rounding slack too large")
            arr[...] = rounded
    return some[:, 0].astype(np.int64)


def _nu_mod(b, basis, Q):
    return [math.prod(pow(int(x), e, Q) for x, e in zip(b, ex)) % Q for ex in basis.exponents]


def count_solution_residues_closed_form(p: int, r: int, N: int) -> int:
    return p ** (r * (N - 1)) - p ** ((r - 1) * (N - 1))


# ---------------------------------------------------------------------------
# Archimedean density tau'


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    samples: int
    hits: int

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "samples": self.samples, "hits": self.hits}


_MC_CHUNK = 1 << 16


def ball_volume(m: int) -> float:
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def tau_prime(
    a: Sequence[int] | Form,
    gamma: float,
    samples: int = 10**5,
    seed: int = 0,
    basis: MonomialBasis | None = None,
    threads: int | None = None,
) -> MCEstimate:
    """gamma * vol{u in [0,1]^(n+1), ||u|| <= 1 : |<a, nu(u)>| <= ||a|| ||nu(u)|| / (2 gamma)}.

    Each chunk of 2^16 draws has its own generator spawned from ``seed``,
    so the estimate does not depend on how chunks are scheduled.
    """
    f = _as_form(a, basis)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    coeffs = np.array(f.coeffs, dtype=np.float64)
    anorm = math.sqrt(f.norm_sq)
    k = f.n + 1
    sizes = [min(_MC_CHUNK, samples - s) for s in range(0, samples, _MC_CHUNK)]
    rngs = child_rngs(seed, len(sizes))

    def chunk(i: int) -> int:
        U = rngs[i].random((sizes[i], k))
        inside = np.einsum("ij,ij->i", U, U) <= 1.0
        V = veronese_array(U[inside], f.basis)
        lhs = np.abs(V @ coeffs) * (2.0 * gamma)
        rhs = anorm * np.linalg.norm(V, axis=1)
        return int(np.count_nonzero(lhs <= rhs))

    hits = sum(pmap(chunk, range(len(sizes)), threads))
    phat = hits / samples
    return MCEstimate(gamma * phat, gamma * math.sqrt(phat * (1 - phat) / samples), samples, hits)


def frak_J(f: Form, B: float, samples: int = 10**5, seed: int = 0) -> MCEstimate:
    """J'_V(B) = tau'(a_V; log B)."""
    return tau_prime(f, scale_params(B).alpha, samples, seed)


def frak_S(f: Form, B: float) -> Fraction:
    """S'_V(B) = sigma'(a_V; W)."""
    return sigma_prime(f.coeffs, scale_params(B).W, f.basis)


# ---------------------------------------------------------------------------
# assembling places


@dataclass(frozen=True)
class LocalProfile:
    real: RealVerdict
    padic: dict = field(default_factory=dict)
    verdict: str = "Undetermined"  # "PLocSoluble" | "PLocInsoluble" | "Undetermined"
    obstruction: str | None = None
    p_max: int = DEFAULT_P_MAX
    r_max: int = 0

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "p_max": self.p_max,
            "r_max": self.r_max,
            "real": self.real.to_json(),
            "padic": {str(p): v.to_json() for p, v in self.padic.items()},
            "undecided_primes": [p for p, v in self.padic.items() if v.status == "Undecided"],
        }
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        return out


def classify_ploc(
    f: Form,
    p_max: int = DEFAULT_P_MAX,
    r_max: int | None = None,
    real_cfg: RealConfig = RealConfig(),
    short_circuit: bool = False,
    budget: int = DEFAULT_FRONTIER_BUDGET,
) -> LocalProfile:
    """Verdicts at R+ and at every p <= p_max.

    With ``short_circuit`` the scan stops at the first insoluble place; the
    profile then lists only the places that were examined.
    """
    r_max = default_r_max(f.d) if r_max is None else r_max
    real = real_positive_soluble(f, real_cfg)
    padic: dict[int, PadicVerdict] = {}
    if real.status == "Insoluble" and short_circuit:
        return LocalProfile(real, padic, "PLocInsoluble", "R+", p_max, r_max)
    obstruction = "R+" if real.status == "Insoluble" else None
    for p in primes_up_to(p_max):
        v = unit_solubility_padic(f, p, r_max, budget)
        padic[p] = v
        if v.status == "Insoluble" and obstruction is None:
            obstruction = f"Z{p}"
            if short_circuit:
                break
    if obstruction is not None:
        verdict = "PLocInsoluble"
    elif real.status == "Soluble" and all(v.status == "Soluble" for v in padic.values()):
        verdict = "PLocSoluble"
    else:
        verdict = "Undetermined"
    return LocalProfile(real, padic, verdict, obstruction, p_max, r_max)


@dataclass(frozen=True)
class DensityEstimate:
    rho_hat: float
    stderr: float
    soluble: int
    insoluble: int
    undetermined: int
    samples: int

    @property
    def undecided_fraction(self) -> float:
        return self.undetermined / self.samples

    def to_json(self) -> dict:
        return {
            "rho_hat": self.rho_hat,
            "stderr": self.stderr,
            "soluble": self.soluble,
            "insoluble": self.insoluble,
            "undetermined": self.undetermined,
            "undecided_fraction": self.undecided_fraction,
            "samples": self.samples,
        }


def estimate_density(
    d: int,
    n: int,
    A: float,
    samples: int,
    p_max: int = DEFAULT_P_MAX,
    r_max: int | None = None,
    seed: int = 0,
    threads: int | None = None,
    real_cfg: RealConfig = RealConfig(),
) -> DensityEstimate:
    """Fraction of uniform primitive a in the ball of radius A that are locally soluble everywhere.

    Undetermined forms are excluded from the ratio and reported on their own.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    basis = monomial_basis(d, n)
    rng = np.random.default_rng(seed)
    coeffs = sample_primitive_batch(basis.N, A, samples, rng)

    def one(row) -> str:
        return classify_ploc(Form(basis, tuple(int(c) for c in row)), p_max, r_max, real_cfg, short_circuit=True).verdict

    verdicts = pmap(one, list(coeffs), threads)
    sol = verdicts.count("PLocSoluble")
    ins = verdicts.count("PLocInsoluble")
    und = samples - sol - ins
    dec = sol + ins
    rho = sol / dec if dec else float("nan")
    se = math.sqrt(rho * (1 - rho) / dec) if dec else float("nan")
    return DensityEstimate(rho, se, sol, ins, und, samples)


@dataclass(frozen=True)
class ObstructionEstimate:
    place: str
    s_hat: float
    stderr: float
    insoluble: int
    undecided: int
    samples: int

    def to_json(self) -> dict:
        return {
            "place": self.place,
            "s_hat": self.s_hat,
            "stderr": self.stderr,
            "insoluble": self.insoluble,
            "undecided": self.undecided,
            "samples": self.samples,
        }


def estimate_obstruction(
    p: int | str,
    d: int,
    n: int,
    samples: int,
    r_max: int | None = None,
    seed: int = 0,
    threads: int | None = None,
    real_cfg: RealConfig = RealConfig(),
) -> ObstructionEstimate:
    """Estimate s_p, the measure of coefficient vectors with no local point at p.

    For a prime p, a is uniform mod p^r_max; for p = "inf", a is uniform in
    the unit ball of R^N (scaled to integers of size 2^20) and tested over R+.
    """
    basis = monomial_basis(d, n)
    rng = np.random.default_rng(seed)
    if p == "inf":
        g = rng.standard_normal((samples, basis.N))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        g *= rng.random(samples)[:, None] ** (1.0 / basis.N)
        rows = [tuple(int(v) for v in np.rint(x * 2**20)) for x in g]

        def one(row):
            if not any(row):
                return "Undecided"
            return real_positive_soluble(Form(basis, row), real_cfg).status

        place = "R+"
    else:
        p = int(p)
        r_max = default_r_max(d) if r_max is None else r_max
        Q = p**r_max
        rows = [tuple(int(v) for v in x) for x in rng.integers(0, Q, size=(samples, basis.N))]

        def one(row):
            if not any(row):
                return "Undecided"
            return unit_solubility_padic(Form(basis, row), p, r_max).status

        place = f"Z{p}"
    statuses = pmap(one, rows, threads)
    ins = statuses.count("Insoluble")
    und = sum(1 for s in statuses if s not in ("Soluble", "Insoluble"))
    s_hat = ins / samples
    return ObstructionEstimate(place, s_hat, math.sqrt(s_hat * (1 - s_hat) / samples), ins, und, samples)


def product_density(estimates: Sequence[ObstructionEstimate]) -> tuple[float, float]:
    """(1 - s_inf) prod_p (1 - s_p) and a delta-method standard error."""
    val = math.prod(1.0 - e.s_hat for e in estimates)
    rel2 = sum((e.stderr / (1.0 - e.s_hat)) ** 2 for e in estimates if e.s_hat < 1.0)
    return val, abs(val) * math.sqrt(rel2)

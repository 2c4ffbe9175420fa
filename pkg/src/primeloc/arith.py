"""Sieves, arithmetic functions, minor-gcd sieve factors and the scale parameters w, W, alpha."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np


class Infinity:
    """The +infinity sentinel used for omega_t(0) and for frak_c when g = 0.

    Kept distinct from ``float('inf')`` so reports can serialize it
    losslessly as ``{"extended": "+inf"}``.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __float__(self) -> float:
        return math.inf

    def __eq__(self, other) -> bool:
        return other is self or (isinstance(other, float) and other == math.inf)

    def __hash__(self) -> int:
        return hash(math.inf)

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return self == other

    def __gt__(self, other) -> bool:
        return not self == other

    def __ge__(self, other) -> bool:
        return True

    def to_json(self) -> dict:
        return {"extended": "+inf"}


INF = Infinity()


def is_inf(x) -> bool:
    return x is INF


DEFAULT_SIEVE_LIMIT = 10**6


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    is_p.setflags(write=False)
    return is_p


def primes_up_to(x: float) -> list[int]:
    if x < 2:
        return []
    limit = int(math.floor(x))
    return np.flatnonzero(_sieve(limit)).tolist()


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k < 4:
        return True
    if k % 2 == 0:
        return False
    for q in range(3, math.isqrt(k) + 1, 2):
        if k % q == 0:
            return False
    return True


def factorize(k: int) -> dict[int, int]:
    """Prime factorization of |k| by trial division (desk-scale inputs)."""
    k = abs(int(k))
    if k == 0:
        raise ValueError("0 has no factorization")
    out: dict[int, int] = {}
    for q in itertools.chain([2], itertools.count(3, 2)):
        if q * q > k:
            break
        while k % q == 0:
            out[q] = out.get(q, 0) + 1
            k //= q
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def prime_divisors(k: int) -> list[int]:
    return sorted(factorize(k))


def rad(k: int) -> int:
    return math.prod(prime_divisors(k)) if k else 0


def iterated_log(x: float, k: int) -> float:
    """log_(k) x with the clamp log_(j+1) x = max(1, log(log_(j) x))."""
    if x <= 0:
        raise ValueError("iterated_log needs x > 0")
    if k < 0:
        raise ValueError("iterated_log needs k >= 0")
    v = x
    for _ in range(k):
        v = max(1.0, math.log(v))
    return v


@dataclass(frozen=True)
class ScaleParams:
    B: float
    w: float
    W: int
    alpha: float

    def to_json(self) -> dict:
        return {"B": self.B, "w": self.w, "W": self.W, "alpha": self.alpha}


def smoothing_modulus(w: float) -> int:
    """W = prod_{p <= w} p^(ceil(log w / log p) + 1), exact integer."""
    W = 1
    for p in primes_up_to(w):
        W *= p ** (math.ceil(math.log(w) / math.log(p)) + 1)
    return W


def scale_params(B: float) -> ScaleParams:
    if not B > 1:
        raise ValueError("scale_params needs B > 1")
    logB = math.log(B)
    if not math.isfinite(logB):
        raise OverflowError("B is too large for the scale parameters")
    w = iterated_log(B, 2) / iterated_log(B, 3)
    return ScaleParams(B=float(B), w=w, W=smoothing_modulus(w), alpha=logB)


def omega_t(k: int, t: int):
    """omega_t(k) = sum_{p | k} p^t; omega_t(0) = sum over all primes.

    Returns an int for t >= 0, a Fraction for t < 0 when k != 0, the INF
    sentinel for k = 0 and t >= -1, and the prime zeta value P(-t) as a
    float for k = 0 and t < -1.
    """
    if k < 0:
        raise ValueError("omega_t needs k >= 0")
    if k == 0:
        if t >= -1:
            return INF
        return float(mpmath.primezeta(-t))
    if t >= 0:
        return sum(p**t for p in prime_divisors(k))
    return sum((Fraction(1, p ** (-t)) for p in prime_divisors(k)), Fraction(0))


def omega(k: int) -> int:
    """Number of distinct prime divisors."""
    return omega_t(k, 0)


def divisor_tau(k: int) -> int:
    if k < 1:
        raise ValueError("divisor_tau needs k >= 1")
    return math.prod(e + 1 for e in factorize(k).values())


def divisor_tau_table(limit: int) -> np.ndarray:
    """tau(k) for 0 <= k <= limit (entry 0 unused)."""
    tau = np.zeros(limit + 1, dtype=np.int64)
    for j in range(1, limit + 1):
        tau[j::j] += 1
    return tau


def omega_table(limit: int) -> np.ndarray:
    om = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(limit):
        om[p::p] += 1
    return om


def omega_minus_one_table(limit: int) -> np.ndarray:
    """omega_{-1}(k) as floats for 0 <= k <= limit (entry 0 unused)."""
    out = np.zeros(limit + 1, dtype=np.float64)
    for p in primes_up_to(limit):
        out[p::p] += 1.0 / p
    return out


@dataclass(frozen=True)
class MinorGcdProfile:
    row_gcds: tuple[int, ...]
    pair_gcds: tuple[int, ...]
    g: int


def _gcd_2x2_minors(r1: Sequence[int], r2: Sequence[int]) -> int:
    g = 0
    for i, j in itertools.combinations(range(len(r1)), 2):
        g = math.gcd(g, r1[i] * r2[j] - r1[j] * r2[i])
        if g == 1:
            break
    return g


def g_of(A: Sequence[Sequence[int]], b: Sequence[int]) -> MinorGcdProfile:
    """Row gcds of A, pairwise 2x2-minor gcds of A' = [A | b], and their product g(A, b)."""
    rows = [[int(v) for v in r] for r in A]
    m = len(rows)
    if m < 1 or len(rows[0]) < 1:
        raise ValueError("g_of needs a nonempty matrix")
    if len(b) != m:
        raise ValueError("b must have one entry per row of A")
    row_gcds = tuple(math.gcd(*r) for r in rows)
    aug = [r + [int(bj)] for r, bj in zip(rows, b)]
    pair_gcds = tuple(_gcd_2x2_minors(aug[i], aug[j]) for i, j in itertools.combinations(range(m), 2))
    g = math.prod(row_gcds) * math.prod(pair_gcds)
    return MinorGcdProfile(row_gcds=row_gcds, pair_gcds=pair_gcds, g=g)


def frak_c(A: Sequence[Sequence[int]], b: Sequence[int]):
    """exp(m * omega_{-1}(g(A, b))), or INF when g(A, b) = 0."""
    prof = g_of(A, b)
    if prof.g == 0:
        return INF
    m = len(A)
    return math.exp(m * float(omega_t(prof.g, -1)))

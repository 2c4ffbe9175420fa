"""Monomial bases, the Veronese map and integer forms.

A form of degree ``d`` in ``n + 1`` variables is stored as its coefficient
vector over a fixed monomial basis.  The basis lists exponent tuples in
strictly decreasing lexicographic order read left to right, so ``x0**d``
comes first and ``xn**d`` last.  This ordering is part of the serialized
format (see :data:`MONOMIAL_ORDER`).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

MONOMIAL_ORDER = "lex-desc(x0>x1>...>xn)"
FORM_SCHEMA = "primeloc.form/1"

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class MonomialBasis:
    d: int
    n: int
    exponents: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def N(self) -> int:
        return len(self.exponents)

    @property
    def nvars(self) -> int:
        return self.n + 1

    def exponent_array(self) -> np.ndarray:
        return np.array(self.exponents, dtype=np.int64).reshape(self.N, self.n + 1)


def num_monomials(d: int, n: int) -> int:
    """N_{d,n} = C(n + d, d)."""
    return math.comb(n + d, d)


@lru_cache(maxsize=None)
def monomial_basis(d: int, n: int) -> MonomialBasis:
    if d < 1 or n < 1:
        raise ValueError(f"monomial_basis needs d >= 1 and n >= 1, got d={d}, n={n}")
    exps = [
        e
        for e in itertools.product(range(d, -1, -1), repeat=n + 1)
        if sum(e) == d
    ]
    # product over a descending range already yields descending lex order
    return MonomialBasis(d=d, n=n, exponents=tuple(exps))


def dims_for(N: int) -> tuple[int, int]:
    """Smallest degree d >= 2 (then d = 1) with some n >= 1 and N_{d,n} = N."""
    for d in range(2, N + 1):
        for n in range(1, N):
            m = num_monomials(d, n)
            if m == N:
                return d, n
            if m > N:
                break
    if N >= 2:
        return 1, N - 1
    raise ValueError(f"no (d, n) with N_(d,n) = {N}")


def _is_integral(x) -> bool:
    return all(isinstance(v, (int, np.integer)) for v in x)


def veronese(x: Sequence, basis: MonomialBasis):
    """nu_{d,n}(x): every basis monomial evaluated at ``x``.

    Integer input gives exact Python ints; anything else gives floats.
    A 2-D array is treated as a batch of points (one per row).
    """
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return veronese_array(x, basis)
    if len(x) != basis.n + 1:
        raise ValueError(f"point has {len(x)} entries, basis expects {basis.n + 1}")
    if _is_integral(x):
        xs = [int(v) for v in x]
        return tuple(math.prod(v**e for v, e in zip(xs, ex)) for ex in basis.exponents)
    xs = [float(v) for v in x]
    return tuple(math.prod(v**e for v, e in zip(xs, ex)) for ex in basis.exponents)


def veronese_array(X: np.ndarray, basis: MonomialBasis) -> np.ndarray:
    """Row-wise Veronese map for a batch of points.

    Integer batches stay int64 when the largest monomial provably fits,
    otherwise they are promoted to Python-int object arrays.
    """
    X = np.asarray(X)
    E = basis.exponent_array()
    if np.issubdtype(X.dtype, np.integer):
        bound = int(np.abs(X).max(initial=0)) ** basis.d
        if bound < _INT64_SAFE:
            X = X.astype(np.int64)
            out = np.ones((X.shape[0], basis.N), dtype=np.int64)
        else:
            X = X.astype(object)
            out = np.ones((X.shape[0], basis.N), dtype=object)
    else:
        X = X.astype(np.float64)
        out = np.ones((X.shape[0], basis.N), dtype=np.float64)
    for j in range(basis.n + 1):
        col = X[:, j]
        for k, ex in enumerate(E[:, j]):
            if ex:
                out[:, k] = out[:, k] * col ** int(ex)
    return out


@dataclass(frozen=True)
class Form:
    """Integer form sum_i coeffs[i] * x^basis.exponents[i]."""

    basis: MonomialBasis
    coeffs: tuple[int, ...]
    norm: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.basis.N:
            raise ValueError(
                f"expected {self.basis.N} coefficients for (d, n) = "
                f"({self.basis.d}, {self.basis.n}), got {len(coeffs)}"
            )
        if not any(coeffs):
            raise ValueError("the zero form is not allowed")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "norm", math.sqrt(self.norm_sq))

    @classmethod
    def from_coeffs(cls, d: int, n: int, coeffs: Sequence[int]) -> "Form":
        return cls(monomial_basis(d, n), tuple(coeffs))

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def norm_sq(self) -> int:
        return sum(c * c for c in self.coeffs)

    @property
    def content(self) -> int:
        return math.gcd(*self.coeffs)

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    def __neg__(self) -> "Form":
        return Form(self.basis, tuple(-c for c in self.coeffs))

    def coeff_array(self) -> np.ndarray:
        if max(abs(c) for c in self.coeffs) < _INT64_SAFE:
            return np.array(self.coeffs, dtype=np.int64)
        return np.array(self.coeffs, dtype=object)

    def to_json(self) -> dict:
        return {
            "schema": FORM_SCHEMA,
            "monomial_order": MONOMIAL_ORDER,
            "d": self.d,
            "n": self.n,
            "coeffs": list(self.coeffs),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "Form":
        if isinstance(obj, str):
            obj = json.loads(obj)
        order = obj.get("monomial_order", MONOMIAL_ORDER)
        if order != MONOMIAL_ORDER:
            raise ValueError(f"unsupported monomial order {order!r}")
        return cls.from_coeffs(int(obj["d"]), int(obj["n"]), obj["coeffs"])

    def __call__(self, x):
        return evaluate(self, x)


def diagonal_form(d: int, n: int, signs: Sequence[int]) -> Form:
    """sum_i signs[i] * x_i**d."""
    basis = monomial_basis(d, n)
    coeffs = [0] * basis.N
    for i, s in enumerate(signs):
        ex = tuple(d if j == i else 0 for j in range(n + 1))
        coeffs[basis.exponents.index(ex)] = s
    return Form(basis, tuple(coeffs))


def evaluate(f: Form, x: Sequence):
    """f(x) = <coeffs, nu(x)>; exact on integer input."""
    nu = veronese(x, f.basis)
    if isinstance(nu, np.ndarray):
        return nu @ f.coeff_array()
    if _is_integral(x):
        return sum(c * v for c, v in zip(f.coeffs, nu))
    return math.fsum(c * v for c, v in zip(f.coeffs, nu))


def gradient(f: Form, x: Sequence) -> tuple:
    """Partial derivatives of ``f`` at ``x``, exact on integer input."""
    k = f.n + 1
    if len(x) != k:
        raise ValueError(f"point has {len(x)} entries, form has {k} variables")
    exact = _is_integral(x)
    xs = [int(v) for v in x] if exact else [float(v) for v in x]
    grad = []
    for i in range(k):
        terms = []
        for c, ex in zip(f.coeffs, f.basis.exponents):
            if c == 0 or ex[i] == 0:
                continue
            m = c * ex[i]
            for j, (v, e) in enumerate(zip(xs, ex)):
                m = m * v ** (e - 1 if j == i else e)
            terms.append(m)
        grad.append(sum(terms) if exact else math.fsum(terms))
    return tuple(grad)


class SamplingError(RuntimeError):
    pass


def sample_primitive(N: int, A: float, rng: np.random.Generator, max_rounds: int = 1000) -> tuple[int, ...]:
    """One primitive integer vector, uniform on the primitive points of the closed ball of radius A."""
    return tuple(int(v) for v in sample_primitive_batch(N, A, 1, rng, max_rounds)[0])


def sample_primitive_batch(
    N: int, A: float, size: int, rng: np.random.Generator, max_rounds: int = 1000
) -> np.ndarray:
    """``size`` independent uniform primitive vectors in the ball ||a|| <= A.

    Continuous uniform points in the ball of radius A + sqrt(N)/2 are rounded
    to the nearest lattice point.  Every integer point of the A-ball owns a
    full unit cell inside the enlarged ball, so after rejecting points outside
    the A-ball (and the zero vector, and imprimitive vectors) the result is
    exactly uniform.
    """
    if A < 1:
        raise SamplingError(f"radius A={A} < 1 has no nonzero primitive support")
    if N < 1:
        raise ValueError("N must be positive")
    R = A + math.sqrt(N) / 2.0
    A2 = math.floor(A * A + 1e-9)
    out = np.empty((size, N), dtype=np.int64)
    filled = 0
    batch = max(64, 2 * size)
    for _ in range(max_rounds):
        if filled >= size:
            break
        g = rng.standard_normal((batch, N))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = R * rng.random(batch) ** (1.0 / N)
        z = np.rint(g * r[:, None]).astype(np.int64)
        nsq = np.einsum("ij,ij->i", z, z)
        keep = (nsq <= A2) & (nsq > 0)
        z = z[keep]
        if z.size:
            z = z[np.gcd.reduce(z, axis=1) == 1]
        take = min(size - filled, z.shape[0])
        out[filled : filled + take] = z[:take]
        filled += take
    if filled < size:
        raise SamplingError(f"sampler exhausted {max_rounds} rounds with {filled}/{size} vectors")
    return out

"""Time each hot kernel in its compiled and pure-Python builds on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from primeloc._kernels import _fallback
from primeloc.forms import diagonal_form, monomial_basis
from primeloc.local import _unit_table

try:
    from primeloc._kernels import _core
except ImportError:  # no compiler at install time
    _core = None


def _cases():
    sig = diagonal_form(2, 3, (1, 1, -1, -1))
    E, c = sig.basis.exponent_array(), list(sig.coeffs)
    pos = diagonal_form(2, 2, (1, 2, 3))
    b23 = monomial_basis(2, 3)
    A = np.random.default_rng(0).integers(0, 11, size=(2000, b23.N))
    T = _unit_table(2, 3, 11)
    rng = np.random.default_rng(1)
    V = rng.integers(-60, 61, size=(300, 10)).astype(np.int64)
    I, J = (x.astype(np.int64) for x in np.triu_indices(300, 1))
    primes = np.array([q for q in range(2, 60) if all(q % k for k in range(2, q))], dtype=np.int64)
    return {
        "zero_valuations (2,3) mod 3^3": ("zero_valuations", (E, c, 3, 3)),
        "padic_scan level 1, p=31": ("padic_scan", (E, c, np.zeros((0, 4), dtype=np.int64), 31, 1, 10**6)),
        "simplex_scan M=128, positive form": (
            "simplex_scan",
            (pos.basis.exponent_array(), np.array(pos.coeffs, dtype=float), 128),
        ),
        "residue_counts 2000 forms mod 11": ("residue_counts", (T, A, 11)),
        "prime_tuples k=4, R=60": ("prime_tuples", (primes, 4, 3600)),
        "pair_minor_data 300 vectors": ("pair_minor_data", (V, I, J)),
    }


def _time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for label, (name, fargs) in _cases().items():
        t_py = _time(getattr(_fallback, name), fargs, args.repeat)
        if _core is None:
            print(f"{label:40s} {'-':>10s} {t_py:10.4f} {'-':>8s}")
            continue
        t_c = _time(getattr(_core, name), fargs, args.repeat)
        print(f"{label:40s} {t_c:10.4f} {t_py:10.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()

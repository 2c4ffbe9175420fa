"""Hot inner loops, compiled when possible.

The Cython module ``_core`` is preferred.  When it is missing (no compiler at
install time) or when ``PRIMELOC_PURE_PYTHON=1`` is set, the NumPy/pure-Python
twins in ``_fallback`` are used instead.  Both produce identical results.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if not os.environ.get("PRIMELOC_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _fallback

padic_scan = _impl.padic_scan
zero_valuations = _impl.zero_valuations
simplex_scan = _impl.simplex_scan
residue_counts = _impl.residue_counts
prime_tuples = _impl.prime_tuples
pair_minor_data = _impl.pair_minor_data

__all__ = [
    "BACKEND",
    "padic_scan",
    "zero_valuations",
    "simplex_scan",
    "residue_counts",
    "prime_tuples",
    "pair_minor_data",
]

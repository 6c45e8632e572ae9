"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded. Exact rationals follow the same switch: ``gmpy2.mpq`` with
the compiled backend, :class:`fractions.Fraction` otherwise. Set
``ORDPAT_PURE_PYTHON=1`` to force the fallback for both.
"""
import os

if os.environ.get("ORDPAT_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND

# exact rational type for the interval-map engine
if _impl.BACKEND == "python":
    from fractions import Fraction as Rational
else:
    try:
        from gmpy2 import mpq as Rational
    except ImportError:
        from fractions import Fraction as Rational

count_outgrowths = _impl.count_outgrowths
outgrowth_table = _impl.outgrowth_table
window_codes = _impl.window_codes
xoshiro_fill = _impl.xoshiro_fill

__all__ = ["BACKEND", "count_outgrowths", "outgrowth_table", "window_codes", "xoshiro_fill", "Rational"]

"""Backend selection for the arithmetic hot loops.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
pure-Python module ``_pykernels`` is loaded. Setting ``MODEQ_PURE_PYTHON=1``
forces the fallback (useful for benchmarking and debugging).
"""

import os

if os.environ.get("MODEQ_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

poly_mul = _impl.poly_mul
poly_divexact = _impl.poly_divexact
series_mul = _impl.series_mul
series_inverse = _impl.series_inverse

__all__ = ["BACKEND", "poly_mul", "poly_divexact", "series_mul", "series_inverse"]

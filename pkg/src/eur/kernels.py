"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``EUR_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("EUR_PURE_PYTHON"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

wigner_correlation_pure = _impl.wigner_correlation_pure
wigner_correlation_density = _impl.wigner_correlation_density
heat_steps = _impl.heat_steps

__all__ = ["BACKEND", "heat_steps", "wigner_correlation_density", "wigner_correlation_pure"]

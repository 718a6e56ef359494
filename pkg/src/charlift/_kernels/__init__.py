"""Backend selection for the hot kernels.

The compiled module is used when it imports; set CHARLIFT_PURE_PYTHON=1 to
force the numpy fallback.
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("CHARLIFT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "compiled"
else:
    _compiled = None

trapezoid_moment = _impl.trapezoid_moment
chamber_products = _impl.chamber_products
omega_sum = _impl.omega_sum

__all__ = ["BACKEND", "trapezoid_moment", "chamber_products", "omega_sum"]

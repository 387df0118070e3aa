"""Backend selection for the univariate polynomial kernels.

The compiled extension is used when it was built; set ``HIG_PURE_PYTHON=1``
to force the pure-Python fallback.  Both expose the same functions.
"""

import os

if os.environ.get("HIG_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
trim = _impl.trim
add = _impl.add
sub = _impl.sub
scale = _impl.scale
mul = _impl.mul
divmod_ = _impl.divmod_
monic = _impl.monic
gcd = _impl.gcd
low_order = _impl.low_order

__all__ = ["BACKEND", "trim", "add", "sub", "scale", "mul", "divmod_",
           "monic", "gcd", "low_order"]

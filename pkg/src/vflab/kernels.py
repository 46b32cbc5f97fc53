"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
module is used.  Set ``VFLAB_KERNELS=python`` to force the fallback.
"""
import os

if os.environ.get("VFLAB_KERNELS", "").lower() == "python":
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
poly_mul = _impl.poly_mul
primitive = _impl.primitive
eliminate = _impl.eliminate

__all__ = ["BACKEND", "poly_mul", "primitive", "eliminate"]

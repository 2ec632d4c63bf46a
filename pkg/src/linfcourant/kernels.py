"""Kernel selection: the compiled module when importable, else pure Python.

Set ``LINFCOURANT_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("LINFCOURANT_PURE"):
    from . import _kernels as _impl
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels as _impl
        BACKEND = "python"

poly_add = _impl.poly_add
poly_scale = _impl.poly_scale
poly_mul = _impl.poly_mul
poly_diff = _impl.poly_diff
derivation = _impl.derivation
merge_sign = _impl.merge_sign
form_wedge = _impl.form_wedge
form_mul_scalar = _impl.form_mul_scalar
form_d = _impl.form_d
form_contract = _impl.form_contract

__all__ = ["BACKEND", "poly_add", "poly_scale", "poly_mul", "poly_diff", "derivation",
           "merge_sign", "form_wedge", "form_mul_scalar", "form_d", "form_contract"]

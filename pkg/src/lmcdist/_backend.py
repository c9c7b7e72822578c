"""Select the compiled kernels when importable, else the numpy fallback.

Set ``LMCDIST_BACKEND=python`` to force the fallback.
"""
import os

from . import _fallback

if os.environ.get("LMCDIST_BACKEND", "").lower() == "python":
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _fallback
        BACKEND = "python"

fallback = _fallback

"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built; the numpy
kernels are the fallback.  ``MARIO_KERNELS=python`` or ``MARIO_KERNELS=cython``
forces one side (the latter raises if the extension is unavailable), which the
benchmark and the backend-parity tests rely on.
"""

import os

from mario import _kernels_py


def _load():
    choice = os.environ.get("MARIO_KERNELS", "auto").lower()
    if choice == "python":
        return _kernels_py
    try:
        from mario import _kernels_cy
    except ImportError:
        if choice == "cython":
            raise ImportError("MARIO_KERNELS=cython but the compiled kernels are not built")
        return _kernels_py
    return _kernels_cy


kernels = _load()
BACKEND_NAME = kernels.BACKEND_NAME

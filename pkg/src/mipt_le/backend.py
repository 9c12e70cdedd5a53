"""Kernel backend selection.

The hot tableau kernels exist twice: numba-jitted loops and a pure-numpy
fallback with identical call signatures and bit-exact semantics.  Set
``MIPT_LE_BACKEND=numpy`` or ``MIPT_LE_BACKEND=numba`` to force one;
the default is numba when it imports, numpy otherwise.
"""

from __future__ import annotations

import os

ENV_FLAG = "MIPT_LE_BACKEND"


def _resolve():
    choice = os.environ.get(ENV_FLAG, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        from . import _kernels_numpy as mod

        return "numpy", mod
    try:
        from . import _kernels_numba as mod

        return "numba", mod
    except ImportError:
        if choice == "numba":
            raise
        from . import _kernels_numpy as mod

        return "numpy", mod


BACKEND, kernels = _resolve()

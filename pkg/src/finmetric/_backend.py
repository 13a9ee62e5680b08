"""Kernel backend selection.

The compiled module is used when importable.  Set ``FINMETRIC_PURE=1`` to
force the pure-Python kernels.
"""

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("FINMETRIC_PURE"):
    try:
        from . import _ckernels
    except ImportError:  # pragma: no cover - depends on build environment
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"

python_kernels = _pykernels


def use_backend(name):
    """Switch the active kernels to ``"cython"`` or ``"python"``; returns the previous name."""
    global kernels, BACKEND
    previous = BACKEND
    if name == "python":
        kernels, BACKEND = _pykernels, "python"
    elif name == "cython":
        from . import _ckernels

        kernels, BACKEND = _ckernels, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous

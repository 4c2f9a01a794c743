"""Selects the Smith normal form kernel at import time.

The compiled kernel is used when it imported successfully and
``POSET_FORGE_PURE_PYTHON`` is not set to ``1``. It works on int64 and hands
over to the pure-Python kernel whenever an entry would overflow.
"""

import os

from . import _snf_py

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

if os.environ.get("POSET_FORGE_PURE_PYTHON") == "1":
    _active = None
else:
    _active = _kernels

BACKEND = "cython" if _active is not None else "python"
COMPILED_AVAILABLE = _kernels is not None


def snf(rows, m, n, transforms=True):
    if _active is not None:
        try:
            return _active.snf(rows, m, n, transforms)
        except OverflowError:
            pass
    return _snf_py.snf(rows, m, n, transforms)


snf_python = _snf_py.snf
snf_compiled = _kernels.snf if _kernels is not None else None

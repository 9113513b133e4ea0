"""Selects the compiled RK4 kernel at import, falling back to pure numpy.

Set ``POLARITON_CTL_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("POLARITON_CTL_PURE_PYTHON") == "1":
    _impl = _kernel_py
    COMPILED = False
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _kernel_py
        COMPILED = False

rk4_propagate = _impl.rk4_propagate


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"

"""Selects the kernel backend at import time.

The compiled extension is preferred when it is importable; otherwise the
pure-Python twin takes over. Setting the environment variable
``LOCMETRICS_PURE=1`` forces the pure backend.
"""

from __future__ import annotations

import os

if os.environ.get("LOCMETRICS_PURE"):
    from . import _pykernels as kernels

    BACKEND = "pure"
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykernels as kernels  # type: ignore[no-redef]

        BACKEND = "pure"

__all__ = ["kernels", "BACKEND"]

"""Kernel backend selection.

The compiled extension is preferred when importable; the pure NumPy
fallback is picked up transparently otherwise. ``GROUPPROX_BACKEND`` can
force either implementation (``compiled`` raises if the extension is
missing, ``python`` skips it)."""

from __future__ import annotations

import os

_requested = os.environ.get("GROUPPROX_BACKEND", "auto")

if _requested == "python":
    from . import _kernels_py as kernels
elif _requested == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
elif _requested == "auto":
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]
else:
    raise RuntimeError(
        f"GROUPPROX_BACKEND must be 'auto', 'compiled' or 'python', got {_requested!r}"
    )

BACKEND_NAME: str = kernels.BACKEND
IS_COMPILED: bool = BACKEND_NAME == "compiled"

"""Kernel backend selection, done once at import.

The compiled extension is preferred when importable; otherwise the numpy
reference kernel is used.  STEPSCATTER_BACKEND=compiled|pure forces the
choice (forcing "compiled" raises if the extension is not built).
"""

import os

_forced = os.environ.get("STEPSCATTER_BACKEND")

if _forced == "pure":
    from . import _kernels_py as kernels
elif _forced == "compiled":
    from . import _kernels as kernels  # ImportError here means the extension is missing
elif _forced is None:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels
else:
    raise RuntimeError(
        f"STEPSCATTER_BACKEND must be 'compiled' or 'pure', got {_forced!r}"
    )


def backend_name() -> str:
    """Name of the active spectral kernel backend."""
    return kernels.BACKEND_NAME

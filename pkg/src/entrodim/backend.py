"""Selects the compiled kernel core at import, with a pure-numpy fallback.

Set ``ENTRODIM_FORCE_PYTHON=1`` to skip the extension (used by the fallback
tests and the backend benchmark).  ``BACKEND`` records which core is active.
"""

from __future__ import annotations

import os

if os.environ.get("ENTRODIM_FORCE_PYTHON", "") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

imex_steps = _impl.imex_steps
fps_radii = _impl.fps_radii
STATUS_OK = _impl.STATUS_OK
STATUS_BLOWUP = _impl.STATUS_BLOWUP
STATUS_NAN = _impl.STATUS_NAN

__all__ = [
    "BACKEND",
    "STATUS_BLOWUP",
    "STATUS_NAN",
    "STATUS_OK",
    "fps_radii",
    "imex_steps",
]

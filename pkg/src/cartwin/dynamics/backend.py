"""Kernel backend selection.

The compiled kernel is preferred; the pure-Python twin is the fallback when
the extension was not built. ``CARTWIN_PURE=1`` forces the fallback, which
the benchmark and the backend-parity tests use.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("CARTWIN_PURE") == "1":
    kernel = _pure
else:
    try:
        from . import _core as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = _pure

BACKEND = kernel.BACKEND_NAME


def available_backends():
    """All importable kernels, keyed by backend name."""
    out = {_pure.BACKEND_NAME: _pure}
    try:
        from . import _core
        out[_core.BACKEND_NAME] = _core
    except ImportError:
        pass
    return out

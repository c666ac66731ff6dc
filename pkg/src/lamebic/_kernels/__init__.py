"""Kernel backend selection.

The compiled ``_native`` extension is used when it was built; otherwise the
numpy ``_fallback`` is imported. Setting ``LAMEBIC_PURE_PYTHON=1`` forces the
fallback.
"""

import os

from . import _fallback

if os.environ.get("LAMEBIC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "native" if _impl is not _fallback else "python"

sncndn = _impl.sncndn
monodromy_trace = _impl.monodromy_trace

__all__ = ["BACKEND", "sncndn", "monodromy_trace", "_fallback"]

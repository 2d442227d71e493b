"""Geometry kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python reference
implementation. POSGRAPH_PURE=1 forces the fallback (used by the benchmark
and the backend parity tests).
"""

from __future__ import annotations

import os

_impl = None
if not os.environ.get("POSGRAPH_PURE"):
    try:
        from . import _fastgeom as _impl
    except ImportError:
        _impl = None
if _impl is None:
    from . import reference as _impl

BACKEND_NAME: str = _impl.BACKEND_NAME
obb_overlap = _impl.obb_overlap
box_hits_any = _impl.box_hits_any
poses_sweep_hits_any = _impl.poses_sweep_hits_any


def available_backends():
    """Importable backend modules, compiled first when present."""
    out = []
    try:
        from . import _fastgeom
        out.append(_fastgeom)
    except ImportError:
        pass
    from . import reference
    out.append(reference)
    return out

"""Simulation backend selection.

The compiled Cython core is preferred; the pure-numpy fallback implements
the identical algorithms and random streams and is used automatically when
the extension is not built.  Set EXITBOUNDS_FORCE_FALLBACK=1 to force the
fallback (useful for the backend benchmark and equivalence tests).
"""

from __future__ import annotations

import os

from . import fallback

_force = os.environ.get("EXITBOUNDS_FORCE_FALLBACK", "") == "1"

compiled = None
if not _force:
    try:
        from . import _core as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

active = compiled if compiled is not None else fallback
name: str = active.BACKEND_NAME

exit_paths = active.exit_paths
wos_paths = active.wos_paths


def backends() -> dict[str, object]:
    """All importable backends keyed by name."""
    out: dict[str, object] = {fallback.BACKEND_NAME: fallback}
    if compiled is not None:
        out[compiled.BACKEND_NAME] = compiled
    return out

"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback.  Set ``PILOTCAP_PURE_PYTHON=1`` to force the fallback.
Callers must look up ``_backend.kernels`` at call time so tests can swap it.
"""

import os

from . import _fallback

try:
    if os.environ.get("PILOTCAP_PURE_PYTHON"):
        raise ImportError("fallback forced by PILOTCAP_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

kernels = _compiled if _compiled is not None else _fallback
BACKEND = "compiled" if _compiled is not None else "python"


def available():
    """Names of the backends importable in this process."""
    return ["compiled", "python"] if _compiled is not None else ["python"]


def get(name):
    if name == "python":
        return _fallback
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")

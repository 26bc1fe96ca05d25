"""Engine backend chosen once at import.

The compiled ``_core`` extension is preferred; setting ``CLUSTNET_BACKEND``
to ``python`` forces the pure-Python fallback.  Both backends expose the
same ``TriadicEngine``, ``SumTree`` and ``SplitMix64`` classes and produce
bit-identical output for equal seeds.
"""
import os

from . import _pyengine

_requested = os.environ.get("CLUSTNET_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _pyengine
    NAME = "python"
else:
    try:
        from . import _core as _impl
        NAME = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pyengine
        NAME = "python"

TriadicEngine = _impl.TriadicEngine
SumTree = _impl.SumTree
SplitMix64 = _impl.SplitMix64

MODE_TRIADIC = _pyengine.MODE_TRIADIC
MODE_CORRECTED = _pyengine.MODE_CORRECTED


def engine_class(name: str | None = None):
    """Return the engine class for ``name`` ("cython", "python" or None for the default)."""
    if name is None:
        return TriadicEngine
    if name == "python":
        return _pyengine.TriadicEngine
    if name == "cython":
        from . import _core
        return _core.TriadicEngine
    raise ValueError(f"unknown backend {name!r}")

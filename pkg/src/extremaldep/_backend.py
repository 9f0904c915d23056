"""Pick the compiled kernels when available, else the numpy ones.

Set ``EXTREMALDEP_BACKEND=python`` to force the numpy path.
"""
import os

from . import _fallback

BACKEND = "python"
if os.environ.get("EXTREMALDEP_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback
    else:
        BACKEND = "cython"
else:
    _impl = _fallback

bootstrap_statistics = _impl.bootstrap_statistics
ks_scan = _impl.ks_scan


def available_backends():
    """Mapping of backend name to kernel module for every importable backend."""
    out = {"python": _fallback}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out

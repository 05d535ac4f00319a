"""Kernel dispatch.

Numba versions are used when importable unless ``ONEWAY_DISABLE_NUMBA`` is set
to a truthy value, in which case the pure-numpy path runs. ``BACKEND`` names
the active choice.
"""

import os

from . import _numpy

_disabled = os.environ.get("ONEWAY_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

if _disabled:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency in CI
        _impl = _numpy
        BACKEND = "numpy"

apply_1q = _impl.apply_1q
apply_2q = _impl.apply_2q
apply_cz = _impl.apply_cz
project = _impl.project
parity_fuse = _impl.parity_fuse

__all__ = ["BACKEND", "apply_1q", "apply_2q", "apply_cz", "project", "parity_fuse"]

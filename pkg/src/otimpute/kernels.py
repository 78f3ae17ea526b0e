"""Kernel backend selection.

The compiled extension is preferred when it imports; ``OTIMPUTE_PURE_PYTHON=1``
forces the NumPy implementation. Both backends expose the same two functions
(``lse_update``, ``tilt_stats``) over contiguous float64 arrays.
"""

import os

from . import _npkernels

if os.environ.get("OTIMPUTE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _npkernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _npkernels

lse_update = _impl.lse_update
tilt_stats = _impl.tilt_stats


def backend_name() -> str:
    """Name of the active backend: ``"c"`` or ``"numpy"``."""
    return _impl.NAME


def available_backends() -> dict:
    """All importable backends, keyed by name (used by tests and benchmarks)."""
    out = {_npkernels.NAME: _npkernels}
    try:
        from . import _ckernels

        out[_ckernels.NAME] = _ckernels
    except ImportError:
        pass
    return out

"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
fallback. Set ``PWW_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

_EXPORTS = ("combine_records", "combine_batches", "merge_gaps", "scan_remote_shell", "LevelStage", "run_cascade")


def backends():
    """Map backend name to its module, for every backend importable here."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as ext
    except ImportError:
        return out
    out["cython"] = ext
    return out


def _select():
    if os.environ.get("PWW_PURE_PYTHON", "").lower() in ("1", "true", "yes"):
        return "python", _kernels_py
    found = backends()
    if "cython" in found:
        return "cython", found["cython"]
    return "python", _kernels_py


BACKEND, _impl = _select()
combine_records = _impl.combine_records
combine_batches = _impl.combine_batches
merge_gaps = _impl.merge_gaps
scan_remote_shell = _impl.scan_remote_shell
LevelStage = _impl.LevelStage
run_cascade = _impl.run_cascade

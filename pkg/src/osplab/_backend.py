"""Kernel backend selection.

The compiled extension is used when importable; ``OSPLAB_BACKEND=python``
forces the numpy fallback, ``OSPLAB_BACKEND=cython`` makes a missing
extension an import error.
"""

from __future__ import annotations

import os

from . import _pykernels

_requested = os.environ.get("OSPLAB_BACKEND", "auto").lower()

if _requested == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        kernels = _pykernels
        BACKEND = "python"

KERNEL_NAMES = (
    "osp_gillespie",
    "osp_replay",
    "tasep_apply_batch",
    "tasep_snapshots",
    "lpp_staircase",
)


def get_kernels(name: str | None = None):
    """Return a kernel module by name ('cython' or 'python'), or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")

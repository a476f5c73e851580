"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; set
``DAGKIT_PURE=1`` in the environment (before import) to force the
pure-Python kernels.  Both backends produce bit-identical results.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _kernels = None

_active = _kernels_py if (os.environ.get("DAGKIT_PURE") or _kernels is None) else _kernels


def kernels():
    """The active kernel module."""
    return _active


def implementation() -> str:
    return _active.IMPLEMENTATION


def available() -> list[str]:
    return ["python"] + (["cython"] if _kernels is not None else [])


def use(name: str) -> None:
    """Switch backends at runtime (mainly for tests and benchmarks)."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "cython":
        if _kernels is None:
            raise RuntimeError("compiled kernels are not available")
        _active = _kernels
    else:
        raise ValueError(f"unknown backend {name!r}")

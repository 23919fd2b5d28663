"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``VKQ_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("VKQ_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernel_py

state_histogram = _impl.state_histogram
KERNEL_NAME: str = _impl.KERNEL_NAME
python_state_histogram = _kernel_py.state_histogram

__all__ = ["state_histogram", "python_state_histogram", "KERNEL_NAME"]

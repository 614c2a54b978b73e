"""Hot-kernel backend selection.

The compiled extension (`_ext`, Cython) is preferred when present; the
NumPy fallback (`_py`) is used otherwise. Set H8_KERNELS=py or H8_KERNELS=ext
to force a backend (forcing `ext` raises if the extension is not built).
Both backends return bitwise-identical arrays for identical inputs.
"""

from __future__ import annotations

import os

_requested = os.environ.get("H8_KERNELS", "auto").strip().lower()
if _requested not in ("auto", "py", "ext"):
    raise RuntimeError(f"H8_KERNELS must be 'auto', 'py' or 'ext', got {_requested!r}")

if _requested == "py":
    from . import _py as _impl

    BACKEND = "py"
else:
    try:
        from . import _ext as _impl  # type: ignore[no-redef]

        BACKEND = "ext"
    except ImportError:
        if _requested == "ext":
            raise
        from . import _py as _impl  # type: ignore[no-redef]

        BACKEND = "py"

sieve_flags = _impl.sieve_flags
residue_logsums = _impl.residue_logsums
survivor_mask = _impl.survivor_mask
unpaired_evens = _impl.unpaired_evens

__all__ = [
    "BACKEND",
    "sieve_flags",
    "residue_logsums",
    "survivor_mask",
    "unpaired_evens",
]

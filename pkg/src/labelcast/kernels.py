"""Backend selection for the search kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Setting ``LABELCAST_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LABELCAST_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined,no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

# the compiled loops work on 32-bit masks
_WORD = 31


def first_separating_mask(son_masks, width: int) -> int:
    if width > _WORD:
        return _kernels_py.first_separating_mask(son_masks, width)
    return _impl.first_separating_mask(son_masks, width)


def first_one_in_three(pos_masks, neg_masks, var_count: int) -> int:
    if var_count > _WORD:
        return _kernels_py.first_one_in_three(pos_masks, neg_masks, var_count)
    return _impl.first_one_in_three(pos_masks, neg_masks, var_count)

__all__ = ["BACKEND", "first_separating_mask", "first_one_in_three"]

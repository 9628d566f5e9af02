"""Pure-Python versions of the exhaustive-search kernels.

Both functions scan masks in ascending integer order and return the first
hit, or -1. The compiled module ``_kernels`` exposes the same two functions.
"""
from __future__ import annotations

from typing import Sequence


def first_separating_mask(son_masks: Sequence[int], width: int) -> int:
    """First ``m`` in ``[0, 2**width)`` splitting every son mask into a part of size one.

    A son mask holds the parent bits of one node of the next level. ``m`` is
    accepted when, for every son mask ``p``, ``popcount(p & m) == 1`` or
    ``popcount(p & ~m) == 1``.
    """
    full = (1 << width) - 1
    masks = [p & full for p in son_masks]
    for m in range(1 << width):
        rest = full ^ m
        for p in masks:
            if (p & m).bit_count() != 1 and (p & rest).bit_count() != 1:
                break
        else:
            return m
    return -1


def first_one_in_three(pos_masks: Sequence[int], neg_masks: Sequence[int], var_count: int) -> int:
    """First assignment mask (bit 0 is x1) with exactly one true literal per clause."""
    full = (1 << var_count) - 1
    clauses = list(zip(pos_masks, neg_masks))
    for m in range(1 << var_count):
        off = full ^ m
        for pos, neg in clauses:
            if (pos & m).bit_count() + (neg & off).bit_count() != 1:
                break
        else:
            return m
    return -1

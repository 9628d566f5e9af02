# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exhaustive-search kernels; see _kernels_py for the reference semantics."""

from libc.stdint cimport uint32_t, int64_t
from libc.stdlib cimport malloc, free


cdef extern from *:
    int __builtin_popcount(unsigned int) nogil


def first_separating_mask(son_masks, int width):
    if width < 0 or width > 31:
        raise ValueError("width must be in [0, 31]")
    cdef Py_ssize_t n = len(son_masks)
    cdef uint32_t full = ((<uint32_t>1 << width) - 1)
    cdef uint32_t* masks = <uint32_t*>malloc((n + 1) * sizeof(uint32_t))
    if masks == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef uint32_t m, rest, p
    cdef int64_t found = -1
    cdef uint32_t limit = (<uint32_t>1 << width)
    try:
        for i in range(n):
            masks[i] = (<uint32_t>son_masks[i]) & full
        with nogil:
            m = 0
            while m < limit:
                rest = full ^ m
                i = 0
                while i < n:
                    p = masks[i]
                    if __builtin_popcount(p & m) != 1 and __builtin_popcount(p & rest) != 1:
                        break
                    i += 1
                if i == n:
                    found = m
                    break
                m += 1
    finally:
        free(masks)
    return found


def first_one_in_three(pos_masks, neg_masks, int var_count):
    if var_count < 0 or var_count > 31:
        raise ValueError("var_count must be in [0, 31]")
    cdef Py_ssize_t n = len(pos_masks)
    if len(neg_masks) != n:
        raise ValueError("pos_masks and neg_masks differ in length")
    cdef uint32_t full = ((<uint32_t>1 << var_count) - 1)
    cdef uint32_t* pos = <uint32_t*>malloc((n + 1) * sizeof(uint32_t))
    cdef uint32_t* neg = <uint32_t*>malloc((n + 1) * sizeof(uint32_t))
    if pos == NULL or neg == NULL:
        free(pos)
        free(neg)
        raise MemoryError()
    cdef Py_ssize_t i
    cdef uint32_t m, off
    cdef int64_t found = -1
    cdef uint32_t limit = (<uint32_t>1 << var_count)
    try:
        for i in range(n):
            pos[i] = <uint32_t>pos_masks[i]
            neg[i] = <uint32_t>neg_masks[i]
        with nogil:
            m = 0
            while m < limit:
                off = full ^ m
                i = 0
                while i < n:
                    if __builtin_popcount(pos[i] & m) + __builtin_popcount(neg[i] & off) != 1:
                        break
                    i += 1
                if i == n:
                    found = m
                    break
                m += 1
    finally:
        free(pos)
        free(neg)
    return found

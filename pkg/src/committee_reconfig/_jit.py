"""Numba versions of the bit-matrix scan kernels.

Kept at module level so that numba's on-disk cache can key them by
qualified name; nested definitions would be recompiled in every process.
"""

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def union_rows(supports, rows):
    w = supports.shape[1]
    out = np.zeros(w, dtype=np.uint64)
    for i in range(rows.shape[0]):
        r = rows[i]
        for j in range(w):
            out[j] |= supports[r, j]
    return out


@njit(cache=True)
def uncovered_counts(supports, cover):
    m, w = supports.shape
    out = np.zeros(m, dtype=np.int64)
    for c in range(m):
        s = 0
        for j in range(w):
            s += popcount64(supports[c, j] & ~cover[j])
        out[c] = s
    return out


@njit(cache=True)
def first_large_uncovered(supports, cover, mult, rhs):
    m, w = supports.shape
    for c in range(m):
        s = 0
        for j in range(w):
            s += popcount64(supports[c, j] & ~cover[j])
        if s * mult >= rhs:
            return c
    return -1


@njit(cache=True)
def first_large_masked(supports, masks, skip, k, n):
    m, w = supports.shape
    for level in range(masks.shape[0]):
        rhs = (level + 1) * n
        for c in range(m):
            if skip[c]:
                continue
            s = 0
            for j in range(w):
                s += popcount64(supports[c, j] & masks[level, j])
            if s * k >= rhs:
                return level + 1, c
    return 0, -1


@njit(cache=True)
def approval_counts(supports, rows, n):
    counts = np.zeros(n, dtype=np.int64)
    for i in range(rows.shape[0]):
        r = rows[i]
        for v in range(n):
            word = supports[r, v >> 6]
            if (word >> np.uint64(v & 63)) & np.uint64(1):
                counts[v] += 1
    return counts

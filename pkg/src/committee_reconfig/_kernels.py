"""Bit-matrix scan kernels.

Every candidate's support is stored as a row of 64-bit words (shape ``(m, w)``).
The functions here scan those rows; they are the only hot loops that touch
all ``m`` candidates, which for the isolation and tightness families runs into
the millions.

Two interchangeable backends exist: numba ``@njit`` loops with early exit, and
a pure-numpy path that works in fixed-size chunks.  Numba is used when it
imports cleanly unless ``COMMITTEE_RECONFIG_NO_JIT`` is set to a non-empty
value other than ``0``; even then, matrices smaller than ``SMALL_WORDS``
words take the numpy path.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

WORD_BITS = 64
_CHUNK = 1 << 16
SMALL_WORDS = 1 << 14

# ---------------------------------------------------------------- numpy path


def _np_union_rows(supports, rows):
    out = np.zeros(supports.shape[1], dtype=np.uint64)
    if len(rows):
        np.bitwise_or.reduce(supports[rows], axis=0, out=out)
    return out


def _np_uncovered_counts(supports, cover):
    return np.bitwise_count(supports & ~cover).sum(axis=1, dtype=np.int64)


def _np_first_large_uncovered(supports, cover, mult, rhs):
    inv = ~cover
    for start in range(0, supports.shape[0], _CHUNK):
        block = supports[start:start + _CHUNK]
        counts = np.bitwise_count(block & inv).sum(axis=1, dtype=np.int64)
        hits = np.flatnonzero(counts * mult >= rhs)
        if hits.size:
            return int(start + hits[0])
    return -1


def _np_first_large_masked(supports, masks, skip, k, n):
    for level in range(masks.shape[0]):
        rhs = (level + 1) * n
        mask = masks[level]
        for start in range(0, supports.shape[0], _CHUNK):
            block = supports[start:start + _CHUNK]
            counts = np.bitwise_count(block & mask).sum(axis=1, dtype=np.int64)
            ok = (counts * k >= rhs) & ~skip[start:start + _CHUNK]
            hits = np.flatnonzero(ok)
            if hits.size:
                return level + 1, int(start + hits[0])
    return 0, -1


def _np_approval_counts(supports, rows, n):
    counts = np.zeros(n, dtype=np.int64)
    if not len(rows):
        return counts
    sub = supports[rows]
    bits = np.unpackbits(sub.view(np.uint8), axis=1, bitorder="little")
    counts[:] = bits[:, :n].sum(axis=0)
    return counts


numpy_backend = SimpleNamespace(
    name="numpy",
    union_rows=_np_union_rows,
    uncovered_counts=_np_uncovered_counts,
    first_large_uncovered=_np_first_large_uncovered,
    first_large_masked=_np_first_large_masked,
    approval_counts=_np_approval_counts,
)


# ---------------------------------------------------------------- numba path


def _build_numba_backend():
    try:
        from . import _jit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None
    return SimpleNamespace(
        name="numba",
        union_rows=_jit.union_rows,
        uncovered_counts=_jit.uncovered_counts,
        first_large_uncovered=_jit.first_large_uncovered,
        first_large_masked=_jit.first_large_masked,
        approval_counts=_jit.approval_counts,
    )


numba_backend = _build_numba_backend()


def _jit_disabled() -> bool:
    flag = os.environ.get("COMMITTEE_RECONFIG_NO_JIT", "")
    return flag not in ("", "0")


def _by_size(jit, plain):
    def run(supports, *args):
        return (plain if supports.size < SMALL_WORDS else jit)(supports, *args)

    run.__name__ = jit.__name__
    return run


def _hybrid(jit: SimpleNamespace) -> SimpleNamespace:
    """The numba backend, except that matrices under ``SMALL_WORDS`` words go
    to numpy: there a scan costs microseconds and loading compiled code does not."""
    names = ("union_rows", "uncovered_counts", "first_large_uncovered", "first_large_masked", "approval_counts")
    return SimpleNamespace(name="numba", **{f: _by_size(getattr(jit, f), getattr(numpy_backend, f)) for f in names})


backend = numpy_backend if (_jit_disabled() or numba_backend is None) else _hybrid(numba_backend)


def get_backend(name: str) -> SimpleNamespace:
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        if numba_backend is None:
            raise RuntimeError("numba backend unavailable")
        return numba_backend
    raise ValueError(f"unknown kernel backend {name!r}")


# ------------------------------------------------------------- conversions


def words_for(n: int) -> int:
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def int_to_words(mask: int, nwords: int) -> np.ndarray:
    return np.frombuffer(mask.to_bytes(nwords * 8, "little"), dtype=np.uint64).copy()


def words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype=np.uint64).tobytes(), "little")


def masks_to_matrix(masks, nwords: int) -> np.ndarray:
    """Pack Python-int bitmasks into an ``(len(masks), nwords)`` word matrix."""
    out = np.zeros((len(masks), nwords), dtype=np.uint64)
    nbytes = nwords * 8
    for i, mask in enumerate(masks):
        if mask:
            out[i] = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint64)
    return out


def bools_to_words(flags: np.ndarray, nwords: int) -> np.ndarray:
    """Pack a boolean vector (bit i = flags[i]) into ``nwords`` words."""
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    buf[: packed.size] = packed
    return buf.view(np.uint64)

"""JR, EJR and EJR+ checkers (with alpha-approximate variants) and witnesses.

Every threshold is decided with integers: a group of size ``s`` is
``(alpha * ell)``-large iff ``s * k * den >= num * ell * n`` where
``alpha = num/den``.

Two readings of the approximate axioms are offered.  In ``"proof"`` mode
(the default) an alpha-JR violation needs ``alpha * n/k`` uncovered voters
sharing one approved candidate, and an alpha-EJR violation at level ``ell``
needs ``alpha * ell * n/k`` voters sharing ``ell`` candidates.  In
``"literal"`` mode the number of shared candidates is raised to
``ceil(alpha * ell)`` as well.  For ``alpha = 1`` both coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from . import _kernels as K
from .core import Instance, VoterSet, coverage_words, fraction_str

MODES = ("proof", "literal")
_I64_SAFE = 1 << 62


def as_alpha(alpha) -> Fraction:
    a = Fraction(alpha)
    if a < 1:
        raise ValueError(f"alpha must be >= 1, got {a}")
    return a


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class JrWitness:
    candidate: int
    group: VoterSet
    alpha: Fraction = Fraction(1)
    common: tuple = ()

    axiom = "jr"
    ell = 1

    @property
    def candidates(self) -> tuple:
        return self.common or (self.candidate,)

    def to_json(self) -> dict:
        return _witness_json(self.axiom, self.alpha, self.ell, self.candidates, self.group)


@dataclass(frozen=True)
class EjrWitness:
    ell: int
    common: tuple
    group: VoterSet
    alpha: Fraction = Fraction(1)

    axiom = "ejr"

    @property
    def candidates(self) -> tuple:
        return self.common

    def to_json(self) -> dict:
        return _witness_json(self.axiom, self.alpha, self.ell, self.common, self.group)


@dataclass(frozen=True)
class EjrPlusWitness:
    candidate: int
    ell: int
    group: VoterSet

    axiom = "ejr+"
    alpha = Fraction(1)

    @property
    def candidates(self) -> tuple:
        return (self.candidate,)

    def to_json(self) -> dict:
        return _witness_json(self.axiom, self.alpha, self.ell, self.candidates, self.group)


def _witness_json(axiom, alpha, ell, candidates, group) -> dict:
    return {
        "axiom": axiom,
        "alpha": fraction_str(alpha),
        "ell": ell,
        "candidates": [int(c) for c in candidates],
        "voters": VoterSet(group).tolist(),
    }


# -- helpers -----------------------------------------------------------------


def _words_to_voters(words: np.ndarray) -> VoterSet:
    return VoterSet(K.words_to_int(words))


def _members_below(inst: Instance, W: tuple, ell: int, counts: np.ndarray | None = None) -> np.ndarray:
    """Word mask of voters approving fewer than ``ell`` members of ``W``."""
    if counts is None:
        counts = K.backend.approval_counts(inst.words, np.asarray(W, dtype=np.int64), inst.n)
    return K.bools_to_words(counts < ell, inst.words.shape[1])


def _first_large(inst: Instance, mask_words: np.ndarray, mult: int, rhs: int) -> int:
    """Smallest c with ``|supp(c) & mask| * mult >= rhs`` or -1."""
    if inst.n * mult < _I64_SAFE and rhs < _I64_SAFE:
        return int(K.backend.first_large_uncovered(inst.words, ~mask_words, mult, rhs))
    mask = K.words_to_int(mask_words)
    for c, supp in enumerate(inst.support_masks):
        if (supp & mask).bit_count() * mult >= rhs:
            return c
    return -1


def _search_common(inst: Instance, size: int, allowed: np.ndarray, mult: int, rhs: int):
    """Lexicographically first ``size``-subset T of candidates whose common
    support restricted to ``allowed`` (word mask) reaches the threshold.

    Returns ``(T, group)`` or ``None``.  Depth-first in index order, pruning
    any prefix whose restricted common support is already too small.
    """
    if size == 1:
        c = _first_large(inst, allowed, mult, rhs)
        if c < 0:
            return None
        return (c,), _words_to_voters(inst.words[c] & allowed)
    counts = K.backend.uncovered_counts(inst.words, ~allowed)
    pool = np.flatnonzero(counts * mult >= rhs) if inst.n * mult < _I64_SAFE else np.flatnonzero(
        np.array([int(x) * mult >= rhs for x in counts], dtype=bool)
    )
    if len(pool) < size:
        return None
    base = K.words_to_int(allowed)
    masks = [int(inst.support(int(c))) & base for c in pool]
    pool = [int(c) for c in pool]
    chosen: list[int] = []

    def dfs(start: int, common: int):
        need = size - len(chosen)
        if need == 0:
            return common
        for i in range(start, len(pool) - need + 1):
            nxt = common & masks[i]
            if nxt.bit_count() * mult < rhs:
                continue
            chosen.append(pool[i])
            got = dfs(i + 1, nxt)
            if got is not None:
                return got
            chosen.pop()
        return None

    group = dfs(0, base)
    if group is None:
        return None
    return tuple(chosen), VoterSet(group)


# -- checkers ----------------------------------------------------------------


def check_jr(inst: Instance, W: Iterable[int], alpha=1, mode: str = "proof") -> Optional[JrWitness]:
    """Return a witness of an alpha-JR violation by ``W``, or ``None``."""
    alpha = as_alpha(alpha)
    _check_mode(mode)
    W = tuple(W)
    uncovered = ~coverage_words(inst, W)
    mult = inst.k * alpha.denominator
    rhs = alpha.numerator * inst.n
    size = math.ceil(alpha) if mode == "literal" else 1
    found = _search_common(inst, size, uncovered, mult, rhs)
    if found is None:
        return None
    T, group = found
    return JrWitness(T[0], group, alpha, T if size > 1 else ())


def check_ejr(
    inst: Instance,
    W: Iterable[int],
    alpha=1,
    max_ell: int | None = None,
    mode: str = "proof",
) -> Optional[EjrWitness]:
    """Return the witness with smallest ``(ell, T)`` of an alpha-EJR violation."""
    alpha = as_alpha(alpha)
    _check_mode(mode)
    if max_ell is None:
        max_ell = inst.k
    if not 1 <= max_ell <= inst.k:
        raise ValueError(f"max_ell must lie in [1, {inst.k}], got {max_ell}")
    W = tuple(W)
    counts = K.backend.approval_counts(inst.words, np.asarray(W, dtype=np.int64), inst.n)
    mult = inst.k * alpha.denominator
    for ell in range(1, max_ell + 1):
        rhs = alpha.numerator * ell * inst.n
        if inst.n * mult < rhs:
            break  # no group can be large enough at this or any higher level
        size = math.ceil(alpha * ell) if mode == "literal" else ell
        if size > inst.m:
            break
        allowed = _members_below(inst, W, ell, counts)
        found = _search_common(inst, size, allowed, mult, rhs)
        if found is not None:
            T, group = found
            return EjrWitness(ell, T, group, alpha)
    return None


def check_ejr_plus(inst: Instance, W: Iterable[int], exclude: Iterable[int] = ()) -> Optional[EjrPlusWitness]:
    """Return the witness with smallest ``(ell, candidate)`` of an EJR+ violation.

    Candidates in ``exclude`` are not considered as witness candidates.
    """
    W = tuple(W)
    n, k = inst.n, inst.k
    counts = K.backend.approval_counts(inst.words, np.asarray(W, dtype=np.int64), n)
    nw = inst.words.shape[1]
    levels = k  # an ell-large group needs ell <= k
    masks = np.zeros((levels, nw), dtype=np.uint64)
    for ell in range(1, levels + 1):
        masks[ell - 1] = K.bools_to_words(counts < ell, nw)
    skip = np.zeros(inst.m, dtype=np.bool_)
    if W:
        skip[list(W)] = True
    exclude = list(exclude)
    if exclude:
        skip[exclude] = True
    ell, c = K.backend.first_large_masked(inst.words, masks, skip, k, n)
    if c < 0:
        return None
    group = _words_to_voters(inst.words[c] & masks[ell - 1])
    return EjrPlusWitness(int(c), int(ell), group)


AXIOMS = ("jr", "ejr", "ejr+")


def check(inst: Instance, W: Iterable[int], axiom: str, alpha=1, mode: str = "proof"):
    """Dispatch on an axiom name; returns a witness or ``None``."""
    if axiom == "jr":
        return check_jr(inst, W, alpha, mode)
    if axiom == "ejr":
        return check_ejr(inst, W, alpha, mode=mode)
    if axiom == "ejr+":
        if Fraction(alpha) != 1:
            raise ValueError("EJR+ has no approximate variant")
        return check_ejr_plus(inst, W)
    raise ValueError(f"unknown axiom {axiom!r}")


def satisfies(inst: Instance, W: Iterable[int], axiom: str = "jr", alpha=1) -> bool:
    return check(inst, W, axiom, alpha) is None

"""Structured instance families, hand-built fixtures and seeded random instances.

Candidate numbering of the two large families is fixed: the weak block
``c_0 .. c_{k-1}`` comes first, then the strong candidates ordered by their
first-side voter set (colex) and then their second-side voter set (colex).
Colex order of equal-size subsets is numeric order of their bitmasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from . import _kernels as K
from .core import Instance

MAX_CANDIDATES = 5_000_000
_ARANGE_BITS = 24


class FamilyTooLarge(ValueError):
    pass


# -- subset enumeration ------------------------------------------------------


def colex_masks(size: int, r: int) -> np.ndarray:
    """All ``r``-subsets of ``range(size)`` as uint64 bitmasks, colex order."""
    if size > 64:
        raise FamilyTooLarge("subset masks need at most 64 elements")
    count = math.comb(size, r)
    if count > MAX_CANDIDATES:
        raise FamilyTooLarge(f"C({size},{r}) = {count} subsets exceed {MAX_CANDIDATES}")
    if size <= _ARANGE_BITS:
        allm = np.arange(1 << size, dtype=np.uint64)
        return allm[np.bitwise_count(allm) == r]
    out = np.fromiter(
        (sum(1 << i for i in combo) for combo in combinations(range(size), r)),
        dtype=np.uint64,
        count=count,
    )
    out.sort()
    return out


def colex_rank(elements) -> int:
    """Position of a subset (0-based elements) in colex order of its size."""
    return sum(math.comb(e, j + 1) for j, e in enumerate(sorted(elements)))


# -- isolated committee family -----------------------------------------------


def isolated_counts(k: int) -> tuple[int, int, int]:
    """``(n, |C2| per first-side voter, m)`` of the isolated family."""
    n = k**3
    per = math.comb(k**3 - k**2, k**2 - 1)
    return n, per, k + k**2 * per


def gen_isolated(k: int) -> tuple[Instance, tuple, list]:
    """The family where the weak block ``C1`` is a JR committee whose JR
    neighbours all lie at distance at least ``k - 1``.

    Returns the instance, ``W = C1`` and one representative swap per
    symmetry class of distance-1 moves from ``W``.
    """
    if k < 3:
        raise ValueError("the isolated family needs k >= 3")
    n, per, m = isolated_counts(k)
    if n > 64 or m > MAX_CANDIDATES:
        raise FamilyTooLarge(f"isolated family with k={k} has {m} candidates")
    k2 = k * k
    words = np.empty((m, 1), dtype=np.uint64)
    for i in range(k):
        words[i, 0] = np.uint64(((1 << k) - 1) << (i * k))
    second = colex_masks(n - k2, k2 - 1) << np.uint64(k2)
    for j in range(k2):
        lo = k + j * per
        words[lo:lo + per, 0] = second | np.uint64(1 << j)
    inst = Instance.from_support_words(n, words, k)
    W = tuple(range(k))
    return inst, W, isolated_class_representatives(k)


def isolated_candidate(k: int, idx: int) -> Optional[tuple[int, int]]:
    """``(first-side voter, rank of second-side set)`` of a strong candidate,
    or ``None`` for a weak one."""
    if idx < k:
        return None
    per = isolated_counts(k)[1]
    return divmod(idx - k, per)


def isolated_swap_class(k: int, removed: int, added: int) -> tuple[int, bool]:
    """Symmetry class of the move "``removed`` out, ``added`` in" from ``C1``:
    the removed weak candidate and whether the added strong candidate's
    first-side voter is one the removed candidate covered."""
    voter, _ = isolated_candidate(k, added)
    return removed, voter // k == removed


def isolated_class_representatives(k: int) -> list[dict]:
    per = isolated_counts(k)[1]
    reps = []
    for i in range(k):
        inside = i * k
        outside = 0 if i != 0 else k
        for covers, voter in ((True, inside), (False, outside)):
            added = k + voter * per
            committee = tuple(sorted([c for c in range(k) if c != i] + [added]))
            reps.append({"removed": i, "added": added, "covers_removed": covers, "committee": committee})
    return reps


def isolated_cover_committee(k: int) -> tuple:
    """``k`` strong candidates jointly covering the whole second side."""
    k2 = k * k
    size = k**3 - k2
    per = isolated_counts(k)[1]
    out = []
    start = 0
    for j in range(k):
        lo = min(start, size - (k2 - 1))
        elems = range(lo, lo + k2 - 1)
        out.append(k + j * per + colex_rank(elems))
        start += k2 - 1
    covered = set()
    for j in range(k):
        lo = min(j * (k2 - 1), size - (k2 - 1))
        covered.update(range(lo, lo + k2 - 1))
    if len(covered) != size:
        raise AssertionError("cover committee misses second-side voters")
    return tuple(sorted(out))


# -- tightness family --------------------------------------------------------


def tightness_alpha(r: int) -> Fraction:
    return Fraction(2 * r, r + 2)


def tightness_counts(r: int) -> tuple[int, int, int, int, int]:
    """``(n1, n2, k, |C2|, m)``."""
    n1, n2 = r * (r + 1) ** 2, r * (r + 1)
    k = r * (r + 1)
    c2 = math.comb(n1, r) * math.comb(n2, r)
    return n1, n2, k, c2, k + c2


def gen_tightness(r: int) -> tuple[Instance, tuple, tuple]:
    """The family separating two JR committees inside ``alpha``-JR for
    ``alpha = 2r/(r+2)``.  Returns the instance, ``W = C1`` and a JR
    committee holding ``r + 1`` strong candidates."""
    if r < 3:
        raise ValueError("the tightness family needs r >= 3")
    n1, n2, k, c2, m = tightness_counts(r)
    n = n1 + n2
    if n > 64 or m > MAX_CANDIDATES:
        raise FamilyTooLarge(f"tightness family with r={r} has {m} candidates")
    first = colex_masks(n1, r)
    second = colex_masks(n2, r) << np.uint64(n1)
    words = np.empty((m, 1), dtype=np.uint64)
    for i in range(k):
        words[i, 0] = np.uint64(((1 << (r + 1)) - 1) << (i * (r + 1)))
    words[k:, 0] = (first[:, None] | second[None, :]).reshape(-1)
    inst = Instance.from_support_words(n, words, k)
    W = tuple(range(k))
    strong = [tightness_candidate(r, range(r), range(b * r, b * r + r)) for b in range(r + 1)]
    W2 = tuple(sorted(strong + list(range(k - (r + 1)))))
    return inst, W, W2


def tightness_candidate(r: int, first, second) -> int:
    """Index of the strong candidate with first-side voters ``first`` and
    second-side voters ``second`` (both given relative to their side)."""
    n1, n2, k, _, _ = tightness_counts(r)
    return k + colex_rank(first) * math.comb(n2, r) + colex_rank(second)


def tightness_strong_range(r: int) -> range:
    _, _, k, c2, m = tightness_counts(r)
    return range(k, m)


# -- grid --------------------------------------------------------------------


def gen_grid(r: int) -> Instance:
    """``r*r`` voters on a grid; voter ``i*r + j`` approves row candidate
    ``i`` and column candidate ``r + j``; ``k = r``."""
    if r < 2:
        raise ValueError("grid needs r >= 2")
    ballots = [[i, r + j] for i in range(r) for j in range(r)]
    return Instance.from_approvals(ballots, 2 * r, r)


# -- fixtures ----------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    instance: Instance
    committees: dict = field(default_factory=dict)


def _example1() -> Fixture:
    ballots = [[0], [0, 1], [0, 1]] + [[2, 3, 4]] * 4 + [[2, 3, 5]] * 2
    inst = Instance.from_approvals(ballots, 6, 3)
    return Fixture("example1", inst, {
        "jr_start": (0, 2, 3),
        "jr_end": (1, 4, 5),
        "path": [(0, 2, 3), (1, 2, 3), (1, 3, 4), (1, 4, 5)],
        "not_jr": (2, 3, 4),
        "not_ejr": (1, 4, 5),
    })


def _ccav_table() -> Fixture:
    ballots = [[0, 3], [0], [1, 3], [1], [2, 3], [2], []]
    inst = Instance.from_approvals(ballots, 4, 3)
    return Fixture("ccav_table", inst, {"ccav": (0, 1, 2)})


def _vi_table() -> Fixture:
    ballots = [[0, 4], [0, 4], [2, 4, 5], [3, 4, 5], [1, 5], [1, 5]]
    inst = Instance.from_approvals(ballots, 6, 2)
    return Fixture("vi_table", inst, {"W": (0, 1), "W2": (2, 3)})


def _civi_table() -> Fixture:
    ballots = [[0, 1, 2, 3, 4]] * 3 + [[2, 3, 4, 5, 6]] * 3
    inst = Instance.from_approvals(ballots, 7, 3)
    return Fixture("civi_table", inst, {"W": (0, 1, 2), "W2": (2, 5, 6)})


FIXTURES = {
    "example1": _example1,
    "ccav_table": _ccav_table,
    "vi_table": _vi_table,
    "civi_table": _civi_table,
}


def gen_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


# -- random ------------------------------------------------------------------


def gen_random(n: int, m: int, k: int, density: float, seed: int) -> Instance:
    """Each voter approves each candidate independently with ``density``."""
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise ValueError(f"invalid sizes n={n}, m={m}, k={k}")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    approve = rng.random((n, m)) < density
    nw = K.words_for(n)
    packed = np.packbits(approve.T, axis=1, bitorder="little")
    buf = np.zeros((m, nw * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return Instance.from_support_words(n, buf.view(np.uint64).copy(), k)


# -- descriptors ---------------------------------------------------------------


@dataclass
class FamilyDescriptor:
    family: str
    params: dict
    instance: Instance
    committees: dict = field(default_factory=dict)
    automorphism_classes: Optional[list] = None

    def sidecar(self) -> dict:
        def enc(v):
            if isinstance(v, tuple):
                return list(v)
            if isinstance(v, list):
                return [enc(x) for x in v]
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            return v

        doc = {
            "family": self.family,
            "params": {key: str(v) if isinstance(v, float) else v for key, v in self.params.items()},
            "n": self.instance.n,
            "m": self.instance.m,
            "k": self.instance.k,
            "committees": {key: enc(val) for key, val in self.committees.items()},
        }
        if self.automorphism_classes is not None:
            doc["automorphism_classes"] = [
                {key: enc(val) for key, val in rep.items()} for rep in self.automorphism_classes
            ]
        return doc


FAMILIES = ("isolated", "tightness", "grid", "fixture", "random")


def describe(family: str, **params) -> FamilyDescriptor:
    """Build any family by name, with its annotated committees."""
    if family == "isolated":
        k = int(params["k"])
        inst, W, reps = gen_isolated(k)
        return FamilyDescriptor(family, {"k": k}, inst, {"W": W, "cover": isolated_cover_committee(k)}, reps)
    if family == "tightness":
        r = int(params["r"])
        inst, W, W2 = gen_tightness(r)
        return FamilyDescriptor(family, {"r": r}, inst, {"W": W, "W2": W2, "alpha": tightness_alpha(r)})
    if family == "grid":
        r = int(params["r"])
        inst = gen_grid(r)
        return FamilyDescriptor(family, {"r": r}, inst, {
            "rows": tuple(range(r)), "cols": tuple(range(r, 2 * r)),
        })
    if family == "fixture":
        fx = gen_fixture(str(params["name"]))
        return FamilyDescriptor(family, {"name": fx.name}, fx.instance, dict(fx.committees))
    if family == "random":
        keys = {"n": int, "m": int, "k": int, "density": float, "seed": int}
        missing = set(keys) - set(params)
        if missing:
            raise ValueError(f"random family needs {sorted(missing)}")
        vals = {key: cast(params[key]) for key, cast in keys.items()}
        return FamilyDescriptor(family, vals, gen_random(**vals))
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")

"""Election data model: instances, voter/candidate sets, distance, file formats."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels as K

Committee = tuple  # sorted tuple of candidate indices


class InstanceFormatError(ValueError):
    """Malformed instance text; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class VoterSet(int):
    """A set of voter indices packed into an arbitrary-precision int."""

    __slots__ = ()

    def __new__(cls, mask: int = 0):
        return super().__new__(cls, mask)

    @classmethod
    def of(cls, voters: Iterable[int]) -> "VoterSet":
        mask = 0
        for v in voters:
            mask |= 1 << v
        return cls(mask)

    def __len__(self) -> int:
        return self.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self >> v & 1)

    def tolist(self) -> list[int]:
        return list(iter_bits(self))

    def __repr__(self) -> str:
        return f"VoterSet({self.tolist()})"


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


class Instance:
    """An immutable approval election.

    Candidate supports are the primary storage, as a ``(m, w)`` uint64 word
    matrix; per-voter ballots and Python-int masks are derived lazily, since
    the large generated families cannot afford a frozenset per voter.
    """

    __slots__ = ("n", "m", "k", "names", "_words", "_masks", "_approvals", "_ballots")

    def __init__(self, n: int, m: int, k: int, words: np.ndarray, names: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("need at least one voter")
        if not 1 <= k <= m:
            raise ValueError(f"committee size k={k} must satisfy 1 <= k <= m={m}")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (m, K.words_for(n)):
            raise ValueError(f"support matrix has shape {words.shape}, expected {(m, K.words_for(n))}")
        tail = n % 64
        if tail and m and np.any(words[:, -1] >> np.uint64(tail)):
            raise ValueError("support mentions a voter index >= n")
        words.setflags(write=False)
        if names is not None:
            names = tuple(names)
            if len(names) != m:
                raise ValueError("names must list one entry per candidate")
        self.n, self.m, self.k, self.names = n, m, k, names
        self._words = words
        self._masks = None
        self._approvals = None
        self._ballots = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_approvals(cls, approvals: Sequence[Iterable[int]], m: int, k: int, names=None) -> "Instance":
        n = len(approvals)
        masks = [0] * m
        for v, ballot in enumerate(approvals):
            bit = 1 << v
            for c in ballot:
                if not 0 <= c < m:
                    raise ValueError(f"voter {v} approves candidate {c} outside [0, {m})")
                masks[c] |= bit
        inst = cls.from_support_masks(n, masks, k, names)
        return inst

    @classmethod
    def from_support_masks(cls, n: int, masks: Sequence[int], k: int, names=None) -> "Instance":
        words = K.masks_to_matrix(masks, K.words_for(n))
        inst = cls(n, len(masks), k, words, names)
        inst._masks = tuple(VoterSet(x) for x in masks)
        return inst

    @classmethod
    def from_support_words(cls, n: int, words: np.ndarray, k: int) -> "Instance":
        return cls(n, words.shape[0], k, words)

    # -- derived views ------------------------------------------------------

    @property
    def words(self) -> np.ndarray:
        return self._words

    @property
    def support_masks(self) -> tuple:
        if self._masks is None:
            raw = self._words.tobytes()
            step = self._words.shape[1] * 8
            self._masks = tuple(
                VoterSet(int.from_bytes(raw[i:i + step], "little")) for i in range(0, len(raw), step)
            )
        return self._masks

    def support(self, c: int) -> VoterSet:
        if self._masks is not None:
            return self._masks[c]
        return VoterSet(K.words_to_int(self._words[c]))

    def approval_matrix(self) -> np.ndarray:
        """``(n, m)`` boolean matrix; row ``v`` is voter ``v``'s ballot."""
        raw = self._words.view(np.uint8)
        bits = np.unpackbits(raw, axis=1, bitorder="little")[:, : self.n]
        return np.ascontiguousarray(bits.T, dtype=bool)

    @property
    def ballot_masks(self) -> tuple:
        """Per-voter approval sets as candidate bitmasks."""
        if self._ballots is None:
            packed = np.packbits(self.approval_matrix(), axis=1, bitorder="little")
            self._ballots = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return self._ballots

    @property
    def approvals(self) -> tuple:
        if self._approvals is None:
            self._approvals = tuple(
                frozenset(np.flatnonzero(row).tolist()) for row in self.approval_matrix()
            )
        return self._approvals

    @property
    def all_voters(self) -> VoterSet:
        return VoterSet((1 << self.n) - 1)

    def large(self, size: int, ell: int = 1, alpha: Fraction | int = 1) -> bool:
        """Is a group of ``size`` voters (alpha*ell)-large?  Exact."""
        alpha = Fraction(alpha)
        return size * self.k * alpha.denominator >= alpha.numerator * ell * self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.n, self.m, self.k) == (other.n, other.m, other.k) and np.array_equal(
            self._words, other._words
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.k, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, k={self.k})"


# -- committees --------------------------------------------------------------


def as_committee(inst: Instance, W: Iterable[int], size: int | None = None, *, max_size: int | None = None) -> tuple:
    """Validate and canonicalize a candidate set as a sorted tuple."""
    members = tuple(sorted(set(int(c) for c in W)))
    if members and (members[0] < 0 or members[-1] >= inst.m):
        raise ValueError(f"candidate index out of range [0, {inst.m})")
    if size is not None and len(members) != size:
        raise ValueError(f"expected {size} candidates, got {len(members)}")
    limit = inst.k if max_size is None else max_size
    if len(members) > limit:
        raise ValueError(f"candidate set of size {len(members)} exceeds {limit}")
    return members


def coverage(inst: Instance, W: Iterable[int]) -> VoterSet:
    """Voters approving at least one member of ``W``."""
    W = list(W)
    if inst._masks is not None or len(W) <= 4:
        mask = 0
        for c in W:
            mask |= inst.support(c)
        return VoterSet(mask)
    rows = np.asarray(W, dtype=np.int64)
    return VoterSet(K.words_to_int(K.backend.union_rows(inst.words, rows)))


def coverage_words(inst: Instance, W: Iterable[int]) -> np.ndarray:
    rows = np.asarray(list(W), dtype=np.int64)
    return K.backend.union_rows(inst.words, rows)


def distance(W: Iterable[int], W2: Iterable[int]) -> int:
    """``|W \\ W2|`` for two committees of equal size."""
    a, b = set(W), set(W2)
    if len(a) != len(b):
        raise ValueError(f"committee sizes differ ({len(a)} vs {len(b)})")
    return len(a - b)


def swap(W: Iterable[int], out: int, into: int) -> tuple:
    s = set(W)
    s.discard(out)
    s.add(into)
    return tuple(sorted(s))


def candidate_mask(W: Iterable[int]) -> int:
    return mask_of(W)


def format_committee(W: Iterable[int]) -> str:
    return ",".join(str(c) for c in sorted(W))


def parse_committee(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(sorted(int(tok) for tok in text.split(",") if tok.strip()))
    except ValueError as exc:
        raise ValueError(f"bad committee {text!r}: {exc}") from None


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


# -- text format -------------------------------------------------------------


def parse_instance(data: str | bytes) -> Instance:
    """Parse the line-based instance format.

    Line 1 holds ``n m k``; the next ``n`` non-comment lines are ballots of
    0-based candidate indices.  Lines starting with ``#`` are skipped; missing
    trailing ballots are empty.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows = [(no, ln.strip()) for no, ln in enumerate(lines, 1) if not ln.lstrip().startswith("#")]
    if not rows:
        raise InstanceFormatError("empty input, expected header 'n m k'", 1)
    head_no, head = rows[0]
    parts = head.split()
    if len(parts) != 3:
        raise InstanceFormatError(f"header must be 'n m k', got {head!r}", head_no)
    try:
        n, m, k = (int(p) for p in parts)
    except ValueError:
        raise InstanceFormatError(f"header must be three integers, got {head!r}", head_no) from None
    if n < 1:
        raise InstanceFormatError("n must be at least 1", head_no)
    if m < 1:
        raise InstanceFormatError("m must be at least 1", head_no)
    if not 1 <= k <= m:
        raise InstanceFormatError(f"k={k} must satisfy 1 <= k <= m={m}", head_no)
    body = rows[1:]
    extra = [(no, ln) for no, ln in body[n:] if ln]
    if extra:
        raise InstanceFormatError(f"more than n={n} ballots", extra[0][0])
    approvals: list[list[int]] = []
    for v in range(n):
        if v >= len(body):
            approvals.append([])
            continue
        no, ln = body[v]
        ballot: list[int] = []
        seen = set()
        for tok in ln.split():
            try:
                c = int(tok)
            except ValueError:
                raise InstanceFormatError(f"bad candidate index {tok!r}", no) from None
            if not 0 <= c < m:
                raise InstanceFormatError(f"candidate index {c} not in [0, {m})", no)
            if c in seen:
                raise InstanceFormatError(f"candidate {c} listed twice", no)
            seen.add(c)
            ballot.append(c)
        approvals.append(ballot)
    return Instance.from_approvals(approvals, m, k)


def serialize_instance(inst: Instance) -> str:
    out = [f"{inst.n} {inst.m} {inst.k}"]
    for row in inst.approval_matrix():
        out.append(" ".join(map(str, np.flatnonzero(row).tolist())))
    return "\n".join(out) + "\n"


def instance_to_json(inst: Instance) -> dict:
    doc = {
        "n": inst.n,
        "m": inst.m,
        "k": inst.k,
        "approvals": [np.flatnonzero(row).tolist() for row in inst.approval_matrix()],
    }
    if inst.names is not None:
        doc["names"] = list(inst.names)
    return doc


def instance_from_json(doc: dict | str) -> Instance:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        n, m, k, approvals = doc["n"], doc["m"], doc["k"], doc["approvals"]
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"missing field {exc}") from None
    if len(approvals) != n:
        raise InstanceFormatError(f"approvals has {len(approvals)} ballots, n={n}")
    for v, ballot in enumerate(approvals):
        if len(set(ballot)) != len(ballot):
            raise InstanceFormatError(f"voter {v} lists a candidate twice")
    try:
        return Instance.from_approvals(approvals, m, k, doc.get("names"))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def load_instance(path: str) -> Instance:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw.lstrip().startswith(b"{"):
        return instance_from_json(raw.decode("utf-8"))
    return parse_instance(raw)

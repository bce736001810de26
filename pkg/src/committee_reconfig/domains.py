"""Candidate-interval and voter-interval profiles, and direct JR paths on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ._pqtree import consecutive_ones_order, is_consecutive
from .axioms import check_jr
from .core import Instance, as_committee, iter_bits
from .reconfig._walk import swap_walk
from .reconfig.search import Path, Predicate, simplify


@dataclass(frozen=True)
class DomainCertificate:
    """``kind`` is ``"ci"`` (ordering of candidates) or ``"vi"`` (of voters)."""

    kind: str
    ordering: tuple

    def sets(self, inst: Instance) -> list:
        if self.kind == "ci":
            return [list(iter_bits(b)) for b in inst.ballot_masks]
        return [list(iter_bits(s)) for s in inst.support_masks]

    def universe(self, inst: Instance) -> int:
        return inst.m if self.kind == "ci" else inst.n

    def verify(self, inst: Instance) -> bool:
        if self.kind not in ("ci", "vi"):
            return False
        if sorted(self.ordering) != list(range(self.universe(inst))):
            return False
        return is_consecutive(self.ordering, self.sets(inst))

    def to_json(self) -> dict:
        return {"kind": self.kind, "ordering": list(self.ordering)}


def _recognize(inst: Instance, kind: str) -> Optional[DomainCertificate]:
    probe = DomainCertificate(kind, tuple(range(inst.m if kind == "ci" else inst.n)))
    if probe.verify(inst):
        return probe
    order = consecutive_ones_order(probe.universe(inst), probe.sets(inst))
    if order is None:
        return None
    cert = DomainCertificate(kind, tuple(order))
    if not cert.verify(inst):  # pragma: no cover - guarded by tests
        raise AssertionError("consecutive-ones ordering failed verification")
    return cert


def recognize_ci(inst: Instance) -> Optional[DomainCertificate]:
    """Candidate order making every ballot an interval, if one exists.

    The identity order is preferred when it already works.
    """
    return _recognize(inst, "ci")


def recognize_vi(inst: Instance) -> Optional[DomainCertificate]:
    """Voter order making every candidate's support an interval, if one exists."""
    return _recognize(inst, "vi")


def pareto_dominators(inst: Instance, c: int) -> tuple:
    """Candidates whose support strictly contains that of ``c``."""
    s = int(inst.support(c))
    out = []
    for d, t in enumerate(inst.support_masks):
        t = int(t)
        if d != c and s & t == s and t != s:
            out.append(d)
    return tuple(out)


def pareto_optimal(inst: Instance) -> tuple:
    return tuple(c for c in range(inst.m) if not pareto_dominators(inst, c))


def _require(inst: Instance, cert: DomainCertificate, kind: str, W, W2) -> tuple:
    if cert.kind != kind or not cert.verify(inst):
        raise ValueError(f"invalid {kind.upper()} certificate")
    W = as_committee(inst, W, inst.k)
    W2 = as_committee(inst, W2, inst.k)
    for end in (W, W2):
        if check_jr(inst, end) is not None:
            raise ValueError(f"committee {list(end)} violates JR")
    return W, W2


def _ci_steps(pos: dict, W: tuple, W2: tuple) -> list:
    X, Y = set(W), set(W2)
    left, right = [W], [W2]
    while X != Y:
        d = min(X - Y, key=pos.get)
        e = min(Y - X, key=pos.get)
        if pos[d] < pos[e]:
            X.remove(d)
            X.add(e)
            left.append(tuple(sorted(X)))
        else:
            Y.remove(e)
            Y.add(d)
            right.append(tuple(sorted(Y)))
    return left + right[::-1][1:]


def connect_jr_ci(inst: Instance, cert: DomainCertificate, W, W2) -> Path:
    """JR path of length exactly ``distance(W, W2)`` on a CI profile."""
    W, W2 = _require(inst, cert, "ci", W, W2)
    pos = {c: i for i, c in enumerate(cert.ordering)}
    path = Path.build(inst, _ci_steps(pos, W, W2), Predicate.jr()).validate(W, W2)
    if len(path) != len(set(W) - set(W2)):
        raise AssertionError("CI path length differs from the distance")
    return path


def _undominate(inst: Instance, W: tuple, po: tuple, until_full: bool) -> list:
    """Replace dominated members by Pareto-optimal candidates.

    Each dominated member goes out for its smallest Pareto-optimal dominator
    outside the committee, or, if every such dominator is already in, for
    the smallest Pareto-optimal candidate outside.  Stops when no dominated
    member is left, or (``until_full``) when all of ``po`` is in.
    """
    po_set = set(po)
    X = set(W)
    steps = [W]
    while True:
        if until_full and po_set <= X:
            break
        bad = sorted(c for c in X if c not in po_set)
        if not bad:
            break
        c = bad[0]
        doms = [d for d in pareto_dominators(inst, c) if d in po_set and d not in X]
        spare = doms or sorted(po_set - X)
        if not spare:
            break
        X.remove(c)
        X.add(spare[0])
        steps.append(tuple(sorted(X)))
    return steps


def connect_jr_vi(inst: Instance, cert: DomainCertificate, W, W2) -> Path:
    """JR path between two JR committees on a VI profile.

    With at least ``k`` Pareto-optimal candidates, both ends first shed
    dominated members; the rest runs on the Pareto-optimal sub-profile,
    which is CI.  Otherwise both ends absorb every Pareto-optimal candidate
    and then swap freely.
    """
    W, W2 = _require(inst, cert, "vi", W, W2)
    pred = Predicate.jr()
    po = pareto_optimal(inst)
    if len(po) >= inst.k:
        left = _undominate(inst, W, po, False)
        right = _undominate(inst, W2, po, False)
        sub = Instance.from_support_masks(inst.n, [int(inst.support(c)) for c in po], inst.k)
        sub_cert = recognize_ci(sub)
        if sub_cert is None:
            raise AssertionError("Pareto-optimal part of a VI profile is not CI")
        index = {c: i for i, c in enumerate(po)}
        a = tuple(sorted(index[c] for c in left[-1]))
        b = tuple(sorted(index[c] for c in right[-1]))
        pos = {c: i for i, c in enumerate(sub_cert.ordering)}
        mid = [tuple(sorted(po[i] for i in s)) for s in _ci_steps(pos, a, b)]
        steps = left + mid[1:] + right[::-1][1:]
    else:
        left = _undominate(inst, W, po, True)
        right = _undominate(inst, W2, po, True)
        steps = left + swap_walk(left[-1], right[-1]) + right[::-1][1:]
    return Path.build(inst, simplify(steps), pred).validate(W, W2)

"""Distance-1 neighbours of PAV, MES and GJCR outputs that keep EJR / EJR+."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..axioms import check, check_ejr_plus
from ..core import Instance, as_committee, swap
from ..rules import gjcr, mes, pav_exact
from .search import neighbors

ONLY_COMMITTEE = "not isolated: no other committee exists"
UNIQUE = "not isolated: no other committee satisfies the axiom"


@dataclass(frozen=True)
class Neighbor:
    """A committee at distance 1 and the argument that produced it.

    ``committee`` is ``None`` exactly when ``method`` is one of the
    vacuous outcomes ``ONLY_COMMITTEE`` or ``UNIQUE``.
    """

    committee: Optional[tuple]
    method: str

    def to_json(self) -> dict:
        return {
            "committee": None if self.committee is None else list(self.committee),
            "method": self.method,
        }


def _ok(inst: Instance, W, axiom: str) -> bool:
    return check(inst, W, axiom) is None


def _outside(inst: Instance, W: tuple) -> list:
    inside = set(W)
    return [c for c in range(inst.m) if c not in inside]


def _trivial(inst: Instance, W: tuple, axiom: str) -> Optional[Neighbor]:
    """The rule-independent cases, in the order they are tried."""
    if inst.m == inst.k:
        return Neighbor(None, ONLY_COMMITTEE)
    outside = _outside(inst, W)
    for c in W:
        rest = [d for d in W if d != c]
        if _ok(inst, rest, axiom):
            return Neighbor(swap(W, c, outside[0]), "redundant member")
    approved = [c for c in range(inst.m) if inst.support(c)]
    if len(approved) <= inst.k:
        for c in W:
            if not inst.support(c):
                return Neighbor(swap(W, c, outside[0]), "unapproved member")
        # W holds every approved candidate; swapping any member for an
        # unapproved one is as good as any other committee can be
        for c in W:
            cand = swap(W, c, outside[0])
            if _ok(inst, cand, axiom):
                return Neighbor(cand, "approved candidates exhausted")
        return Neighbor(None, UNIQUE)
    return None


def _pav_neighbor(inst: Instance, W: tuple) -> tuple:
    inside = set(W)
    star = next(c for c in range(inst.m) if c not in inside and inst.support(c))
    v_star = next(iter(inst.support(star)))
    c = next(d for d in W if inst.support(d) >> v_star & 1)
    rest = [d for d in W if d != c]
    wit = check_ejr_plus(inst, rest, exclude=[c])
    if wit is not None:
        return swap(W, c, wit.candidate)
    return swap(W, c, star)


def _budget_neighbor(inst: Instance, W: tuple, rule: str) -> tuple:
    out = mes(inst) if rule == "mes" else gjcr(inst)
    if out.committee != W:
        raise ValueError(f"committee {list(W)} is not the {rule} output")
    if len(out.core) < inst.k:
        extra = min(set(W) - set(out.core))
        return swap(W, extra, _outside(inst, W)[0])
    inside = set(W)
    for entry in reversed(out.trace):
        payers = entry["charges"].keys() if rule == "mes" else entry["voters"]
        found = [
            c
            for v in payers
            for c in inst.approvals[v]
            if c not in inside
        ]
        if found:
            return swap(W, entry["candidate"], min(found))
    raise AssertionError("no payer approves a candidate outside the committee")


def non_isolation_witness(inst: Instance, W, rule: str, axiom: str = "ejr+") -> Neighbor:
    """A committee at distance 1 from the rule output ``W`` satisfying ``axiom``.

    Trivial cases are dispatched first; otherwise the rule-specific swap is
    built and checked, with a scan of all neighbours as the last resort.
    """
    if axiom not in ("ejr", "ejr+"):
        raise ValueError("axiom must be 'ejr' or 'ejr+'")
    if rule not in ("pav", "mes", "gjcr"):
        raise ValueError("rule must be one of pav, mes, gjcr")
    W = as_committee(inst, W, inst.k)
    if rule == "pav" and W not in pav_exact(inst):
        raise ValueError(f"committee {list(W)} is not a PAV output")
    if not _ok(inst, W, axiom):
        raise ValueError(f"committee {list(W)} violates {axiom}")
    hit = _trivial(inst, W, axiom)
    if hit is not None:
        return hit
    if rule == "pav":
        cand, method = _pav_neighbor(inst, W), "pav swap"
    else:
        cand, method = _budget_neighbor(inst, W, rule), f"{rule} last payer swap"
    if _ok(inst, cand, axiom):
        return Neighbor(cand, method)
    for cand in neighbors(inst, W):
        if _ok(inst, cand, axiom):
            return Neighbor(cand, "neighbour scan")
    raise AssertionError(f"{rule} output {list(W)} is isolated in {axiom}")

"""JR paths between rule outputs, routed through affordable JR subcommittees.

A subcommittee is affordable when voters with budget ``k/n`` each can pay
one unit for every member.  Each supported rule's output is first linked to
a committee containing an affordable JR subcommittee; any two such
subcommittees are then linked by growing their intersection one candidate
at a time.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..axioms import check_jr
from ..core import Instance, as_committee, coverage
from ..rules import (
    PaymentSystem,
    ccav_exact,
    complete,
    is_affordable,
    pav_exact,
    run_rule,
)
from ._walk import swap_walk, walk_anchors
from .approx import Process, _scaled_marginals
from .search import Path, Predicate, simplify


class AffordableLink(NamedTuple):
    path: Path
    subcommittee: tuple
    payments: PaymentSystem


def _covers_enough(inst: Instance, W) -> bool:
    """``|N_W| >= (|W| - 1) * n / k``."""
    return len(coverage(inst, W)) * inst.k >= (len(W) - 1) * inst.n


def jr_repair_process(inst: Instance, start, removals, *, bound=None) -> Process:
    """Remove ``removals`` in order; after each, add the smallest JR witness
    candidate until JR holds.  ``bound(i, added)`` may assert invariants."""
    current = set(start)
    anchors = [tuple(sorted(current))]
    added: list[int] = []
    for i, c in enumerate(removals, 1):
        current.discard(c)
        while (wit := check_jr(inst, current)) is not None:
            current.add(wit.candidate)
            added.append(wit.candidate)
        if len(current) > inst.k:
            raise AssertionError("repair process exceeded the committee size")
        if bound is not None:
            bound(i, len(added))
        anchors.append(tuple(sorted(current)))
    return Process(list(removals), added, anchors)


def maximal_affordable(inst: Instance, W, X) -> tuple:
    """An inclusion-maximal affordable ``X*`` with ``X <= X* <= W``."""
    best = set(X)
    if is_affordable(inst, best) is None:
        raise ValueError("the seed set is not affordable")
    for c in sorted(set(W) - best):
        if is_affordable(inst, best | {c}) is not None:
            best.add(c)
    return tuple(sorted(best))


def extension_process(inst: Instance, W, X) -> Process:
    """Trade the non-affordable part of ``W`` for JR witnesses.

    ``W`` must satisfy JR and ``|N_W| >= (|W|-1) n/k``; ``X <= W`` must be
    affordable.  The final anchor is an affordable JR subcommittee
    containing ``X``.
    """
    W = tuple(sorted(W))
    if check_jr(inst, W) is not None:
        raise AssertionError("extension start violates JR")
    if not _covers_enough(inst, W):
        raise AssertionError("extension start covers too few voters")
    core = maximal_affordable(inst, W, X)
    removals = sorted(set(W) - set(core))

    def bound(i, added):
        if added > inst.k - len(W) + i:
            raise AssertionError(f"{added} witnesses after {i} removals")

    proc = jr_repair_process(inst, W, removals, bound=bound)
    if is_affordable(inst, proc.final) is None:
        raise AssertionError("extension did not end affordable")
    return proc


def _walk_process(steps: list, proc: Process) -> None:
    """Append unit moves from ``steps[-1]`` through the anchors of ``proc``."""
    X = steps[-1]
    extra = sorted(set(X) - set(proc.anchors[0]))
    rank = {c: i for i, c in enumerate(extra + list(proc.removed))}
    steps.extend(walk_anchors(X, proc.anchors, rank))


def _certify(inst: Instance, sub) -> PaymentSystem:
    pay = is_affordable(inst, sub)
    if pay is None:
        raise AssertionError(f"subcommittee {list(sub)} is not affordable")
    if check_jr(inst, sub) is not None:
        raise AssertionError(f"subcommittee {list(sub)} violates JR")
    return pay


def connect_affordable(inst: Instance, Waff, Waff2, start=None, end=None) -> Path:
    """JR path between committees containing two affordable JR subcommittees.

    ``start`` and ``end`` default to the smallest-index completions of
    ``Waff`` and ``Waff2``.
    """
    A = set(as_committee(inst, Waff))
    B = set(as_committee(inst, Waff2))
    for sub in (A, B):
        if is_affordable(inst, sub) is None or check_jr(inst, sub) is not None:
            raise ValueError(f"subcommittee {sorted(sub)} is not an affordable JR subcommittee")
    start = as_committee(inst, complete(inst, A) if start is None else start, inst.k)
    end = as_committee(inst, complete(inst, B) if end is None else end, inst.k)
    if not A <= set(start) or not B <= set(end):
        raise ValueError("path endpoints must contain their subcommittees")
    steps = [start]
    k = inst.k
    while not (A <= B or B <= A):
        X = A & B
        c2 = min(B - X)
        if len(A) < k:
            Wn = A | {c2}
            cur = set(steps[-1])
            if c2 not in cur:
                cur.remove(min(cur - A))
                cur.add(c2)
                steps.append(tuple(sorted(cur)))
        else:
            Wn = _eject(inst, A, X, c2)
            steps.append(tuple(sorted(Wn)))
        proc = extension_process(inst, Wn, X | {c2})
        _walk_process(steps, proc)
        A = set(proc.final)
    steps.extend(swap_walk(steps[-1], end))
    return Path.build(inst, simplify(steps), Predicate.jr()).validate(start, end)


def _eject(inst: Instance, A: set, X: set, c2: int) -> set:
    """Swap ``c2`` into the full-size ``A`` for the member of ``A - X`` that
    is the sole representative (within ``A - X``) of the fewest voters
    outside ``N(X + c2)``."""
    pool = sorted(A - X)
    outside = int(coverage(inst, A)) & ~int(coverage(inst, X | {c2}))
    sole = {}
    for c in pool:
        others = 0
        for d in pool:
            if d != c:
                others |= int(inst.support(d))
        sole[c] = (int(inst.support(c)) & outside & ~others).bit_count()
    c = min(pool, key=lambda x: (sole[x], x))
    if sole[c] * inst.k >= inst.n:
        raise AssertionError("no candidate to eject")
    return (A - {c}) | {c2}


# -- rule outputs to affordable subcommittees --------------------------------


def _unique_order(inst: Instance, W) -> tuple[list, list]:
    """Greedy order by fewest uniquely covered voters, with those counts."""
    rest = list(W)
    order, uniq = [], []
    while rest:
        best, best_u = None, None
        for c in rest:
            others = 0
            for d in rest:
                if d != c:
                    others |= int(inst.support(d))
            u = (int(inst.support(c)) & ~others).bit_count()
            if best_u is None or u < best_u:
                best, best_u = c, u
        rest.remove(best)
        order.append(best)
        uniq.append(best_u)
    return order, uniq


def _check_membership(inst: Instance, W: tuple, rule: str) -> None:
    if rule in ("pav", "ccav"):
        winners = pav_exact(inst) if rule == "pav" else ccav_exact(inst)
        ok = W in winners
    else:
        ok = run_rule(inst, rule).committee == W
    if not ok:
        raise ValueError(f"committee {list(W)} is not a {rule} output")


def connect_to_affordable_jr(inst: Instance, W, rule: str) -> AffordableLink:
    """JR path from a rule output to a committee holding an affordable JR
    subcommittee, with that subcommittee and a payment certificate."""
    W = as_committee(inst, W, inst.k)
    _check_membership(inst, W, rule)
    n, k = inst.n, inst.k
    steps = [W]
    if rule in ("mes", "gjcr", "greedyejr"):
        sub = run_rule(inst, rule).core
    elif rule == "seqphragmen":
        out = run_rule(inst, rule)
        sub = tuple(sorted(t["candidate"] for t in out.trace if t["time"] * n <= k))
    elif rule == "seqccav":
        out = run_rule(inst, rule)
        sub = tuple(sorted(t["candidate"] for t in out.trace if t["gain"] * k >= n))
    elif rule == "ccav":
        order, uniq = _unique_order(inst, W)
        if uniq[0] * k >= n:
            sub = W
        else:
            s = max(i for i, u in enumerate(uniq, 1) if u * k < n)

            def bound(i, added):
                if added > i - 1:
                    raise AssertionError(f"{added} witnesses after {i} removals")

            proc = jr_repair_process(inst, W, order[:s], bound=bound)
            _walk_process(steps, proc)
            sub = proc.final
    elif rule == "pav":
        sub = _pav_to_affordable(inst, W, steps)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    pay = _certify(inst, sub)
    path = Path.build(inst, simplify(steps), Predicate.jr()).validate(start=W)
    if not set(sub) <= set(path.end):
        raise AssertionError("path does not end above the affordable subcommittee")
    return AffordableLink(path, tuple(sorted(sub)), pay)


def _pav_to_affordable(inst: Instance, W: tuple, steps: list) -> tuple:
    n, k = inst.n, inst.k
    start = W
    if not _covers_enough(inst, W):
        L = math.lcm(*range(1, k + 1))
        rest = list(W)
        order = []
        while True:
            marg = _scaled_marginals(inst, rest, L)
            c = min(rest, key=lambda x: (marg[x], x))
            if marg[c] * k >= n * L:
                raise AssertionError("removed candidate has marginal contribution >= n/k")
            rest.remove(c)
            order.append(c)
            i = len(order)
            if len(coverage(inst, rest)) * k >= (k - i - 1) * n:
                break

        def bound(i, added):
            if added >= i:
                raise AssertionError(f"{added} witnesses after {i} removals")

        proc = jr_repair_process(inst, W, order, bound=bound)
        _walk_process(steps, proc)
        start = proc.final
    proc = extension_process(inst, start, ())
    _walk_process(steps, proc)
    return proc.final


def connect_rule_outputs(inst: Instance, W, rule: str, W2, rule2: str) -> Path:
    """JR path between an output of ``rule`` and an output of ``rule2``."""
    left = connect_to_affordable_jr(inst, W, rule)
    right = connect_to_affordable_jr(inst, W2, rule2)
    mid = connect_affordable(inst, left.subcommittee, right.subcommittee, left.path.end, right.path.end)
    steps = left.path.steps + mid.steps[1:] + right.path.steps[::-1][1:]
    return Path.build(inst, simplify(steps), Predicate.jr()).validate(W, W2)

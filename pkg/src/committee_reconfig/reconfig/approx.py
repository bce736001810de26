"""Paths between JR (resp. EJR) committees inside 2-JR (resp. 4-EJR)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .. import _kernels as K
from ..axioms import _search_common, check_ejr, check_jr
from ..core import Instance, as_committee, coverage
from ._walk import swap_walk, walk_anchors
from .search import Path, Predicate, simplify


def removal_order(inst: Instance, W) -> list[int]:
    """Greedy order: each removal loses the fewest covered voters.

    Every prefix obeys ``|N(W - {c_1..c_s})| >= |N(W)| - s*n/k``; this is
    asserted.
    """
    rest = list(as_committee(inst, W))
    supports = {c: int(inst.support(c)) for c in rest}
    covered = coverage(inst, rest)
    base = len(covered)
    order = []
    while rest:
        best, best_loss = None, None
        for c in rest:
            others = 0
            for d in rest:
                if d != c:
                    others |= supports[d]
            loss = (supports[c] & ~others).bit_count()
            if best_loss is None or loss < best_loss:
                best, best_loss = c, loss
        rest.remove(best)
        order.append(best)
        covered_now = 0
        for d in rest:
            covered_now |= supports[d]
        s = len(order)
        if covered_now.bit_count() * inst.k < base * inst.k - s * inst.n:
            raise AssertionError(f"removal order breaks the coverage bound at step {s}")
    return order


@dataclass
class Process:
    """States of a remove-then-repair process.

    ``anchors[i]`` is the subcommittee after the i-th removal and all its
    repairs; ``removed`` and ``added`` list the moves in order.
    """

    removed: list
    added: list
    anchors: list

    @property
    def final(self) -> tuple:
        return self.anchors[-1]


def two_jr_process(inst: Instance, W) -> Process:
    """Remove along ``removal_order``; after each removal add the smallest
    2-JR witness candidate until 2-JR holds again."""
    order = removal_order(inst, W)
    current = set(W)
    anchors = [tuple(sorted(current))]
    added: list[int] = []
    for s, c in enumerate(order, 1):
        current.discard(c)
        while (wit := check_jr(inst, current, 2)) is not None:
            current.add(wit.candidate)
            added.append(wit.candidate)
        if len(added) > s - 1:
            raise AssertionError(f"{len(added)} witnesses added after {s} removals")
        anchors.append(tuple(sorted(current)))
    return Process(order, added, anchors)


def _bridge_two_jr(X1: tuple, X2: tuple, G1: set, G2: set) -> list[tuple]:
    """Unit moves from ``X1 >= G1`` to ``X2 >= G2``, each containing G1 or G2."""
    S1, S2 = set(X1), set(X2)
    D1, D2 = S1 - S2, S2 - S1
    lead = sorted(D1 - G1)
    need = sorted(G2 & D2)
    out = []
    if len(need) <= len(lead) + 1:
        adds = need + sorted(D2 - G2)
        rems = lead + sorted(D1 & G1)
        X = set(S1)
        for a, r in zip(adds, rems):
            X.remove(r)
            X.add(a)
            out.append(tuple(sorted(X)))
        return out
    spare = lead + sorted((S1 & S2) - G1 - G2)
    X = set(S1)
    for a, r in zip(need, spare):
        X.remove(r)
        X.add(a)
        out.append(tuple(sorted(X)))
    return out + swap_walk(X, S2)


def connect_two_jr(inst: Instance, W, W2) -> Path:
    """Path of length at most ``2k`` from ``W`` to ``W2`` inside 2-JR."""
    W = as_committee(inst, W, inst.k)
    W2 = as_committee(inst, W2, inst.k)
    pred = Predicate.jr(2)
    for end in (W, W2):
        wit = check_jr(inst, end)
        if wit is not None:
            raise ValueError(f"committee {list(end)} violates JR")
    if W == W2:
        return Path.build(inst, [W], pred)
    sides = []
    for start in (W, W2):
        proc = two_jr_process(inst, start)
        rank = {c: i for i, c in enumerate(proc.removed)}
        steps = [start] + walk_anchors(start, proc.anchors, rank)
        sides.append((steps, set(proc.final)))
    (left, G1), (right, G2) = sides
    if 2 * len(G1) > inst.k or 2 * len(G2) > inst.k:
        raise AssertionError("2-JR greedy subcommittee larger than k/2")
    mid = _bridge_two_jr(left[-1], right[-1], G1, G2)
    steps = simplify(left + mid + right[::-1][1:])
    path = Path.build(inst, steps, pred).validate(W, W2)
    if len(path) > 2 * inst.k:
        raise AssertionError(f"2-JR path of length {len(path)} exceeds 2k")
    return path


# -- 4-EJR -------------------------------------------------------------------


def _scaled_marginals(inst: Instance, rest: list, L: int) -> dict:
    """``L * Delta`` for each member of ``rest`` (a subset of the start
    committee, so every supporter counts)."""
    counts = K.backend.approval_counts(inst.words, np.asarray(rest, dtype=np.int64), inst.n)
    share = np.zeros(inst.n, dtype=object)
    nz = counts > 0
    share[nz] = [L // int(x) for x in counts[nz]]
    out = {}
    for c in rest:
        flags = np.unpackbits(inst.words[c].view(np.uint8), bitorder="little")[: inst.n].astype(bool)
        out[c] = int(share[flags].sum()) if flags.any() else 0
    return out


def pav_removal_order(inst: Instance, W, r: int) -> list[int]:
    """First ``r`` removals, each of minimum modified-PAV marginal."""
    L = math.lcm(*range(1, inst.k + 1))
    rest = list(W)
    order = []
    for _ in range(r):
        marg = _scaled_marginals(inst, rest, L)
        best = min(rest, key=lambda c: (marg[c], c))
        rest.remove(best)
        order.append(best)
    return order


def four_ejr_process(inst: Instance, W) -> Process:
    r = (2 * inst.k) // 3
    order = pav_removal_order(inst, W, r)
    current = set(W)
    anchors = [tuple(sorted(current))]
    added: list[int] = []
    for i, c in enumerate(order, 1):
        current.discard(c)
        while (wit := check_ejr(inst, current, 4)) is not None:
            d = min(set(wit.common) - current)
            current.add(d)
            added.append(d)
            if len(added) > i:
                raise AssertionError(f"{len(added)} additions after {i} removals")
        anchors.append(tuple(sorted(current)))
    return Process(order, added, anchors)


def four_ejr_core(inst: Instance) -> tuple:
    """A subcommittee of size at most ``k // 4`` satisfying 4-EJR.

    Greedy: while some ``ell`` candidates are commonly approved by at least
    ``4*ell*n/k`` remaining voters, take the largest such ``ell`` (first
    ``T`` in index order), add ``T`` and retire those voters.  The result is
    checked; exhaustive search over small subcommittees is the fallback.
    """
    n, k = inst.n, inst.k
    size = k // 4
    nw = inst.words.shape[1]
    remaining = np.ones(n, dtype=bool)
    E: list[int] = []
    while True:
        allowed = K.bools_to_words(remaining, nw)
        found = None
        for ell in range(k, 0, -1):
            if 4 * ell * n > n * k:
                continue
            found = _search_common(inst, ell, allowed, k, 4 * ell * n)
            if found is not None:
                break
        if found is None:
            break
        T, group = found
        E.extend(c for c in T if c not in E)
        for v in group:
            remaining[v] = False
    E = tuple(sorted(E))
    if len(E) <= size and check_ejr(inst, E, 4) is None:
        return E
    for s in range(size + 1):
        for cand in combinations(range(inst.m), s):
            if check_ejr(inst, cand, 4) is None:
                return cand
    raise RuntimeError(f"no 4-EJR subcommittee of size {size} exists")


def connect_ejr_4approx(inst: Instance, W, W2) -> Path:
    """Path from ``W`` to ``W2`` (both EJR) inside 4-EJR."""
    W = as_committee(inst, W, inst.k)
    W2 = as_committee(inst, W2, inst.k)
    pred = Predicate.ejr(4)
    for end in (W, W2):
        if check_ejr(inst, end) is not None:
            raise ValueError(f"committee {list(end)} violates EJR")
    if W == W2:
        return Path.build(inst, [W], pred)
    E = four_ejr_core(inst)
    sides = []
    for start in (W, W2):
        proc = four_ejr_process(inst, start)
        rank = {c: i for i, c in enumerate(proc.removed)}
        steps = [start] + walk_anchors(start, proc.anchors + [E], rank)
        sides.append(steps)
    left, right = sides
    mid = swap_walk(left[-1], right[-1])
    steps = simplify(left + mid + right[::-1][1:])
    return Path.build(inst, steps, pred).validate(W, W2)

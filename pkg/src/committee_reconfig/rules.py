"""Approval-based multiwinner rules and the affordability certificate.

All ties are broken toward the smallest candidate index.  Rules that may
stop short of ``k`` candidates (GJCR, MES, GreedyEJR) are completed by
appending unselected candidates in increasing index order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from . import _kernels as K
from .axioms import _search_common, check_ejr
from .core import Instance, VoterSet, fraction_str, iter_bits

EXHAUSTIVE_LIMIT = 10**7
_CHUNK = 20000


class TooLarge(ValueError):
    """Exhaustive enumeration refused by the size guard."""


@dataclass
class PaymentSystem:
    """Sparse payments ``(voter, candidate) -> Fraction``."""

    payments: dict = field(default_factory=dict)

    def voter_total(self, v: int) -> Fraction:
        return sum((p for (u, _), p in self.payments.items() if u == v), Fraction(0))

    def candidate_total(self, c: int) -> Fraction:
        return sum((p for (_, d), p in self.payments.items() if d == c), Fraction(0))

    def violations(self, inst: Instance, W: Iterable[int]) -> list[str]:
        """Reasons why this is not an affordability certificate for ``W``."""
        problems = []
        W = set(W)
        budget = Fraction(inst.k, inst.n)
        per_voter: dict = {}
        per_cand = {c: Fraction(0) for c in W}
        for (v, c), p in self.payments.items():
            if p < 0:
                problems.append(f"negative payment by voter {v} for {c}")
            if p > 0 and not (inst.support(c) >> v & 1):
                problems.append(f"voter {v} pays for unapproved candidate {c}")
            if c not in W:
                if p > 0:
                    problems.append(f"payment for candidate {c} outside the committee")
                continue
            per_voter[v] = per_voter.get(v, Fraction(0)) + p
            per_cand[c] += p
        for v, tot in per_voter.items():
            if tot > budget:
                problems.append(f"voter {v} spends {tot} > {budget}")
        for c, tot in per_cand.items():
            if tot != 1:
                problems.append(f"candidate {c} receives {tot} != 1")
        return problems

    def to_json(self) -> list:
        return [
            {"voter": v, "candidate": c, "amount": fraction_str(p)}
            for (v, c), p in sorted(self.payments.items())
            if p
        ]


@dataclass
class RuleOutput:
    rule: str
    committee: tuple
    core: tuple
    payments: Optional[PaymentSystem] = None
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "committee": list(self.committee),
            "core": list(self.core),
            "payments": None if self.payments is None else self.payments.to_json(),
            "trace": [_trace_json(t) for t in self.trace],
        }


def _trace_json(entry: dict) -> dict:
    out = {}
    for key, val in entry.items():
        if isinstance(val, Fraction):
            out[key] = fraction_str(val)
        elif isinstance(val, dict):
            out[key] = {str(k): fraction_str(v) for k, v in sorted(val.items())}
        else:
            out[key] = val
    return out


def complete(inst: Instance, core: Iterable[int]) -> tuple:
    """Extend ``core`` to size ``k`` with the smallest unselected indices."""
    chosen = set(core)
    if len(chosen) > inst.k:
        raise ValueError("core larger than k")
    c = 0
    while len(chosen) < inst.k:
        if c not in chosen:
            chosen.add(c)
        c += 1
    return tuple(sorted(chosen))


def _payments_from(charges: dict) -> PaymentSystem:
    return PaymentSystem({key: val for key, val in charges.items() if val})


# -- GJCR -------------------------------------------------------------------


def gjcr(inst: Instance) -> RuleOutput:
    n, k = inst.n, inst.k
    supports = inst.support_masks
    W: list[int] = []
    in_w = [False] * inst.m
    counts = [0] * n
    trace: list = []
    charges: dict = {}
    for ell in range(k, 0, -1):
        while True:
            below = 0
            for v in range(n):
                if counts[v] < ell:
                    below |= 1 << v
            best, best_size, best_group = -1, -1, 0
            for c in range(inst.m):
                if in_w[c]:
                    continue
                group = supports[c] & below
                size = group.bit_count()
                if size * k >= ell * n and size > best_size:
                    best, best_size, best_group = c, size, group
            if best < 0:
                break
            W.append(best)
            in_w[best] = True
            share = Fraction(1, best_size)
            for v in iter_bits(best_group):
                charges[(v, best)] = share
            for v in iter_bits(supports[best]):
                counts[v] += 1
            trace.append({"candidate": best, "ell": ell, "voters": VoterSet(best_group).tolist(), "price": share})
    if len(W) > k:
        raise AssertionError("GJCR selected more than k candidates")
    core = tuple(sorted(W))
    return RuleOutput("gjcr", complete(inst, core), core, _payments_from(charges), trace)


# -- MES --------------------------------------------------------------------


def _q_hat(budgets: list) -> Optional[Fraction]:
    """Smallest q with ``sum(min(b, q)) >= 1`` or ``None`` if unfundable."""
    bs = sorted(budgets)
    if sum(bs, Fraction(0)) < 1:
        return None
    paid = Fraction(0)
    s = len(bs)
    for j, b in enumerate(bs):
        q = (1 - paid) / (s - j)
        if q <= b:
            return q
        paid += b
    return None  # pragma: no cover - excluded by the sum test


def mes(inst: Instance) -> RuleOutput:
    n, k = inst.n, inst.k
    supports = inst.support_masks
    budget = [Fraction(k, n)] * n
    W: list[int] = []
    in_w = [False] * inst.m
    trace: list = []
    charges: dict = {}
    while True:
        best, best_q = -1, None
        for c in range(inst.m):
            if in_w[c]:
                continue
            q = _q_hat([budget[v] for v in iter_bits(supports[c])])
            if q is not None and (best_q is None or q < best_q):
                best, best_q = c, q
        if best < 0:
            break
        W.append(best)
        in_w[best] = True
        paid = {}
        for v in iter_bits(supports[best]):
            p = min(budget[v], best_q)
            if p:
                budget[v] -= p
                paid[v] = p
                charges[(v, best)] = p
        trace.append({"candidate": best, "q": best_q, "charges": paid})
    if len(W) > k:
        raise AssertionError("MES selected more than k candidates")
    core = tuple(sorted(W))
    return RuleOutput("mes", complete(inst, core), core, _payments_from(charges), trace)


# -- PAV / CCAV -------------------------------------------------------------


def _lcm_upto(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out = out * i // math.gcd(out, i)
    return out


def harmonic(x: int) -> Fraction:
    return sum((Fraction(1, y) for y in range(1, x + 1)), Fraction(0))


def pav_score(inst: Instance, W: Iterable[int]) -> Fraction:
    W = set(W)
    total = Fraction(0)
    for b in inst.ballot_masks:
        total += harmonic(sum(1 for c in iter_bits(b) if c in W))
    return total


def pav_marginal(inst: Instance, W: Iterable[int], c: int) -> Fraction:
    """``PAV(W) - PAV(W - {c})`` for ``c`` in ``W``."""
    W = set(W)
    total = Fraction(0)
    for v in iter_bits(inst.support(c)):
        x = sum(1 for d in iter_bits(inst.ballot_masks[v]) if d in W)
        total += Fraction(1, x)
    return total


def cc_score(inst: Instance, W: Iterable[int]) -> int:
    mask = 0
    for c in W:
        mask |= inst.support(c)
    return mask.bit_count()


def _guard(inst: Instance) -> int:
    total = math.comb(inst.m, inst.k)
    if total > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"C({inst.m},{inst.k}) = {total} exceeds {EXHAUSTIVE_LIMIT}")
    return total


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COMMITTEE_RECONFIG_THREADS", "1")))
    except ValueError:
        return 1


def _exhaustive_argmax(inst: Instance, weights: np.ndarray) -> list:
    """All k-subsets maximizing ``sum_v weights[|A_v & W|]`` (integer weights)."""
    _guard(inst)
    incidence = np.zeros((inst.n, inst.m), dtype=np.int8)
    for v, b in enumerate(inst.ballot_masks):
        for c in iter_bits(b):
            incidence[v, c] = 1

    def score_block(block: np.ndarray):
        counts = incidence[:, block].sum(axis=2, dtype=np.int64)  # (n, chunk)
        scores = weights[counts].sum(axis=0)
        top = scores.max()
        return top, block[scores == top]

    def blocks():
        it = combinations(range(inst.m), inst.k)
        while True:
            chunk = list(islice(it, _CHUNK))
            if not chunk:
                return
            yield np.asarray(chunk, dtype=np.int64)

    best, winners = None, []
    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(score_block, blocks()))
    else:
        results = map(score_block, blocks())
    for top, rows in results:
        if best is None or top > best:
            best, winners = top, [tuple(int(c) for c in r) for r in rows]
        elif top == best:
            winners.extend(tuple(int(c) for c in r) for r in rows)
    return sorted(winners)


def pav_exact(inst: Instance) -> list:
    """Every committee of maximum PAV score, lexicographically sorted."""
    scale = _lcm_upto(inst.k)
    weights = np.array([scale * harmonic(x) for x in range(inst.k + 1)], dtype=object)
    weights = np.array([int(w) for w in weights], dtype=np.int64)
    return _exhaustive_argmax(inst, weights)


def ccav_exact(inst: Instance) -> list:
    """Every committee of maximum Chamberlin-Courant score."""
    weights = np.array([0] + [1] * inst.k, dtype=np.int64)
    return _exhaustive_argmax(inst, weights)


def seq_ccav(inst: Instance) -> RuleOutput:
    supports = inst.support_masks
    covered = 0
    W: list[int] = []
    in_w = [False] * inst.m
    trace = []
    for _ in range(inst.k):
        best, gain = -1, -1
        for c in range(inst.m):
            if in_w[c]:
                continue
            g = (supports[c] & ~covered).bit_count()
            if g > gain:
                best, gain = c, g
        W.append(best)
        in_w[best] = True
        covered |= supports[best]
        trace.append({"candidate": best, "gain": gain})
    committee = tuple(sorted(W))
    return RuleOutput("seqccav", committee, committee, None, trace)


# -- GreedyEJR --------------------------------------------------------------


def greedy_ejr(inst: Instance) -> RuleOutput:
    """GreedyEJR with lexicographic group selection.

    While the current subcommittee violates EJR, take the largest ``ell``
    for which some ``ell``-subset ``T`` of candidates is commonly approved
    by an ``ell``-large set of remaining voters; use the lexicographically
    first such ``T`` and its full common support among remaining voters,
    add ``T`` and remove those voters.
    """
    n, k = inst.n, inst.k
    nw = inst.words.shape[1]
    remaining = np.ones(n, dtype=bool)
    W: list[int] = []
    trace = []
    while check_ejr(inst, W) is not None:
        allowed = K.bools_to_words(remaining, nw)
        found = None
        for ell in range(k, 0, -1):
            found = _search_common(inst, ell, allowed, k, ell * n)
            if found is not None:
                break
        if found is None:  # pragma: no cover - an EJR violation implies a group
            raise AssertionError("EJR violated but no cohesive group among remaining voters")
        T, group = found
        added = [c for c in T if c not in W]
        W.extend(added)
        for v in group:
            remaining[v] = False
        trace.append({"ell": ell, "candidates": list(T), "voters": group.tolist()})
    if len(W) > k:
        raise AssertionError("GreedyEJR selected more than k candidates")
    core = tuple(sorted(W))
    return RuleOutput("greedyejr", complete(inst, core), core, None, trace)


# -- seqPhragmen ------------------------------------------------------------


def seq_phragmen(inst: Instance) -> RuleOutput:
    """Continuous-time Phragmen with exact purchase times.

    A voter's budget is the time elapsed since its last reset.  Candidate
    ``c`` becomes affordable at ``(1 + sum of reset times over N_c) / |N_c|``.
    """
    supports = inst.support_masks
    reset = [Fraction(0)] * inst.n
    W: list[int] = []
    in_w = [False] * inst.m
    trace = []
    charges: dict = {}
    now = Fraction(0)
    while len(W) < inst.k:
        best, best_t = -1, None
        for c in range(inst.m):
            if in_w[c] or not supports[c]:
                continue
            voters = list(iter_bits(supports[c]))
            t = (1 + sum(reset[v] for v in voters)) / len(voters)
            if best_t is None or t < best_t:
                best, best_t = c, t
        if best < 0:
            break
        now = best_t
        paid = {}
        for v in iter_bits(supports[best]):
            p = now - reset[v]
            if p:
                paid[v] = p
                charges[(v, best)] = p
            reset[v] = now
        W.append(best)
        in_w[best] = True
        trace.append({"candidate": best, "time": now, "charges": paid})
    core = tuple(sorted(W))
    return RuleOutput("seqphragmen", complete(inst, core), core, _payments_from(charges), trace)


# -- affordability ----------------------------------------------------------


def is_affordable(inst: Instance, W: Iterable[int]) -> Optional[PaymentSystem]:
    """Payments certifying that ``W`` is affordable, or ``None``.

    Integral max-flow in units of ``1/n``: source->voter capacity ``k``,
    voter->approved member capacity ``n``, member->sink capacity ``n``.
    """
    W = sorted(set(W))
    if not W:
        return PaymentSystem({})
    n, k = inst.n, inst.k
    src, sink = 0, n + len(W) + 1
    rows, cols, caps = [], [], []
    involved = 0
    for j, c in enumerate(W):
        supp = inst.support(c)
        involved |= supp
        for v in iter_bits(supp):
            rows.append(1 + v)
            cols.append(1 + n + j)
            caps.append(n)
        rows.append(1 + n + j)
        cols.append(sink)
        caps.append(n)
    for v in iter_bits(involved):
        rows.append(src)
        cols.append(1 + v)
        caps.append(k)
    size = sink + 1
    graph = csr_matrix((np.asarray(caps, dtype=np.int32), (rows, cols)), shape=(size, size))
    res = maximum_flow(graph, src, sink)
    if res.flow_value != len(W) * n:
        return None
    flow = res.flow.tocoo()
    payments = {}
    for a, b, f in zip(flow.row, flow.col, flow.data):
        if f > 0 and 1 <= a <= n and n < b < sink:
            payments[(int(a) - 1, W[int(b) - n - 1])] = Fraction(int(f), n)
    return PaymentSystem(payments)


# -- dispatch ---------------------------------------------------------------

RULES = ("gjcr", "mes", "pav", "ccav", "seqccav", "greedyejr", "seqphragmen")


def run_rule(inst: Instance, name: str) -> RuleOutput:
    """Run a rule by name; for the exhaustive rules the lexicographically
    first optimal committee is reported and ``trace`` lists all optima."""
    if name == "gjcr":
        return gjcr(inst)
    if name == "mes":
        return mes(inst)
    if name == "seqccav":
        return seq_ccav(inst)
    if name == "greedyejr":
        return greedy_ejr(inst)
    if name == "seqphragmen":
        return seq_phragmen(inst)
    if name in ("pav", "ccav"):
        winners = pav_exact(inst) if name == "pav" else ccav_exact(inst)
        first = winners[0]
        return RuleOutput(name, first, first, None, [{"optimum": list(w)} for w in winners])
    raise ValueError(f"unknown rule {name!r}; choose from {', '.join(RULES)}")

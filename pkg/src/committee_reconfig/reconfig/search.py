"""Predicates over committees, validated paths, exact BFS and isolation radii."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional, Sequence

from ..axioms import as_alpha, check_ejr, check_ejr_plus, check_jr
from ..core import Instance, as_committee, distance, fraction_str

NOT_ISOLATED = "not isolated"


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the search could finish."""


class PathError(AssertionError):
    """A path failed validation."""


class Predicate:
    """A pure test on committees of one instance.

    ``evaluate`` returns ``(ok, evidence)`` where evidence is a JSON-ready
    witness (or ``None``).  Use the constructors ``jr``, ``ejr``, ``ejr_plus``,
    ``in_rule_choice_set`` and ``custom``.
    """

    def __init__(self, kind: str, alpha=1, rule: str | None = None, test: Callable | None = None, name: str = ""):
        self.kind = kind
        self.alpha = as_alpha(alpha)
        self.rule = rule
        self._test = test
        self._name = name
        self._choice: dict = {}

    @classmethod
    def jr(cls, alpha=1) -> "Predicate":
        return cls("jr", alpha)

    @classmethod
    def ejr(cls, alpha=1) -> "Predicate":
        return cls("ejr", alpha)

    @classmethod
    def ejr_plus(cls) -> "Predicate":
        return cls("ejr+")

    @classmethod
    def in_rule_choice_set(cls, rule: str) -> "Predicate":
        return cls("rule", rule=rule)

    @classmethod
    def custom(cls, test: Callable[[Instance, tuple], bool], name: str = "custom") -> "Predicate":
        return cls("custom", test=test, name=name)

    @property
    def label(self) -> str:
        if self.kind in ("jr", "ejr"):
            return self.kind if self.alpha == 1 else f"{fraction_str(self.alpha)}-{self.kind}"
        if self.kind == "rule":
            return f"rule:{self.rule}"
        if self.kind == "custom":
            return self._name
        return self.kind

    def _choice_set(self, inst: Instance) -> frozenset:
        key = id(inst)
        if key not in self._choice:
            from ..rules import ccav_exact, pav_exact, run_rule

            if self.rule == "pav":
                winners = pav_exact(inst)
            elif self.rule == "ccav":
                winners = ccav_exact(inst)
            else:
                winners = [run_rule(inst, self.rule).committee]
            self._choice[key] = (inst, frozenset(winners))
        return self._choice[key][1]

    def evaluate(self, inst: Instance, W: Sequence[int]) -> tuple[bool, Optional[dict]]:
        W = tuple(W)
        if self.kind == "jr":
            wit = check_jr(inst, W, self.alpha)
        elif self.kind == "ejr":
            wit = check_ejr(inst, W, self.alpha)
        elif self.kind == "ejr+":
            wit = check_ejr_plus(inst, W)
        elif self.kind == "rule":
            return tuple(sorted(W)) in self._choice_set(inst), None
        else:
            return bool(self._test(inst, W)), None
        return wit is None, None if wit is None else wit.to_json()

    def __call__(self, inst: Instance, W: Sequence[int]) -> bool:
        return self.evaluate(inst, W)[0]

    def __repr__(self) -> str:
        return f"Predicate({self.label})"


class PredicateCache:
    """Memoizes ``pred(inst, W)`` by sorted committee tuple."""

    def __init__(self, inst: Instance, pred: Predicate):
        self.inst, self.pred = inst, pred
        self.memo: dict = {}

    def __call__(self, W: tuple) -> bool:
        hit = self.memo.get(W)
        if hit is None:
            hit = self.memo[W] = self.pred(self.inst, W)
        return hit


@dataclass
class Path:
    """A committee sequence with one predicate record per step."""

    steps: list
    predicate: str
    log: list = field(default_factory=list)

    @classmethod
    def build(cls, inst: Instance, steps: Iterable[Sequence[int]], pred: Predicate) -> "Path":
        steps = [tuple(sorted(s)) for s in steps]
        log = []
        for s in steps:
            ok, wit = pred.evaluate(inst, s)
            log.append({"committee": list(s), "ok": ok, "witness": wit})
        return cls(steps, pred.label, log)

    def __len__(self) -> int:
        """Number of unit moves."""
        return max(0, len(self.steps) - 1)

    @property
    def start(self) -> tuple:
        return self.steps[0]

    @property
    def end(self) -> tuple:
        return self.steps[-1]

    def problems(self, start: Sequence[int] | None = None, end: Sequence[int] | None = None) -> list[str]:
        out = []
        if not self.steps:
            return ["empty path"]
        if start is not None and self.steps[0] != tuple(sorted(start)):
            out.append("path does not begin at the requested committee")
        if end is not None and self.steps[-1] != tuple(sorted(end)):
            out.append("path does not end at the requested committee")
        for i in range(len(self.steps) - 1):
            if distance(self.steps[i], self.steps[i + 1]) != 1:
                out.append(f"steps {i} and {i + 1} are not at distance 1")
        for i, rec in enumerate(self.log):
            if not rec["ok"]:
                out.append(f"step {i} fails {self.predicate}")
        if len(self.log) != len(self.steps):
            out.append("log length differs from step count")
        return out

    def validate(self, start=None, end=None) -> "Path":
        bad = self.problems(start, end)
        if bad:
            raise PathError("; ".join(bad))
        return self

    def to_json(self) -> dict:
        return {"predicate": self.predicate, "length": len(self), "steps": self.log}


def simplify(steps: list) -> list:
    """Drop cycles: whenever a committee repeats, cut the loop between."""
    out: list = []
    seen: dict = {}
    for s in steps:
        if s in seen:
            cut = seen[s]
            for dropped in out[cut + 1:]:
                del seen[dropped]
            del out[cut + 1:]
            continue
        seen[s] = len(out)
        out.append(s)
    return out


# -- exact search ------------------------------------------------------------


def neighbors(inst: Instance, W: tuple) -> Iterator[tuple]:
    """Committees at distance 1, in (removed, added) index order."""
    inside = set(W)
    outside = [c for c in range(inst.m) if c not in inside]
    for out in W:
        rest = [c for c in W if c != out]
        for into in outside:
            yield tuple(sorted(rest + [into]))


def bfs_connect(
    inst: Instance,
    W: Iterable[int],
    W2: Iterable[int],
    pred: Predicate,
    node_budget: int = 10**6,
) -> Optional[Path]:
    """Shortest path inside ``pred`` from ``W`` to ``W2``.

    Returns ``None`` only after exhausting the component of ``W``; raises
    ``BudgetExceeded`` if more than ``node_budget`` committees would have to
    be expanded.
    """
    W = as_committee(inst, W, inst.k)
    W2 = as_committee(inst, W2, inst.k)
    ok = PredicateCache(inst, pred)
    for end in (W, W2):
        if not ok(end):
            raise ValueError(f"committee {list(end)} does not satisfy {pred.label}")
    if W == W2:
        return Path.build(inst, [W], pred)
    parent = {W: None}
    queue = deque([W])
    expanded = 0
    while queue:
        cur = queue.popleft()
        expanded += 1
        if expanded > node_budget:
            raise BudgetExceeded(f"explored {node_budget} committees without finishing")
        for nxt in neighbors(inst, cur):
            if nxt in parent or not ok(nxt):
                continue
            parent[nxt] = cur
            if nxt == W2:
                steps = [nxt]
                while parent[steps[-1]] is not None:
                    steps.append(parent[steps[-1]])
                return Path.build(inst, steps[::-1], pred)
            queue.append(nxt)
    return None


def component(inst: Instance, W: Iterable[int], pred: Predicate, node_budget: int = 10**6) -> set:
    """All committees reachable from ``W`` inside ``pred``."""
    W = as_committee(inst, W, inst.k)
    ok = PredicateCache(inst, pred)
    seen = {W}
    queue = deque([W])
    while queue:
        if len(seen) > node_budget:
            raise BudgetExceeded(f"component exceeds {node_budget} committees")
        cur = queue.popleft()
        for nxt in neighbors(inst, cur):
            if nxt not in seen and ok(nxt):
                seen.add(nxt)
                queue.append(nxt)
    return seen


def committees_at(inst: Instance, W: tuple, d: int) -> Iterator[tuple]:
    inside = set(W)
    outside = [c for c in range(inst.m) if c not in inside]
    for gone in combinations(W, d):
        keep = inside.difference(gone)
        for new in combinations(outside, d):
            yield tuple(sorted(keep.union(new)))


def isolation_radius(
    inst: Instance,
    W: Iterable[int],
    pred: Predicate,
    max_r: int | None = None,
    restrict_to: Iterable[Sequence[int]] | None = None,
    node_budget: int | None = None,
):
    """Largest ``r <= max_r`` with no other ``pred``-committee within ``r``.

    Returns ``NOT_ISOLATED`` when a committee at distance 1 qualifies.  With
    ``restrict_to``, only the listed committees are examined (for instances
    whose symmetry reduces the neighbourhood to a few representatives), and
    the answer is capped at the largest distance among them.
    ``node_budget`` caps the number of committees tested.
    """
    W = as_committee(inst, W, inst.k)
    if max_r is None:
        max_r = inst.k - 1
    if not pred(inst, W):
        raise ValueError(f"committee {list(W)} does not satisfy {pred.label}")
    limit = min(max_r, inst.k, inst.m - inst.k)
    if restrict_to is not None:
        layers: dict = {}
        for other in restrict_to:
            other = as_committee(inst, other, inst.k)
            d = distance(W, other)
            if 1 <= d <= limit:
                layers.setdefault(d, []).append(other)
        for d in sorted(layers):
            if any(pred(inst, o) for o in layers[d]):
                return NOT_ISOLATED if d == 1 else d - 1
        # nothing beyond the listed distances was examined
        return min(max_r, max(layers, default=0))
    tested = 0
    for d in range(1, limit + 1):
        for o in committees_at(inst, W, d):
            tested += 1
            if node_budget is not None and tested > node_budget:
                raise BudgetExceeded(f"tested {node_budget} committees within distance {d}")
            if pred(inst, o):
                return NOT_ISOLATED if d == 1 else d - 1
    return max_r


# -- committee graph ---------------------------------------------------------


def satisfying_committees(inst: Instance, pred: Predicate, node_budget: int = 10**6) -> list:
    total = math.comb(inst.m, inst.k)
    if total > node_budget:
        raise BudgetExceeded(f"C({inst.m},{inst.k}) = {total} committees exceed the budget {node_budget}")
    return [W for W in combinations(range(inst.m), inst.k) if pred(inst, W)]


def committee_graph_dot(inst: Instance, pred: Predicate, node_budget: int = 10**6) -> str:
    """DOT text of the ``pred``-restricted committee adjacency graph."""
    nodes = satisfying_committees(inst, pred, node_budget)
    index = {W: i for i, W in enumerate(nodes)}
    lines = [f'graph "{pred.label}" {{', "  node [shape=box];"]
    for W, i in index.items():
        label = "{" + ",".join(str(c) for c in W) + "}"
        lines.append(f'  n{i} [label="{label}"];')
    for W, i in index.items():
        for nxt in neighbors(inst, W):
            j = index.get(nxt)
            if j is not None and i < j:
                lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"

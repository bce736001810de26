"""Consecutive-ones orderings via PQ-tree reduction.

A straightforward recursive version of the classic template reduction: each
constraint set is applied by locating the pertinent root and rebuilding the
subtree beneath it.  Quadratic-ish rather than linear, which is plenty for
election instances; callers verify the final ordering independently.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

EMPTY, PARTIAL, FULL = 0, 1, 2


class _Fail(Exception):
    pass


class Node:
    __slots__ = ("kind", "children", "leaf", "_leaves")

    def __init__(self, kind: str, children: list | None = None, leaf: int | None = None):
        self.kind = kind  # "L", "P" or "Q"
        self.children = children or []
        self.leaf = leaf
        self._leaves = None

    def leaves(self) -> frozenset:
        if self._leaves is None:
            if self.kind == "L":
                self._leaves = frozenset((self.leaf,))
            else:
                self._leaves = frozenset().union(*(c.leaves() for c in self.children))
        return self._leaves

    def frontier(self) -> list:
        if self.kind == "L":
            return [self.leaf]
        out = []
        for c in self.children:
            out.extend(c.frontier())
        return out


def _make(kind: str, children: list) -> Node:
    children = [c for c in children if c is not None]
    if len(children) == 1:
        return children[0]
    return Node(kind, children)


def _group(nodes: list) -> Optional[Node]:
    """Bundle interchangeable siblings under one P-node."""
    if not nodes:
        return None
    return _make("P", list(nodes))


def _status(node: Node, S: frozenset) -> int:
    lv = node.leaves()
    hit = len(lv & S)
    if hit == 0:
        return EMPTY
    return FULL if hit == len(lv) else PARTIAL


def _q_parts(node: Node) -> list:
    """Children of a partial result, as a list ordered empty-side first."""
    return node.children if node.kind == "Q" else [node]


def _reduce_below(node: Node, S: frozenset) -> tuple[int, Node]:
    """Reduce a non-root node; partial results come back as Q-nodes whose
    children run from the empty end to the full end."""
    st = _status(node, S)
    if st != PARTIAL:
        return st, node
    parts = [_reduce_below(c, S) for c in node.children]
    if node.kind == "P":
        empties = [n for s, n in parts if s == EMPTY]
        fulls = [n for s, n in parts if s == FULL]
        partial = [n for s, n in parts if s == PARTIAL]
        if len(partial) > 1:
            raise _Fail
        mid = _q_parts(partial[0]) if partial else []
        seq = ([_group(empties)] if empties else []) + mid + ([_group(fulls)] if fulls else [])
        return PARTIAL, Node("Q", seq)
    # Q-node: statuses must read E* [P] F* in one of the two directions
    for seq in (parts, parts[::-1]):
        out = _q_sequence(seq, root=False)
        if out is not None:
            return PARTIAL, Node("Q", out)
    raise _Fail


def _q_sequence(parts: list, root: bool) -> Optional[list]:
    """Flatten ordered children if their pattern allows consecutive fulls.

    Non-root: ``E* P? F*``.  Root: ``E* P? F* P? E*`` with something full.
    """
    statuses = [s for s, _ in parts]
    i, n = 0, len(statuses)
    while i < n and statuses[i] == EMPTY:
        i += 1
    out = [nd for _, nd in parts[:i]]
    if i < n and statuses[i] == PARTIAL:
        out.extend(_q_parts(parts[i][1]))
        i += 1
    while i < n and statuses[i] == FULL:
        out.append(parts[i][1])
        i += 1
    if not root:
        return out if i == n else None
    if i < n and statuses[i] == PARTIAL:
        out.extend(_q_parts(parts[i][1])[::-1])
        i += 1
    rest = statuses[i:]
    if any(s != EMPTY for s in rest):
        return None
    out.extend(nd for _, nd in parts[i:])
    return out


def _reduce_root(node: Node, S: frozenset) -> Node:
    parts = [_reduce_below(c, S) for c in node.children]
    if node.kind == "P":
        empties = [n for s, n in parts if s == EMPTY]
        fulls = [n for s, n in parts if s == FULL]
        partial = [n for s, n in parts if s == PARTIAL]
        if len(partial) > 2:
            raise _Fail
        if not partial:
            if len(fulls) < 2:
                return node
            return _make("P", empties + [_group(fulls)])
        seq = _q_parts(partial[0]) + ([_group(fulls)] if fulls else [])
        if len(partial) == 2:
            seq += _q_parts(partial[1])[::-1]
        return _make("P", empties + [Node("Q", seq)])
    out = _q_sequence(parts, root=True)
    if out is None:
        raise _Fail
    return Node("Q", out)


def _reduce(node: Node, S: frozenset) -> Node:
    if node.kind == "L":
        return node
    for i, c in enumerate(node.children):
        if S <= c.leaves():
            new = _reduce(c, S)
            children = list(node.children)
            children[i] = new
            return Node(node.kind, children)
    return _reduce_root(node, S)


def consecutive_ones_order(universe: int, sets: Iterable[Iterable[int]]) -> Optional[list[int]]:
    """An ordering of ``range(universe)`` in which every set is contiguous,
    or ``None`` when none exists."""
    if universe == 0:
        return []
    root = _make("P", [Node("L", leaf=i) for i in range(universe)])
    for s in sets:
        S = frozenset(s)
        if len(S) <= 1 or len(S) == universe:
            continue
        try:
            root = _reduce(root, S)
        except _Fail:
            return None
    return root.frontier()


def is_consecutive(order: Sequence[int], sets: Iterable[Iterable[int]]) -> bool:
    pos = {x: i for i, x in enumerate(order)}
    for s in sets:
        idx = sorted(pos[x] for x in s)
        if idx and idx[-1] - idx[0] + 1 != len(idx):
            return False
    return True

"""Unit-step walks that stay above a chain of anchor subcommittees.

The constructive connectors all describe a chain of subcommittees
``A_0, A_1, ...`` where every committee containing ``A_i`` satisfies the
target predicate.  ``walk_anchors`` turns such a chain into unit moves: at
each stage it adds the members of ``A_i`` that are missing, evicting first
whatever lies outside ``A_{i-1} | A_i``.  Every intermediate committee
therefore contains ``A_{i-1}`` or (after its last move) ``A_i``.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class WalkError(RuntimeError):
    pass


def walk_anchors(
    start: Iterable[int],
    anchors: Sequence[Iterable[int]],
    rank: dict | None = None,
) -> list[tuple]:
    """Committees visited from ``start`` (excluded) through ``anchors[1:]``.

    ``start`` must contain ``anchors[0]``.  ``rank`` orders eviction choices
    (lower goes first); candidates absent from it go last, by index.
    """
    X = set(start)
    prev = set(anchors[0])
    if not prev <= X:
        raise WalkError("start committee does not contain the first anchor")

    def key(c):
        return (rank.get(c, len(rank)) if rank else 0, c)

    out: list[tuple] = []
    for cur in anchors[1:]:
        cur = set(cur)
        if len(cur) > len(X):
            raise WalkError("anchor larger than the committee")
        missing = sorted(cur - X)
        for i, a in enumerate(missing):
            free = X - prev - cur
            if not free:
                if i != len(missing) - 1:
                    raise WalkError("anchors too far apart for a unit walk")
                free = X - cur
            X.remove(min(free, key=key))
            X.add(a)
            out.append(tuple(sorted(X)))
        prev = cur
    return out


def swap_walk(start: Iterable[int], end: Iterable[int], keep_first: Iterable[int] = ()) -> list[tuple]:
    """Plain swaps from ``start`` to ``end`` (excluded start, included end).

    Additions and removals both go in index order, except that members of
    ``keep_first`` are added before the others.
    """
    X = set(start)
    end = set(end)
    priority = set(keep_first)
    adds = sorted(end - X, key=lambda c: (c not in priority, c))
    rems = sorted(X - end)
    out = []
    for a, r in zip(adds, rems):
        X.remove(r)
        X.add(a)
        out.append(tuple(sorted(X)))
    return out

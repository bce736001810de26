"""SAT reconfiguration as JR reconfiguration, with an assignment-space oracle.

Index layout of the reduced instance, with ``a`` (padded) clauses, ``b``
variables and ``q = (a + 27) / 8``:

voters
    ``0 .. a-1``             one per clause
    ``a + 10*i + j``         ten per variable ``i`` (``j < 10``)
    next 9                   greedy voters
    next 9 / next 9          special dummies attached to ``c1`` / ``c2``
    next q / next q          non-special dummies attached to ``c1`` / ``c2``

candidates
    ``0 .. a-1``             one per clause
    ``a + 2*i``, ``a+2*i+1`` variable ``i`` true / false
    ``a + 2*b``, ``+1``      special candidates ``c1``, ``c2``
    ``a + 2*b + 2 + j``      non-special dummy ``j < q``
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .axioms import check_jr
from .core import Instance

MAX_ORACLE_VARS = 20


@dataclass(frozen=True)
class SatReconfigInstance:
    """Clauses use 1-based signed literals (``-3`` is "not x3")."""

    num_vars: int
    clauses: tuple
    phi1: tuple
    phi2: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(x) for x in c) for c in self.clauses))
        object.__setattr__(self, "phi1", tuple(bool(x) for x in self.phi1))
        object.__setattr__(self, "phi2", tuple(bool(x) for x in self.phi2))
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        if not self.clauses:
            raise ValueError("need at least one clause")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")
        for phi in (self.phi1, self.phi2):
            if len(phi) != self.num_vars:
                raise ValueError("assignment length differs from the variable count")

    def satisfies(self, phi: Sequence[bool]) -> bool:
        return all(any(phi[abs(x) - 1] == (x > 0) for x in c) for c in self.clauses)

    def padded_clauses(self) -> tuple:
        """Clauses with copies of the first appended until 8 divides a + 27."""
        out = list(self.clauses)
        while (len(out) + 27) % 8:
            out.append(self.clauses[0])
        return tuple(out)


def parse_sat(text: str) -> SatReconfigInstance:
    """Read ``p cnf b a``, clause lines ending in ``0``, and two assignment
    lines ``phi1 ...`` / ``phi2 ...`` listing every variable as a signed
    literal.  ``c`` lines are comments."""
    num_vars = num_clauses = None
    clauses, pending = [], []
    phis: dict = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise ValueError(f"line {no}: expected 'p cnf <vars> <clauses>'")
            num_vars, num_clauses = int(toks[2]), int(toks[3])
            continue
        if toks[0] in ("phi1", "phi2"):
            if num_vars is None:
                raise ValueError(f"line {no}: assignment before the 'p cnf' header")
            lits = [int(t) for t in toks[1:]]
            phi = [None] * num_vars
            for lit in lits:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"line {no}: literal {lit} out of range")
                phi[abs(lit) - 1] = lit > 0
            if None in phi:
                raise ValueError(f"line {no}: assignment must mention every variable")
            phis[toks[0]] = phi
            continue
        if num_vars is None:
            raise ValueError(f"line {no}: clause before the 'p cnf' header")
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise ValueError(f"line {no}: bad token in {line!r}") from None
        for x in nums:
            if x == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(x)
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    if pending:
        raise ValueError("last clause is not terminated by 0")
    if num_clauses is not None and num_clauses != len(clauses):
        raise ValueError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    if set(phis) != {"phi1", "phi2"}:
        raise ValueError("need both 'phi1' and 'phi2' lines")
    return SatReconfigInstance(num_vars, tuple(clauses), tuple(phis["phi1"]), tuple(phis["phi2"]))


def format_sat(sri: SatReconfigInstance) -> str:
    lines = [f"p cnf {sri.num_vars} {len(sri.clauses)}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in sri.clauses]
    for tag, phi in (("phi1", sri.phi1), ("phi2", sri.phi2)):
        lines.append(tag + " " + " ".join(str(i + 1 if v else -(i + 1)) for i, v in enumerate(phi)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Layout:
    a: int
    b: int

    @property
    def q(self) -> int:
        return (self.a + 27) // 8

    def literal(self, var: int, value: bool) -> int:
        return self.a + 2 * var + (0 if value else 1)

    @property
    def special(self) -> tuple:
        return self.a + 2 * self.b, self.a + 2 * self.b + 1

    def dummy(self, j: int) -> int:
        return self.a + 2 * self.b + 2 + j

    @property
    def m(self) -> int:
        return self.a + 2 * self.b + 2 + self.q

    @property
    def k(self) -> int:
        return self.b + self.q

    def committee(self, phi: Sequence[bool]) -> tuple:
        lits = [self.literal(i, v) for i, v in enumerate(phi)]
        return tuple(sorted(lits + [self.dummy(j) for j in range(self.q)]))


def sat_to_jr_reconfig(sri: SatReconfigInstance) -> tuple[Instance, tuple, tuple]:
    """The reduced election and the committees of ``phi1`` and ``phi2``."""
    for name, phi in (("phi1", sri.phi1), ("phi2", sri.phi2)):
        if not sri.satisfies(phi):
            raise ValueError(f"{name} does not satisfy every clause")
    clauses = sri.padded_clauses()
    L = Layout(len(clauses), sri.num_vars)
    c1, c2 = L.special
    ballots: list[list[int]] = []
    for idx, clause in enumerate(clauses):
        lits = {L.literal(abs(x) - 1, x > 0) for x in clause}
        ballots.append(sorted(lits | {idx}))
    for i in range(L.b):
        ballots += [[L.literal(i, True), L.literal(i, False)] for _ in range(10)]
    ballots += [list(range(L.a)) for _ in range(9)]
    ballots += [[c1] for _ in range(9)]
    ballots += [[c2] for _ in range(9)]
    ballots += [[c1, L.dummy(j)] for j in range(L.q)]
    ballots += [[c2, L.dummy(j)] for j in range(L.q)]
    inst = Instance.from_approvals(ballots, L.m, L.k)
    if inst.n != 10 * inst.k:
        raise AssertionError("reduced instance must have n = 10k")
    W1, W2 = L.committee(sri.phi1), L.committee(sri.phi2)
    for W in (W1, W2):
        if check_jr(inst, W) is not None:
            raise AssertionError("reduced committee violates JR")
    return inst, W1, W2


def project_assignment(sri: SatReconfigInstance, W) -> Optional[tuple]:
    """The assignment encoded by ``W``, or ``None`` if some variable has
    both or neither literal candidate."""
    L = Layout(len(sri.padded_clauses()), sri.num_vars)
    inside = set(W)
    phi = []
    for i in range(L.b):
        t, f = L.literal(i, True) in inside, L.literal(i, False) in inside
        if t == f:
            return None
        phi.append(t)
    return tuple(phi)


def sat_reconfig_connected(sri: SatReconfigInstance) -> bool:
    """Breadth-first search over satisfying assignments under single flips."""
    b = sri.num_vars
    if b > MAX_ORACLE_VARS:
        raise ValueError(f"{b} variables exceed the oracle limit {MAX_ORACLE_VARS}")
    masks = []
    for clause in sri.clauses:
        pos = neg = 0
        for x in clause:
            if x > 0:
                pos |= 1 << (x - 1)
            else:
                neg |= 1 << (-x - 1)
        masks.append((pos, neg))
    full = (1 << b) - 1

    def sat(s: int) -> bool:
        return all(s & pos or ~s & neg & full for pos, neg in masks)

    def enc(phi) -> int:
        return sum(1 << i for i, v in enumerate(phi) if v)

    start, goal = enc(sri.phi1), enc(sri.phi2)
    for s, name in ((start, "phi1"), (goal, "phi2")):
        if not sat(s):
            raise ValueError(f"{name} does not satisfy every clause")
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            return True
        for i in range(b):
            t = s ^ (1 << i)
            if t not in seen and sat(t):
                seen.add(t)
                queue.append(t)
    return False

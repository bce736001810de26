"""Shared helpers for seeded random sweeps."""

from itertools import combinations

import numpy as np

from committee_reconfig.axioms import check
from committee_reconfig.core import Instance
from committee_reconfig.generators import gen_random


def random_instance(seed, n=(4, 12), m=(3, 7), k=(2, 4), density=(0.15, 0.6)):
    rng = np.random.default_rng(seed)
    mm = int(rng.integers(m[0], m[1] + 1))
    kk = int(rng.integers(k[0], min(k[1], mm) + 1))
    nn = int(rng.integers(n[0], n[1] + 1))
    d = float(rng.uniform(*density))
    return gen_random(nn, mm, kk, d, seed)


def satisfying(inst, axiom="jr", alpha=1):
    return [W for W in combinations(range(inst.m), inst.k) if check(inst, W, axiom, alpha) is None]


def is_unit_path(steps) -> bool:
    return all(len(set(a) - set(b)) == 1 and len(a) == len(b) for a, b in zip(steps, steps[1:]))


def random_interval_instance(rng, kind):
    n, m = int(rng.integers(3, 10)), int(rng.integers(3, 9))
    k = int(rng.integers(1, min(4, m) + 1))
    if kind == "ci":
        perm = rng.permutation(m)
        ballots = []
        for _ in range(n):
            a = int(rng.integers(0, m))
            b = int(rng.integers(a, min(m, a + 3)))
            ballots.append(sorted(int(perm[i]) for i in range(a, b + 1)) if rng.random() < 0.9 else [])
        return Instance.from_approvals(ballots, m, k)
    perm = rng.permutation(n)
    masks = []
    for _ in range(m):
        a = int(rng.integers(0, n))
        b = int(rng.integers(a, min(n, a + 4)))
        masks.append(sum(1 << int(perm[i]) for i in range(a, b + 1)))
    return Instance.from_support_masks(n, masks, k)

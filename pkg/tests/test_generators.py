import math

import numpy as np
import pytest

from committee_reconfig.axioms import check_jr
from committee_reconfig.core import coverage
from committee_reconfig.generators import (
    FamilyTooLarge,
    colex_masks,
    colex_rank,
    describe,
    gen_fixture,
    gen_grid,
    gen_isolated,
    gen_random,
    gen_tightness,
    isolated_candidate,
    isolated_counts,
    isolated_cover_committee,
    isolated_swap_class,
    tightness_alpha,
    tightness_candidate,
    tightness_counts,
)
from committee_reconfig.schemas import validate


@pytest.fixture(scope="module")
def isolated3():
    return gen_isolated(3)


@pytest.fixture(scope="module")
def tight3():
    return gen_tightness(3)


def test_colex():
    masks = colex_masks(5, 2)
    assert len(masks) == 10 and list(masks) == sorted(masks)
    for i, m in enumerate(masks):
        elems = [b for b in range(5) if int(m) >> b & 1]
        assert colex_rank(elems) == i
    big = colex_masks(30, 2)
    assert len(big) == math.comb(30, 2) and colex_rank([28, 29]) == len(big) - 1
    with pytest.raises(FamilyTooLarge):
        colex_masks(60, 20)


def test_isolated_counts(isolated3):
    inst, W, reps = isolated3
    assert (inst.n, inst.m, inst.k) == (27, 393_825, 3)
    assert isolated_counts(3)[1] * 9 == 393_822
    assert W == (0, 1, 2)
    assert len(reps) == 6


def test_isolated_supports(isolated3):
    inst, _, _ = isolated3
    sizes = np.bitwise_count(inst.words[:, 0])
    assert (sizes[:3] == 3).all() and (sizes[3:] == 9).all()
    first = inst.words[3:, 0] & np.uint64((1 << 9) - 1)
    assert (np.bitwise_count(first) == 1).all()
    assert isolated_candidate(3, 3) == (0, 0)
    assert isolated_candidate(3, 1) is None


def test_isolated_reps_fail_jr(isolated3):
    inst, W, reps = isolated3
    assert check_jr(inst, W) is None
    for rep in reps:
        assert check_jr(inst, rep["committee"]) is not None
        assert isolated_swap_class(3, rep["removed"], rep["added"]) == (rep["removed"], rep["covers_removed"])


def test_isolated_class_soundness_sample(isolated3):
    inst, W, reps = isolated3
    verdict = {(r["removed"], r["covers_removed"]): check_jr(inst, r["committee"]) is None for r in reps}
    rng = np.random.default_rng(0)
    for _ in range(2000):
        out = int(rng.integers(0, 3))
        into = int(rng.integers(3, inst.m))
        cand = tuple(sorted([c for c in W if c != out] + [into]))
        assert (check_jr(inst, cand) is None) == verdict[isolated_swap_class(3, out, into)]


def test_isolated_cover(isolated3):
    inst, _, _ = isolated3
    cover = isolated_cover_committee(3)
    assert set(range(9, 27)) <= set(coverage(inst, cover))
    assert check_jr(inst, cover) is None


def test_isolated_guards():
    with pytest.raises(ValueError):
        gen_isolated(2)
    with pytest.raises(FamilyTooLarge):
        gen_isolated(4)


def test_tightness_shape(tight3):
    inst, W, W2 = tight3
    n1, n2, k, c2, m = tightness_counts(3)
    assert (inst.n, inst.k, inst.m) == (60, 12, m)
    assert inst.n * 1 == 5 * inst.k
    assert tightness_alpha(3) == pytest.approx(6 / 5) and str(tightness_alpha(3)) == "6/5"
    assert check_jr(inst, W) is None and check_jr(inst, W2) is None
    assert sum(1 for c in W2 if c >= k) == 4


def test_tightness_supports(tight3):
    inst, _, _ = tight3
    words = inst.words[12:, 0]
    low = np.uint64((1 << 48) - 1)
    assert (np.bitwise_count(words & low) == 3).all()
    assert (np.bitwise_count(words >> np.uint64(48)) == 3).all()
    idx = tightness_candidate(3, [0, 1, 2], [0, 1, 2])
    assert idx == 12 and int(inst.words[idx, 0]) == 0b111 | (0b111 << 48)


def test_tightness_sample_fails(tight3):
    inst, _, _ = tight3
    alpha = tightness_alpha(3)
    rng = np.random.default_rng(1)
    for _ in range(50):
        strong = rng.choice(np.arange(12, inst.m), 3, replace=False)
        weak = rng.choice(12, 9, replace=False)
        assert check_jr(inst, sorted(map(int, [*strong, *weak])), alpha) is not None


def test_grid():
    g = gen_grid(3)
    assert (g.n, g.m, g.k) == (9, 6, 3)
    assert g.approvals[4] == frozenset({1, 4})
    with pytest.raises(ValueError):
        gen_grid(1)


@pytest.mark.parametrize("name, shape", [
    ("example1", (9, 6, 3)),
    ("ccav_table", (7, 4, 3)),
    ("vi_table", (6, 6, 2)),
    ("civi_table", (6, 7, 3)),
])
def test_fixtures(name, shape):
    inst = gen_fixture(name).instance
    assert (inst.n, inst.m, inst.k) == shape


def test_unknown_fixture():
    with pytest.raises(ValueError):
        gen_fixture("table9")


def test_random():
    a = gen_random(30, 10, 3, 0.3, 42)
    assert a == gen_random(30, 10, 3, 0.3, 42)
    full = gen_random(5, 4, 2, 1.0, 0)
    assert all(a == frozenset(range(4)) for a in full.approvals)
    big = gen_random(1000, 100, 3, 0.3, 7)
    total = sum(len(a) for a in big.approvals)
    cells = 1000 * 100
    sigma = math.sqrt(cells * 0.3 * 0.7)
    assert abs(total - 0.3 * cells) <= 3 * sigma
    for bad in [(0, 3, 1, 0.5), (3, 3, 4, 0.5), (3, 3, 1, 0.0)]:
        with pytest.raises(ValueError):
            gen_random(*bad, seed=0)


@pytest.mark.parametrize("family, params", [
    ("grid", {"r": "3"}),
    ("fixture", {"name": "example1"}),
    ("random", {"n": "8", "m": "5", "k": "2", "density": "0.4", "seed": "1"}),
    ("tightness", {"r": "3"}),
])
def test_descriptors_validate(family, params):
    doc = describe(family, **params).sidecar()
    validate("gen", doc)


def test_descriptor_errors():
    with pytest.raises(ValueError):
        describe("random", n=3)
    with pytest.raises(ValueError):
        describe("moebius")

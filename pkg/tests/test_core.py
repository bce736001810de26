from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from committee_reconfig.core import (
    Instance,
    InstanceFormatError,
    VoterSet,
    as_committee,
    coverage,
    distance,
    fraction_str,
    instance_from_json,
    instance_to_json,
    load_instance,
    parse_committee,
    parse_fraction,
    parse_instance,
    serialize_instance,
    swap,
)
from committee_reconfig.generators import gen_fixture, gen_random
from strategies import instance_and_committee, instances

EXAMPLE1_TEXT = """# nine voters, six candidates
9 6 3
0
0 1
0 1
2 3 4
2 3 4
2 3 4
2 3 4
2 3 5
2 3 5
"""


def test_parse_example1():
    inst = parse_instance(EXAMPLE1_TEXT)
    assert (inst.n, inst.m, inst.k) == (9, 6, 3)
    assert len(inst.support(2)) == 6
    assert inst.support(0).tolist() == [0, 1, 2]
    assert inst == gen_fixture("example1").instance


def test_empty_ballot_line():
    inst = parse_instance("1 1 1\n\n")
    assert inst.approvals == (frozenset(),)
    assert inst.support(0) == 0


def test_missing_trailing_ballots_are_empty():
    inst = parse_instance("3 2 1\n0 1\n")
    assert inst.approvals[1] == frozenset() and inst.approvals[2] == frozenset()


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("3 2\n", 1),
        ("a b c\n", 1),
        ("2 2 3\n", 1),
        ("1 2 1\n5\n", 2),
        ("1 2 1\n0 0\n", 2),
        ("1 2 1\nx\n", 2),
        ("1 2 1\n0\n1\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(InstanceFormatError) as exc:
        parse_instance(text)
    assert exc.value.line == line


def test_json_round_trip_and_errors(tmp_path):
    inst = gen_fixture("ccav_table").instance
    doc = instance_to_json(inst)
    assert doc["approvals"][6] == []
    assert instance_from_json(doc) == inst
    p = tmp_path / "i.json"
    import json

    p.write_text(json.dumps(doc))
    assert load_instance(str(p)) == inst
    with pytest.raises(InstanceFormatError):
        instance_from_json({"n": 2, "m": 1, "k": 1, "approvals": [[0]]})
    with pytest.raises(InstanceFormatError):
        instance_from_json({"n": 1, "m": 2, "k": 1})
    with pytest.raises(InstanceFormatError):
        instance_from_json({"n": 1, "m": 2, "k": 1, "approvals": [[1, 1]]})


def _normalize(inst):
    return [sorted(a) for a in inst.approvals]


def test_text_round_trip_on_random_instances():
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(1, 12)), int(rng.integers(1, 9))
        k = int(rng.integers(1, m + 1))
        inst = gen_random(n, m, k, float(rng.uniform(0.05, 0.9)), seed)
        text = serialize_instance(inst)
        back = parse_instance(text)
        assert back == inst
        assert serialize_instance(back) == text


def test_supports_consistent_with_ballots_fuzz():
    for seed in range(1000):
        rng = np.random.default_rng(10_000 + seed)
        n, m = int(rng.integers(1, 70)), int(rng.integers(1, 12))
        inst = gen_random(n, m, 1, 0.3, seed)
        for c in range(m):
            direct = {v for v in range(n) if c in inst.approvals[v]}
            assert set(inst.support(c)) == direct
        assert Instance.from_approvals([sorted(a) for a in inst.approvals], m, 1) == inst


def test_multiword_supports():
    ballots = [[0] if v % 3 == 0 else [1] for v in range(130)]
    inst = Instance.from_approvals(ballots, 2, 1)
    assert inst.words.shape == (2, 3)
    assert len(inst.support(0)) == 44
    assert coverage(inst, [0, 1]) == inst.all_voters


def test_coverage_table1():
    inst = gen_fixture("ccav_table").instance
    assert coverage(inst, [3]).tolist() == [0, 2, 4]
    assert coverage(inst, []) == 0


@given(instance_and_committee(max_n=20, max_m=8))
def test_coverage_matches_per_voter_scan(data):
    inst, W = data
    expected = {v for v in range(inst.n) if inst.approvals[v] & set(W)}
    assert set(coverage(inst, W)) == expected


def test_distance():
    assert distance((0, 1), (0, 1)) == 0
    assert distance((0, 1), (2, 3)) == 2
    assert distance((0, 2, 3), (1, 4, 5)) == 3
    with pytest.raises(ValueError):
        distance((0,), (0, 1))


def test_committee_helpers():
    inst = gen_fixture("example1").instance
    assert as_committee(inst, [3, 0, 2], 3) == (0, 2, 3)
    with pytest.raises(ValueError):
        as_committee(inst, [0, 9], 2)
    with pytest.raises(ValueError):
        as_committee(inst, [0, 1], 3)
    with pytest.raises(ValueError):
        as_committee(inst, [0, 1, 2, 3])
    assert swap((0, 2, 3), 0, 1) == (1, 2, 3)
    assert parse_committee(" 3,1, 2 ") == (1, 2, 3)
    assert parse_committee("") == ()
    with pytest.raises(ValueError):
        parse_committee("1,x")


def test_fractions():
    assert parse_fraction("6/5") == Fraction(6, 5)
    assert parse_fraction("2") == 2
    assert fraction_str(Fraction(4, 2)) == "2/1"
    for bad in ("1/0", "abc", ""):
        with pytest.raises(ValueError):
            parse_fraction(bad)


def test_voterset():
    s = VoterSet.of([0, 5, 64])
    assert len(s) == 3 and 5 in s and 4 not in s and -1 not in s
    assert s.tolist() == [0, 5, 64]
    assert list(s) == [0, 5, 64]


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance.from_approvals([[0]], 1, 2)
    with pytest.raises(ValueError):
        Instance.from_approvals([[3]], 2, 1)
    with pytest.raises(ValueError):
        Instance.from_approvals([], 2, 1)
    with pytest.raises(ValueError):
        Instance(3, 1, 1, np.array([[8]], dtype=np.uint64))
    inst = gen_fixture("example1").instance
    with pytest.raises(ValueError):
        inst.words[0, 0] = 0


def test_large_threshold_is_exact():
    inst = gen_fixture("example1").instance  # n/k = 3
    assert inst.large(3) and not inst.large(2)
    assert inst.large(6, 2) and not inst.large(5, 2)
    assert inst.large(4, 1, Fraction(4, 3)) and not inst.large(3, 1, Fraction(4, 3))


@given(instances(max_n=10, max_m=6))
def test_hash_and_equality(inst):
    twin = parse_instance(serialize_instance(inst))
    assert twin == inst and hash(twin) == hash(inst)

import pytest

from committee_reconfig.axioms import check_jr
from committee_reconfig.reconfig import Predicate, bfs_connect
from committee_reconfig.reductions import (
    Layout,
    SatReconfigInstance,
    format_sat,
    parse_sat,
    project_assignment,
    sat_reconfig_connected,
    sat_to_jr_reconfig,
)
from sat_cases import flip_components, random_cases

SAMPLE = """c two variables
p cnf 2 1
1 2 0
phi1 1 2
phi2 -1 2
"""


def test_parse_and_format_round_trip():
    sri = parse_sat(SAMPLE)
    assert sri.num_vars == 2 and sri.clauses == ((1, 2),)
    assert sri.phi1 == (True, True) and sri.phi2 == (False, True)
    assert parse_sat(format_sat(sri)) == sri


def test_clause_split_across_lines():
    sri = parse_sat("p cnf 3 2\n1 -2\n3 0 -1 0\nphi1 1 2 3\nphi2 1 2 3\n")
    assert sri.clauses == ((1, -2, 3), (-1,))


@pytest.mark.parametrize(
    "text",
    [
        "1 2 0\n",
        "p cnf 2\n",
        "p cnf 2 1\n1 2\nphi1 1 2\nphi2 1 2\n",
        "p cnf 2 2\n1 2 0\nphi1 1 2\nphi2 1 2\n",
        "p cnf 2 1\n1 5 0\nphi1 1 2\nphi2 1 2\n",
        "p cnf 2 1\n1 2 0\nphi1 1\nphi2 1 2\n",
        "p cnf 2 1\n1 2 0\nphi1 1 2\n",
        "p cnf 2 1\n1 x 0\nphi1 1 2\nphi2 1 2\n",
        "p cnf 2 0\nphi1 1 2\nphi2 1 2\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_sat(text)


def test_instance_validation():
    with pytest.raises(ValueError):
        SatReconfigInstance(0, ((1,),), (), ())
    with pytest.raises(ValueError):
        SatReconfigInstance(1, ((),), (True,), (True,))
    with pytest.raises(ValueError):
        SatReconfigInstance(1, ((1,),), (True, False), (True,))


def test_padding():
    sri = parse_sat(SAMPLE)
    padded = sri.padded_clauses()
    assert len(padded) == 5 and all(c == (1, 2) for c in padded)
    L = Layout(5, 2)
    assert (L.q, L.k, L.m) == (4, 6, 15)


def test_single_clause_example():
    sri = parse_sat(SAMPLE)
    inst, W1, W2 = sat_to_jr_reconfig(sri)
    assert inst.n == 10 * inst.k
    assert check_jr(inst, W1) is None and check_jr(inst, W2) is None
    assert project_assignment(sri, W1) == sri.phi1
    assert project_assignment(sri, W2) == sri.phi2
    assert sat_reconfig_connected(sri)
    assert bfs_connect(inst, W1, W2, Predicate.jr()) is not None


def test_separated_pair():
    sri = SatReconfigInstance(2, ((1, -2), (-1, 2)), (True, True), (False, False))
    assert not sat_reconfig_connected(sri)
    inst, W1, W2 = sat_to_jr_reconfig(sri)
    assert bfs_connect(inst, W1, W2, Predicate.jr()) is None


def test_monotone_clauses_connected():
    sri = SatReconfigInstance(3, ((1, 2), (2, 3), (1, 3)), (True, True, True), (True, False, True))
    assert sat_reconfig_connected(sri)


def test_identical_assignments():
    sri = SatReconfigInstance(2, ((1,),), (True, False), (True, False))
    assert sat_reconfig_connected(sri)


def test_unsatisfying_assignment_rejected():
    sri = SatReconfigInstance(1, ((1,),), (False,), (True,))
    with pytest.raises(ValueError):
        sat_to_jr_reconfig(sri)
    with pytest.raises(ValueError):
        sat_reconfig_connected(sri)


def test_project_assignment_mixed():
    sri = parse_sat(SAMPLE)
    L = Layout(5, 2)
    both = (L.literal(0, True), L.literal(0, False))
    assert project_assignment(sri, both) is None


def test_oracle_matches_components():
    for sri in random_cases(40, seed=9):
        import itertools

        sats = {
            p for p in itertools.product((False, True), repeat=sri.num_vars) if sri.satisfies(p)
        }
        comp = flip_components(sri.num_vars, sats)
        assert sat_reconfig_connected(sri) == (comp[sri.phi1] == comp[sri.phi2])


def test_reduction_agrees_on_random_cases():
    cases = random_cases(20, seed=1)
    assert any(not sat_reconfig_connected(c) for c in cases)
    for sri in cases:
        inst, W1, W2 = sat_to_jr_reconfig(sri)
        found = bfs_connect(inst, W1, W2, Predicate.jr()) is not None
        assert found == sat_reconfig_connected(sri)

import pytest

from netmatch import fixtures
from netmatch.generators import gen_instance
from netmatch.market import Allocation, InvitationNetwork, MarketInstance, ReportProfile, build_market
from netmatch.mechanisms import MechanismId
from netmatch.verifiers import (
    ASSIGNED,
    CapabilityError,
    CoalitionFamily,
    check_core_for_paths,
    check_ir,
    check_pareto_efficient,
    check_strategy_proof,
    child_subsets,
    coalitions,
    deviations,
    find_blocking_coalition,
    outcome,
    pareto_dominates,
    root_paths,
)

CHAIN = fixtures.load("p1")  # o->1->2->3, prefs 1: h3>h2>h1, 2: h1>h2>h3, 3: h1>h3>h2
A = Allocation.from_houses


def test_ir_violators():
    assert check_ir(CHAIN, A((1, 3, 2))) == [2, 3]
    assert check_ir(CHAIN, A((1, 2, 3))) == []
    assert check_ir(CHAIN, A((2, 1, 3))) == []


def test_pareto_dominance():
    assert pareto_dominates(A((2, 1, 3)), A((1, 2, 3)), CHAIN)
    assert not pareto_dominates(A((2, 1, 3)), A((2, 1, 3)), CHAIN)
    assert not pareto_dominates(A((3, 2, 1)), A((2, 1, 3)), CHAIN)
    assert not pareto_dominates(A((2, 1, 3)), A((3, 2, 1)), CHAIN)


def test_pareto_efficiency():
    assert check_pareto_efficient(CHAIN, A((2, 1, 3))) is None
    assert check_pareto_efficient(CHAIN, A((3, 2, 1))) is None
    witness = check_pareto_efficient(CHAIN, A((1, 2, 3)))
    assert witness is not None and pareto_dominates(witness, A((1, 2, 3)), CHAIN)


def test_capability_bounds():
    big = gen_instance(9, 1)
    ident = Allocation.identity(big.agents)
    with pytest.raises(CapabilityError):
        check_pareto_efficient(big, ident)
    with pytest.raises(CapabilityError):
        find_blocking_coalition(big, ident)
    with pytest.raises(CapabilityError):
        check_strategy_proof("ttcd", big)
    # restricted families stay polynomial and are not bounded
    assert find_blocking_coalition(big, outcome("ttcd", big), CoalitionFamily.ADJACENT_PAIRS) is None


def test_path_coalitions_are_contiguous_segments():
    assert list(coalitions(CHAIN, CoalitionFamily.PATH_SUBSETS)) == [
        {1}, {2}, {3}, {1, 2}, {2, 3}, {1, 2, 3}
    ]
    assert list(coalitions(CHAIN, CoalitionFamily.ADJACENT_PAIRS)) == [{1, 2}, {2, 3}]
    assert len(list(coalitions(CHAIN, "all_subsets"))) == 7


def test_root_paths_in_graph():
    m = build_market(fixtures.load("case1"))  # o->1, o->2, 1->3, 3->2
    assert root_paths(m) == [(1,), (1, 3), (1, 3, 2), (2,)]


def test_coalitions_follow_reports():
    reports = ReportProfile.with_overrides(CHAIN, children={2: []})
    assert list(coalitions(CHAIN, "path_subsets", reports)) == [{1}, {2}, {1, 2}]


def test_blocking_coalition_endowments_vs_assigned():
    x = A((2, 1, 3))
    found = find_blocking_coalition(CHAIN, x)
    assert found.members == {1, 3}
    assert found.reallocation == {1: 3, 3: 1}
    assert find_blocking_coalition(CHAIN, x, houses=ASSIGNED) is None


def test_core_for_paths_on_chain():
    assert check_core_for_paths(CHAIN, outcome("ttcd", CHAIN))
    assert not check_core_for_paths(CHAIN, A((1, 3, 2)))


def test_top_ranked_own_houses_are_stable():
    inst = MarketInstance(InvitationNetwork.from_parents([0, 1, 2]), {1: (1, 2, 3), 2: (2, 3, 1), 3: (3, 1, 2)})
    ident = Allocation.identity(inst.agents)
    for family in CoalitionFamily:
        assert find_blocking_coalition(inst, ident, family) is None


def test_single_agent_market():
    inst = MarketInstance(InvitationNetwork.from_parents([0]), {1: (1,)})
    assert check_core_for_paths(inst, Allocation.identity([1]))
    assert check_strategy_proof("ttcd", inst) is None


def test_child_subset_order():
    assert child_subsets({5, 2}) == [frozenset(), {2}, {5}, {2, 5}]
    assert child_subsets(set()) == [frozenset()]


def test_deviation_enumeration_order():
    devs = list(deviations(CHAIN, 2))
    assert len(devs) == 2 * 6
    assert devs[0].reported_children == frozenset() and devs[0].reported_preference == (1, 2, 3)
    assert devs[6].reported_children == {3}


def test_classic_ttc_counterexample_on_chain():
    ce = check_strategy_proof(MechanismId.CLASSIC_TTC, CHAIN)
    assert ce.deviation.agent == 2
    assert ce.deviation.reported_children == frozenset()
    assert ce.deviation.reported_preference == (1, 2, 3)
    assert (ce.truthful_outcome, ce.deviating_outcome) == (2, 1)


def test_ttcd_has_no_counterexample_on_chain():
    assert check_strategy_proof("ttcd", CHAIN) is None


def test_checker_finds_hand_built_deviation():
    # classic TTC on the two-branch tree: agent 1 gains by hiding child 3
    inst = fixtures.load("p4")
    reports = ReportProfile.with_overrides(inst, children={1: [2]})
    truthful = outcome("classic_ttc", inst).house_of(1)
    hiding = outcome("classic_ttc", inst, reports).house_of(1)
    prefs = inst.preferences[1]
    assert prefs.index(hiding) < prefs.index(truthful)
    ce = check_strategy_proof("classic_ttc", inst)
    assert ce is not None
    assert prefs.index(ce.deviating_outcome) < prefs.index(ce.truthful_outcome)


def test_restricting_agents():
    assert check_strategy_proof("classic_ttc", CHAIN, agents=[1, 3]) is None

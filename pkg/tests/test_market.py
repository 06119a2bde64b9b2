from fractions import Fraction

import pytest

from netmatch import fixtures
from netmatch.market import (
    GRAPH,
    TREE,
    Allocation,
    InvitationNetwork,
    MarketError,
    MarketInstance,
    ReportProfile,
    build_market,
    metrics,
    rank,
    topological_order,
)


def chain3():
    return fixtures.load("p1")


def test_rank_is_one_based():
    assert rank((3, 2, 1), 3) == 1
    assert rank((3, 2, 1), 1) == 3
    with pytest.raises(MarketError):
        rank((1, 2), 5)


def test_from_parents_builds_tree():
    net = InvitationNetwork.from_parents([0, 1, 1])
    assert net.edges == {(0, 1), (1, 2), (1, 3)}
    assert net.children(1) == {2, 3}
    assert net.parents(3) == {1}
    assert net.is_tree()


@pytest.mark.parametrize(
    "edges, shape",
    [
        ({(0, 1), (1, 2), (0, 2)}, TREE),  # two parents in a tree
        ({(0, 1)}, TREE),  # agent 2 unreachable
        ({(0, 1), (1, 2), (2, 1)}, GRAPH),  # cycle
    ],
)
def test_network_validation_errors(edges, shape):
    prefs = {1: (1, 2), 2: (2, 1)}
    with pytest.raises(MarketError):
        MarketInstance(InvitationNetwork(2, frozenset(edges)), prefs, shape)


def test_self_loop_and_unknown_agent_rejected():
    with pytest.raises(MarketError):
        InvitationNetwork(2, frozenset({(0, 1), (1, 1)}))
    with pytest.raises(MarketError):
        InvitationNetwork(2, frozenset({(0, 1), (1, 3)}))


def test_preferences_must_be_permutations():
    net = InvitationNetwork.from_parents([0, 1])
    with pytest.raises(MarketError):
        MarketInstance(net, {1: (1, 1), 2: (2, 1)})
    with pytest.raises(MarketError):
        MarketInstance(net, {1: (1, 2)})


def test_topological_order_detects_cycles():
    assert topological_order(2, [(0, 1), (1, 2)]) == [0, 1, 2]
    assert topological_order(2, [(0, 1), (1, 2), (2, 1)]) is None


def test_chain_relations():
    m = build_market(chain3())
    assert m.participants == {1, 2, 3}
    assert m.ancestors[3] == {1, 2}
    assert m.descendants[1] == {2, 3}
    assert m.siblings[2] == frozenset()
    assert m.depth[3] == 3
    assert m.path_set(3) == {1, 2, 3}
    assert m.relations(2) == (frozenset({1}), frozenset({3}), frozenset())
    with pytest.raises(MarketError):
        m.relations(7)


def test_graph_relations_and_dominators():
    # o->1, o->2, 1->3, 3->2
    m = build_market(fixtures.load("case1"))
    assert m.siblings[1] == {2}
    assert m.siblings[2] == {1}
    assert m.ancestors[2] == {1, 3}
    assert m.depth[2] == 1
    assert m.dominators[3] == {1}
    assert m.dominators[2] == frozenset()  # the direct edge from the organizer bypasses 1 and 3
    assert m.organizer_children == {1, 2}


def test_dropping_a_child_removes_its_subtree():
    inst = chain3()
    reports = ReportProfile.with_overrides(inst, children={2: []})
    m = build_market(inst, reports)
    assert m.participants == {1, 2}
    assert (2, 3) not in m.edges


def test_report_validation():
    inst = chain3()
    with pytest.raises(MarketError, match="not its children"):
        ReportProfile.with_overrides(inst, children={1: [3]})
    with pytest.raises(MarketError, match="organizer"):
        ReportProfile.with_overrides(inst, children={0: []})
    with pytest.raises(MarketError):
        ReportProfile.with_overrides(inst, preferences={1: (1, 2, 2)})


def test_reported_preferences_are_used():
    inst = chain3()
    m = build_market(inst, ReportProfile.with_overrides(inst, preferences={2: (2, 1, 3)}))
    assert m.preferences[2] == (2, 1, 3)
    assert m.preferences[1] == inst.preferences[1]


def test_allocation_must_be_a_bijection():
    with pytest.raises(MarketError):
        Allocation({1: 2, 2: 2})
    with pytest.raises(MarketError):
        Allocation({1: 3, 2: 1})  # house 3 belongs to an outsider
    a = Allocation.from_houses((2, 1, 3))
    assert a.house_of(1) == 2
    assert a.houses(3) == (2, 1, 3)
    assert Allocation({1: 1}).house_of(4) == 4  # outsiders keep their endowment
    assert Allocation.identity(range(1, 4)) == Allocation.from_houses((1, 2, 3))


def test_metrics_on_chain():
    m = metrics(chain3(), Allocation.from_houses((2, 1, 3)))
    assert m.swap_count == 2
    assert m.per_agent_improvement == (1, 1, 0)
    assert m.average_improvement == Fraction(2, 3)


def test_metrics_identity_is_zero():
    m = metrics(chain3(), Allocation.identity(range(1, 4)))
    assert m.swap_count == 0
    assert m.average_improvement == 0

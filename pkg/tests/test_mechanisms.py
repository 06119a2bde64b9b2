import pytest

from netmatch import fixtures
from netmatch.generators import gen_instance, star_instance
from netmatch.market import Allocation, InvitationNetwork, MarketError, MarketInstance, build_market
from netmatch.mechanisms import (
    MECHANISMS,
    NETWORKED,
    MechanismId,
    classic_ttc,
    leave_and_share,
    mechanism_id,
    modified_ttc,
    pointer_cycles,
    run,
    ttcd,
    ttcd_graph,
    ttcd_tree,
    yrmh_igyt,
)


def market(name):
    return build_market(fixtures.load(name))


def houses(result, n):
    return result[0].houses(n)


# --- oracles on the three-agent chain -------------------------------------

@pytest.mark.parametrize(
    "mech, expected",
    [
        (classic_ttc, (3, 2, 1)),
        (modified_ttc, (2, 1, 3)),
        (leave_and_share, (2, 1, 3)),
        (yrmh_igyt, (2, 1, 3)),
        (ttcd, (2, 1, 3)),
    ],
)
def test_chain_allocations(mech, expected):
    assert houses(mech(market("p1")), 3) == expected


def test_ttcd_chain_trace():
    _, trace = ttcd(market("p1"))
    assert len(trace.rounds) == 1
    rnd = trace.rounds[0]
    # agent 3 loses h1 to its ancestor, then agent 1 yields h3 to its owner
    assert rnd.resolutions == [("ancestor", 2, 3, 1), ("descendant", 1, 3, 3)]
    assert rnd.pointers == {1: 2, 2: 1, 3: 3}
    assert rnd.cycles == [(1, 2), (3,)]
    assert trace.removed() == [(1, 2), (3,)]


def test_trace_to_dict_is_json_ready():
    doc = ttcd(market("p1"))[1].to_dict()
    assert doc["rounds"][0]["pointers"] == {"1": 2, "2": 1, "3": 3}
    assert doc["rounds"][0]["cycles"] == [[1, 2], [3]]


def test_between_conflict_rules_on_p3():
    m = market("p3")
    walked, trace = ttcd_tree(m)
    assert walked.houses(4) == (1, 3, 2, 4)
    assert ("descendant", 1, 3, 2) in trace.rounds[0].resolutions
    chained, trace = ttcd_tree(m, between="chain")
    assert chained.houses(4) == (1, 2, 3, 4)
    first = trace.rounds[0].adjudications[0]
    assert first == (1, 3, 2, (4,))  # agent 4 is confined to j's side and keeps h4


def test_unknown_between_rule():
    with pytest.raises(ValueError):
        ttcd_tree(market("p1"), between="coin-flip")


def test_graph_rule_sets():
    c1, c2 = market("case1"), market("case2")
    assert houses(ttcd_graph(c1), 3) == (2, 1, 3)
    assert houses(ttcd_graph(c2), 3) == (3, 1, 2)
    assert houses(ttcd_graph(c2, rules="amended"), 3) == (3, 1, 2)
    assert houses(ttcd_graph(c2, rules="tree"), 3) == (1, 3, 2)
    with pytest.raises(ValueError):
        ttcd_graph(c1, rules="nope")


def test_ttcd_dispatches_on_shape():
    assert houses(ttcd(market("case2")), 3) == houses(ttcd_graph(market("case2")), 3)


def test_ttcd_tree_rejects_graphs():
    with pytest.raises(MarketError):
        ttcd_tree(market("case1"))


# --- small hand cases ------------------------------------------------------

def two_agents(edges, prefs):
    return build_market(MarketInstance(InvitationNetwork(2, frozenset(edges)), prefs))


def test_mutual_top_choice_swaps():
    star = two_agents({(0, 1), (0, 2)}, {1: (2, 1), 2: (1, 2)})
    assert houses(classic_ttc(star), 2) == (2, 1)
    assert houses(ttcd(star), 2) == (2, 1)
    chain = two_agents({(0, 1), (1, 2)}, {1: (2, 1), 2: (1, 2)})
    for mech in (modified_ttc, leave_and_share, yrmh_igyt, ttcd):
        assert houses(mech(chain), 2) == (2, 1)


def test_everyone_keeps_own_house_when_top_ranked():
    inst = MarketInstance(InvitationNetwork.from_parents([0, 1, 1]), {1: (1, 2, 3), 2: (2, 1, 3), 3: (3, 1, 2)})
    for mech in MechanismId:
        assert run(mech, build_market(inst))[0] == Allocation.identity(inst.agents)


@pytest.mark.parametrize("mech", list(MechanismId))
def test_single_agent_keeps_house(mech):
    inst = MarketInstance(InvitationNetwork.from_parents([0]), {1: (1,)})
    assert run(mech, build_market(inst))[0].houses(1) == (1,)


def test_leave_and_share_reconnects_orphans():
    # o->1->2->3->4: the chain from 1 closes on the cycle (2, 3), which
    # leaves 4 attached to 1; 1 and 4 then swap.
    inst = MarketInstance(
        InvitationNetwork.from_parents([0, 1, 2, 3]),
        {1: (4, 2, 1, 3), 2: (3, 2, 1, 4), 3: (2, 3, 4, 1), 4: (1, 4, 2, 3)},
    )
    las, trace = leave_and_share(build_market(inst))
    assert las.houses(4) == (4, 3, 2, 1)
    assert [r.cycles for r in trace.rounds] == [[(2, 3)], [(1, 4)]]
    assert trace.rounds[0].pointers == {1: 2, 2: 3, 3: 2}


def test_star_collapse():
    for seed in range(5):
        inst = star_instance(5, seed)
        m = build_market(inst)
        assert ttcd(m)[0] == classic_ttc(m)[0]
        for mech in (modified_ttc, leave_and_share, yrmh_igyt):
            assert mech(m)[0] == Allocation.identity(inst.agents)


def test_mechanism_registry():
    assert set(MECHANISMS) == set(MechanismId)
    assert MechanismId.CLASSIC_TTC not in NETWORKED
    assert mechanism_id("ttcd") is MechanismId.TTCD
    assert str(MechanismId.YRMH_IGYT) == "yrmh_igyt"
    with pytest.raises(MarketError):
        mechanism_id("serial_dictatorship")


def test_pointer_cycles_are_canonical():
    assert pointer_cycles({1: 2, 2: 1, 3: 3, 4: 5, 5: 6, 6: 4}) == [(1, 2), (3,), (4, 5, 6)]
    assert pointer_cycles({1: 2, 2: 3, 3: 2}) == [(2, 3)]


@pytest.mark.parametrize("mech", list(MechanismId))
def test_rounds_bounded_and_deterministic(mech):
    for seed in range(10):
        m = build_market(gen_instance(7, seed))
        first, trace = run(mech, m)
        again, _ = run(mech, m)
        assert first == again
        assert 1 <= len(trace.rounds) <= 7

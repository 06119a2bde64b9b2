"""Top trading cycles with diffusion (TTCD).

Each round every remaining agent points at its favourite house among its
remaining ancestors, descendants and itself; organizer children may also
point at their siblings. Competition between an inviter ``i`` and one of
its descendants ``j`` for the house of ``k`` is then settled before any
cycle trades:

* ``k`` is ``i`` or an ancestor of ``i``: ``j`` loses the house;
* ``k`` is a descendant of ``j``: ``i`` loses the house;
* ``k`` lies on the way from ``i`` down to ``j`` (``k == j`` included):
  the ``between`` rule decides. The default ``"walk"`` follows the
  current pointers from ``k`` and lets whichever side the trade reaches
  first keep the house; ``"chain"`` runs :func:`chain_adjudication`.

On graphs the ``rules`` switch picks the relation used for priority:
``"dominance"`` (default) ranks ``i`` above ``j`` only when ``i`` lies on
every invitation path to ``j``, ``"amended"`` keeps plain ancestry with the
two sibling amendments, and ``"tree"`` applies the tree rules unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..market import GRAPH, TREE, Allocation, Market, MarketError, Preference
from ._base import RoundRecord, RunTrace, pointer_cycles, top_house, trade

ANCESTOR = "ancestor"
DESCENDANT = "descendant"
SIBLING = "sibling"
CHAIN = "chain"

BETWEEN_RULES = ("walk", "chain", "ancestor", "none")
GRAPH_RULES = {"dominance": "dominance", "amended": True, "tree": False}


@dataclass
class PointerState:
    """Pointers of the remaining agents plus this round's exclusions."""

    remaining: set[int]
    exclusions: dict[int, set[int]]
    pointers: dict[int, int] = field(default_factory=dict)
    assignment: dict[int, int] = field(default_factory=dict)


class _Rules:
    def __init__(self, market: Market, prefs: Mapping[int, Preference], graph: bool | str, between: str = "walk"):
        self.m = market
        self.prefs = prefs
        self.graph = graph
        self.between = between
        if graph == "dominance":
            self.anc = market.dominators
            self.desc = {a: frozenset(b for b in market.participants if a in market.dominators[b]) for a in market.participants}
        else:
            self.anc, self.desc = market.ancestors, market.descendants
        self.order = sorted(market.participants, key=lambda a: (market.depth[a], a))
        roots = market.organizer_children
        self.base = {
            a: market.ancestors[a]
            | market.descendants[a]
            | {a}
            | (market.siblings[a] if a in roots else frozenset())
            for a in market.participants
        }

    def eligible(self, a: int, state: PointerState) -> set[int]:
        return (self.base[a] & state.remaining) - state.exclusions[a]

    def repoint(self, state: PointerState) -> None:
        state.pointers = {a: top_house(self.prefs[a], self.eligible(a, state)) for a in sorted(state.remaining)}

    def classify(self, i: int, j: int, k: int) -> str | None:
        m, anc, desc = self.m, self.anc, self.desc
        if j not in desc[i]:
            if self.graph == "dominance" and j in m.siblings[i] and k in m.descendants[i] and k in m.ancestors[j]:
                return SIBLING
            return None
        if k == i or k in anc[i]:
            if self.graph is True and j in m.siblings[k]:
                return None
            return ANCESTOR
        if k in desc[j]:
            return DESCENDANT
        if k in desc[i] and k in anc[j] or k == j:
            if self.graph is True and j in m.siblings[i] and k in m.ancestors[j]:
                return SIBLING
            return CHAIN
        return None

    def first_conflict(self, state: PointerState) -> tuple[str, int, int, int] | None:
        ptr = state.pointers
        for i in self.order:
            if i not in state.remaining:
                continue
            for j in sorted(self.m.descendants[i] & state.remaining):
                if ptr[j] == ptr[i]:
                    kind = self.classify(i, j, ptr[i])
                    if kind == CHAIN and self.between != "chain":
                        kind = self.settle_between(state, i, j, ptr[i])
                    if kind is not None:
                        return kind, i, j, ptr[i]
        return None

    def settle_between(self, state: PointerState, i: int, j: int, k: int) -> str | None:
        if self.between == "ancestor":
            return DESCENDANT if k == j else ANCESTOR
        if self.between == "none":
            return None
        return walk_from(state, self, i, j, k)


def resolve_conflicts(state: PointerState, rules: _Rules, record: RoundRecord | None = None) -> PointerState:
    """Apply the inviter/invitee conflict rules until no actionable conflict is left."""
    rules.repoint(state)
    while (conflict := rules.first_conflict(state)) is not None:
        kind, i, j, k = conflict
        if record is not None:
            record.resolutions.append(conflict)
        if kind in (ANCESTOR, SIBLING):
            state.exclusions[j].add(k)
        elif kind == DESCENDANT:
            state.exclusions[i].add(k)
        else:
            cycle = chain_adjudication(state, rules, i, j, k)
            if record is not None:
                record.adjudications.append((i, j, k, cycle))
        rules.repoint(state)
    return state


def walk_from(state: PointerState, rules: _Rules, i: int, j: int, k: int) -> str | None:
    """Follow current pointers from ``k`` to see whose side its trade heads for."""
    side_i = rules.anc[i] | {i}
    side_j = rules.desc[j] | {j}
    seen: set[int] = set()
    x = k
    while x not in seen:
        if x in side_j:
            return DESCENDANT
        if x in side_i:
            return ANCESTOR
        seen.add(x)
        x = state.pointers[x]
    return None


def chain_adjudication(state: PointerState, rules: _Rules, i: int, j: int, k: int) -> tuple[int, ...]:
    """Follow pointers from ``k`` until a cycle closes, then commit that cycle.

    Agents on ``i``'s side (``i`` and its ancestors) may only point at
    houses on that side; agents on ``j``'s side (``j`` and its
    descendants) likewise. The closing cycle trades immediately. When it
    contains ``k``, whichever of ``i`` and ``j`` is left out loses ``h_k``.
    """
    side_i = rules.anc[i] | {i}
    side_j = rules.desc[j] | {j}
    chain: list[int] = []
    ptr: dict[int, int] = {}
    x = k
    while x not in ptr:
        chain.append(x)
        options = rules.eligible(x, state)
        if x in side_i:
            options &= side_i
        elif x in side_j:
            options &= side_j
        if not options:
            raise RuntimeError(f"empty override set for agent {x} in chain from {k}")
        ptr[x] = top_house(rules.prefs[x], options)
        x = ptr[x]
    cycle = tuple(chain[chain.index(x):])
    trade(state.assignment, cycle, ptr)
    state.remaining.difference_update(cycle)
    if k in cycle:
        for loser in (i, j):
            if loser not in cycle:
                state.exclusions[loser].add(k)
    m_ = cycle.index(min(cycle))
    return cycle[m_:] + cycle[:m_]


def _ttcd(market: Market, prefs: Mapping[int, Preference] | None, graph: bool | str, between: str):
    if between not in BETWEEN_RULES:
        raise ValueError(f"unknown between rule {between!r}")
    prefs = market.preferences if prefs is None else prefs
    rules = _Rules(market, prefs, graph, between)
    remaining = set(market.participants)
    assignment: dict[int, int] = {}
    trace = RunTrace()
    while remaining:
        record = RoundRecord()
        state = PointerState(remaining, {a: set() for a in remaining}, assignment=assignment)
        resolve_conflicts(state, rules, record)
        cycles = pointer_cycles(state.pointers) if state.remaining else []
        for cyc in cycles:
            trade(assignment, cyc, state.pointers)
        record.pointers = dict(state.pointers)
        record.cycles = cycles
        trace.rounds.append(record)
        remaining = state.remaining.difference(a for cyc in cycles for a in cyc)
    return Allocation(assignment), trace


def ttcd_tree(market: Market, prefs: Mapping[int, Preference] | None = None, between: str = "walk"):
    if any(len(market.parents[a]) != 1 for a in market.participants):
        raise MarketError("ttcd_tree requires a tree-shaped market")
    return _ttcd(market, prefs, False, between)


def ttcd_graph(
    market: Market,
    prefs: Mapping[int, Preference] | None = None,
    between: str = "walk",
    rules: str = "dominance",
):
    """TTCD on an acyclic invitation graph.

    ``rules="tree"`` applies the tree rules unchanged, which is useful for
    showing why graphs need different conflict rules.
    """
    if rules not in GRAPH_RULES:
        raise ValueError(f"unknown graph rule set {rules!r}")
    return _ttcd(market, prefs, GRAPH_RULES[rules], between)


def ttcd(market: Market, prefs: Mapping[int, Preference] | None = None, between: str = "walk"):
    """Dispatch on the market's network shape."""
    if market.shape == TREE:
        return ttcd_tree(market, prefs, between)
    if market.shape == GRAPH:
        return ttcd_graph(market, prefs, between)
    raise MarketError(f"unknown shape {market.shape!r}")

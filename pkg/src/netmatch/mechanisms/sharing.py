"""Chain-following mechanisms with network reconnection (Leave and Share, YRMH-IGYT)."""

from __future__ import annotations

from collections import deque
from typing import Callable, Mapping

from ..market import ORGANIZER, Allocation, Market, Preference
from ._base import RoundRecord, RunTrace, top_house, trade


class _Contracted:
    """The reported network with removed agents contracted away."""

    def __init__(self, market: Market):
        self.parents = {a: set(market.parents[a]) for a in market.participants}

    @property
    def remaining(self):
        return self.parents.keys()

    def remove(self, gone: set[int]) -> None:
        old = self.parents
        memo: dict[int, set[int]] = {}

        def lift(p: int) -> set[int]:
            if p == ORGANIZER or p not in gone:
                return {p}
            if p not in memo:
                memo[p] = set().union(*(lift(q) for q in old[p]))
            return memo[p]

        self.parents = {
            a: set().union(*(lift(p) for p in ps)) for a, ps in old.items() if a not in gone
        }

    def children(self) -> dict[int, set[int]]:
        kids: dict[int, set[int]] = {a: set() for a in self.parents}
        kids[ORGANIZER] = set()
        for a, ps in self.parents.items():
            for p in ps:
                kids[p].add(a)
        return kids

    def depths(self, kids: dict[int, set[int]]) -> dict[int, int]:
        depth = {ORGANIZER: 0}
        queue = deque([ORGANIZER])
        while queue:
            v = queue.popleft()
            for c in sorted(kids[v]):
                if c not in depth:
                    depth[c] = depth[v] + 1
                    queue.append(c)
        return depth

    def ancestors(self, a: int) -> set[int]:
        seen: set[int] = set()
        stack = list(self.parents[a])
        while stack:
            v = stack.pop()
            if v != ORGANIZER and v not in seen:
                seen.add(v)
                stack.extend(self.parents[v])
        return seen


Neighbourhood = Callable[[_Contracted, dict[int, set[int]], int], set[int]]


def _chain_mechanism(market: Market, prefs: Mapping[int, Preference], upward: Neighbourhood):
    net = _Contracted(market)
    assignment: dict[int, int] = {}
    trace = RunTrace()
    while net.remaining:
        kids = net.children()
        depth = net.depths(kids)
        start = min(net.remaining, key=lambda a: (depth[a], a))
        chain: list[int] = []
        pointers: dict[int, int] = {}
        x = start
        while x not in pointers:
            chain.append(x)
            eligible = (upward(net, kids, x) | kids[x] | {x}) - {ORGANIZER}
            pointers[x] = top_house(prefs[x], eligible)
            x = pointers[x]
        cycle = tuple(chain[chain.index(x):])
        trade(assignment, cycle, pointers)
        m = cycle.index(min(cycle))
        trace.rounds.append(RoundRecord(pointers=pointers, cycles=[cycle[m:] + cycle[:m]]))
        net.remove(set(cycle))
    return Allocation(assignment), trace


def leave_and_share(market: Market, prefs: Mapping[int, Preference] | None = None):
    """Agents point within parents, children and themselves on the contracted network."""
    prefs = market.preferences if prefs is None else prefs
    return _chain_mechanism(market, prefs, lambda net, kids, a: net.parents[a])


def yrmh_igyt(market: Market, prefs: Mapping[int, Preference] | None = None):
    """Like :func:`leave_and_share` but agents may also point at any remaining ancestor."""
    prefs = market.preferences if prefs is None else prefs
    return _chain_mechanism(market, prefs, lambda net, kids, a: net.ancestors(a))

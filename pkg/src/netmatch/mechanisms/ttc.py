"""Simultaneous-pointing top trading cycles: classic and network-restricted."""

from __future__ import annotations

from typing import Callable, Mapping

from ..market import Allocation, Market, Preference
from ._base import RoundRecord, RunTrace, pointer_cycles, top_house, trade

Eligibility = Callable[[int, frozenset[int]], set[int]]


def _ttc_loop(market: Market, prefs: Mapping[int, Preference], eligible: Eligibility):
    remaining = frozenset(market.participants)
    assignment: dict[int, int] = {}
    trace = RunTrace()
    while remaining:
        pointers = {a: top_house(prefs[a], eligible(a, remaining)) for a in sorted(remaining)}
        cycles = pointer_cycles(pointers)
        for cyc in cycles:
            trade(assignment, cyc, pointers)
        trace.rounds.append(RoundRecord(pointers=pointers, cycles=cycles))
        remaining = remaining.difference(a for cyc in cycles for a in cyc)
    return Allocation(assignment), trace


def classic_ttc(market: Market, prefs: Mapping[int, Preference] | None = None):
    """Shapley-Scarf TTC over all participants, ignoring the network."""
    prefs = market.preferences if prefs is None else prefs
    return _ttc_loop(market, prefs, lambda a, remaining: set(remaining))


def modified_ttc(market: Market, prefs: Mapping[int, Preference] | None = None):
    """TTC where each agent may only point at houses of its parents, itself or descendants.

    Relations come from the reported network; removed agents are not
    replaced by reconnection.
    """
    prefs = market.preferences if prefs is None else prefs

    def eligible(a: int, remaining: frozenset[int]) -> set[int]:
        return (market.parents[a] | market.descendants[a] | {a}) & remaining

    return _ttc_loop(market, prefs, eligible)

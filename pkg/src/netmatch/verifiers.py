"""Brute-force checks of IR, Pareto efficiency, core stability and strategy-proofness.

Every checker returns a witness (violating agents, a dominating
allocation, a blocking coalition, a profitable deviation) or an empty
result, so failures can be inspected.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, permutations
from typing import Iterable, Iterator

from .market import Allocation, MarketError, MarketInstance, ReportProfile, build_market, rank
from .mechanisms import MechanismId, mechanism_id, run

PE_MAX_N = 8
CORE_MAX_N = 8
SP_MAX_N = 7


class CapabilityError(RuntimeError):
    """The instance is too large for exhaustive search."""


class CoalitionFamily(str, Enum):
    ALL_SUBSETS = "all_subsets"
    ADJACENT_PAIRS = "adjacent_pairs"
    PATH_SUBSETS = "path_subsets"


ENDOWMENTS = "endowments"
ASSIGNED = "assigned"


@dataclass(frozen=True)
class Deviation:
    agent: int
    reported_preference: tuple[int, ...]
    reported_children: frozenset[int]


@dataclass(frozen=True)
class SpCounterexample:
    deviation: Deviation
    truthful_outcome: int
    deviating_outcome: int


@dataclass(frozen=True)
class BlockingCoalition:
    members: frozenset[int]
    reallocation: dict[int, int]


def _ranks(instance: MarketInstance) -> dict[int, dict[int, int]]:
    return {i: {h: r for r, h in enumerate(p)} for i, p in instance.preferences.items()}


def check_ir(instance: MarketInstance, allocation: Allocation) -> list[int]:
    """Agents that strictly prefer their endowment to what they received."""
    return [
        i for i in instance.agents
        if rank(instance.preferences[i], i) < rank(instance.preferences[i], allocation.house_of(i))
    ]


def pareto_dominates(a: Allocation, b: Allocation, instance: MarketInstance) -> bool:
    ranks = _ranks(instance)
    strict = False
    for i in instance.agents:
        ra, rb = ranks[i][a.house_of(i)], ranks[i][b.house_of(i)]
        if ra > rb:
            return False
        strict = strict or ra < rb
    return strict


def _improving_assignment(
    members: list[int], houses: list[int], current: dict[int, int], ranks: dict[int, dict[int, int]]
) -> dict[int, int] | None:
    """Backtracking search for a weakly improving, somewhere strict assignment of ``houses`` to ``members``."""
    options = {
        i: sorted((h for h in houses if ranks[i][h] <= ranks[i][current[i]]), key=ranks[i].__getitem__)
        for i in members
    }
    order = sorted(members, key=lambda i: (len(options[i]), i))
    taken: set[int] = set()
    chosen: dict[int, int] = {}

    def search(idx: int, strict: bool) -> bool:
        if idx == len(order):
            return strict
        i = order[idx]
        for h in options[i]:
            if h in taken:
                continue
            taken.add(h)
            chosen[i] = h
            if search(idx + 1, strict or h != current[i]):
                return True
            taken.discard(h)
            del chosen[i]
        return False

    return dict(sorted(chosen.items())) if search(0, False) else None


def check_pareto_efficient(
    instance: MarketInstance, allocation: Allocation, max_n: int = PE_MAX_N
) -> Allocation | None:
    """``None`` when no allocation Pareto-dominates ``allocation``; else a witness."""
    if instance.n > max_n:
        raise CapabilityError(f"Pareto check is limited to n <= {max_n} (got {instance.n})")
    ranks = _ranks(instance)
    current = {i: allocation.house_of(i) for i in instance.agents}
    for houses in permutations(instance.agents):
        strict = False
        for i, h in zip(instance.agents, houses):
            if ranks[i][h] > ranks[i][current[i]]:
                break
            strict = strict or h != current[i]
        else:
            if strict:
                return Allocation.from_houses(houses)
    return None


def coalitions(
    instance: MarketInstance, family: CoalitionFamily | str, reports: ReportProfile | None = None
) -> Iterator[frozenset[int]]:
    """Candidate coalitions of ``family`` in a deterministic order (size, then members)."""
    family = CoalitionFamily(family)
    market = build_market(instance, reports)
    agents = sorted(market.participants)
    if family is CoalitionFamily.ALL_SUBSETS:
        for size in range(1, len(agents) + 1):
            for s in combinations(agents, size):
                yield frozenset(s)
    elif family is CoalitionFamily.ADJACENT_PAIRS:
        for p, c in sorted(market.edges):
            if p != 0:
                yield frozenset((p, c))
    else:
        seen = {frozenset(seg) for path in root_paths(market) for seg in _segments(path)}
        yield from sorted(seen, key=lambda s: (len(s), sorted(s)))


def root_paths(market) -> list[tuple[int, ...]]:
    """Every invitation path from the organizer to a participant, organizer omitted."""
    paths: list[tuple[int, ...]] = []

    def walk(v: int, prefix: tuple[int, ...]) -> None:
        for c in sorted(market.children.get(v, ())):
            path = prefix + (c,)
            paths.append(path)
            walk(c, path)

    walk(0, ())
    return paths


def _segments(path: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for lo in range(len(path)):
        for hi in range(lo + 1, len(path) + 1):
            yield path[lo:hi]


def find_blocking_coalition(
    instance: MarketInstance,
    allocation: Allocation,
    family: CoalitionFamily | str = CoalitionFamily.ALL_SUBSETS,
    *,
    houses: str = ENDOWMENTS,
    reports: ReportProfile | None = None,
    max_n: int = CORE_MAX_N,
) -> BlockingCoalition | None:
    """First coalition of ``family`` that can block ``allocation``.

    ``houses`` selects what a coalition may redistribute: its members'
    endowments (default) or the houses they currently hold.
    """
    family = CoalitionFamily(family)
    if family is CoalitionFamily.ALL_SUBSETS and instance.n > max_n:
        raise CapabilityError(f"core search is limited to n <= {max_n} (got {instance.n})")
    if houses not in (ENDOWMENTS, ASSIGNED):
        raise MarketError(f"unknown coalition house rule {houses!r}")
    ranks = _ranks(instance)
    current = {i: allocation.house_of(i) for i in instance.agents}
    for s in coalitions(instance, family, reports):
        members = sorted(s)
        pool = members if houses == ENDOWMENTS else [current[i] for i in members]
        found = _improving_assignment(members, pool, current, ranks)
        if found is not None:
            return BlockingCoalition(s, found)
    return None


def check_core_for_paths(instance: MarketInstance, allocation: Allocation, **kwargs) -> bool:
    return find_blocking_coalition(instance, allocation, CoalitionFamily.PATH_SUBSETS, **kwargs) is None


def child_subsets(children: Iterable[int]) -> list[frozenset[int]]:
    """Subsets ordered by size, then by the binary value of their membership mask."""
    kids = sorted(children)
    masks = sorted(range(1 << len(kids)), key=lambda m: (bin(m).count("1"), m))
    return [frozenset(c for b, c in enumerate(kids) if m >> b & 1) for m in masks]


def deviations(instance: MarketInstance, agent: int) -> Iterator[Deviation]:
    for kids in child_subsets(instance.network.children(agent)):
        for pref in permutations(range(1, instance.n + 1)):
            yield Deviation(agent, pref, kids)


def outcome(mechanism: MechanismId | str, instance: MarketInstance, reports: ReportProfile | None = None) -> Allocation:
    return run(mechanism, build_market(instance, reports))[0]


def check_strategy_proof(
    mechanism: MechanismId | str,
    instance: MarketInstance,
    max_n: int = SP_MAX_N,
    agents: Iterable[int] | None = None,
) -> SpCounterexample | None:
    """First profitable unilateral deviation from the truthful profile, if any.

    Agents are scanned in ascending order; for each, reported children
    subsets (smallest first) and then preference permutations in
    lexicographic order. Outcomes are compared under the true preference.
    """
    mechanism = mechanism_id(mechanism)
    if instance.n > max_n:
        raise CapabilityError(f"strategy-proofness check is limited to n <= {max_n} (got {instance.n})")
    truthful = ReportProfile.truthful(instance)
    base = outcome(mechanism, instance, truthful)
    for a in sorted(instance.agents if agents is None else agents):
        true_pref = instance.preferences[a]
        got = base.house_of(a)
        if true_pref[0] == got:
            continue
        better = set(true_pref[: rank(true_pref, got) - 1])
        children = dict(truthful.children)
        prefs = dict(truthful.preferences)
        for dev in deviations(instance, a):
            children[a] = dev.reported_children
            prefs[a] = dev.reported_preference
            alt = outcome(mechanism, instance, ReportProfile(children, prefs)).house_of(a)
            if alt in better:
                return SpCounterexample(dev, got, alt)
    return None

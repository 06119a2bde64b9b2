"""Networked housing market model.

Agents are numbered ``1..n`` and agent ``i`` is endowed with house ``i``.
Node ``0`` is the organizer: it owns no house and always invites all of
its children. An edge ``(p, c)`` means ``p`` invites ``c``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

ORGANIZER = 0

TREE = "tree"
GRAPH = "graph"
SHAPES = (TREE, GRAPH)

Preference = tuple[int, ...]


class MarketError(ValueError):
    """Raised when an instance, report profile or allocation is invalid."""


def rank(pref: Sequence[int], house: int) -> int:
    """1-based position of ``house`` in ``pref`` (1 is the favourite)."""
    try:
        return pref.index(house) + 1
    except ValueError:
        raise MarketError(f"house {house} not in preference {tuple(pref)}") from None


def check_permutation(pref: Sequence[int], n: int) -> Preference:
    pref = tuple(int(h) for h in pref)
    if sorted(pref) != list(range(1, n + 1)):
        raise MarketError(f"preference {pref} is not a permutation of houses 1..{n}")
    return pref


@dataclass(frozen=True)
class InvitationNetwork:
    """Directed invitation edges over agents ``1..n`` rooted at the organizer."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((int(p), int(c)) for p, c in self.edges))
        for p, c in self.edges:
            if not (0 <= p <= self.n and 1 <= c <= self.n):
                raise MarketError(f"edge ({p}, {c}) references an unknown agent")
            if p == c:
                raise MarketError(f"self-loop on agent {p}")

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "InvitationNetwork":
        """Tree from a parent list: ``parents[k - 1]`` is the parent of agent ``k``."""
        return cls(len(parents), frozenset((p, k) for k, p in enumerate(parents, start=1)))

    def children(self, i: int) -> frozenset[int]:
        return frozenset(c for p, c in self.edges if p == i)

    def parents(self, i: int) -> frozenset[int]:
        return frozenset(p for p, c in self.edges if c == i)

    @property
    def organizer_children(self) -> frozenset[int]:
        return self.children(ORGANIZER)

    def is_tree(self) -> bool:
        indeg = [0] * (self.n + 1)
        for _, c in self.edges:
            indeg[c] += 1
        return all(d == 1 for d in indeg[1:]) and self.is_acyclic()

    def is_acyclic(self) -> bool:
        return topological_order(self.n, self.edges) is not None

    def validate(self, shape: str) -> None:
        if shape not in SHAPES:
            raise MarketError(f"unknown network shape {shape!r}")
        if not self.is_acyclic():
            raise MarketError("invitation network contains a cycle")
        reached = reachable(self.edges)
        missing = sorted(set(range(1, self.n + 1)) - reached)
        if missing:
            raise MarketError(f"agents {missing} are not reachable from the organizer")
        if shape == TREE and not self.is_tree():
            raise MarketError("tree network requires exactly one parent per agent")


def topological_order(n: int, edges: Iterable[tuple[int, int]]) -> list[int] | None:
    """Kahn's algorithm over nodes ``0..n``; ``None`` when a cycle exists."""
    succ: dict[int, list[int]] = {v: [] for v in range(n + 1)}
    indeg = [0] * (n + 1)
    for p, c in edges:
        succ[p].append(c)
        indeg[c] += 1
    queue = deque(v for v in range(n + 1) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for c in succ[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return order if len(order) == n + 1 else None


def reachable(edges: Iterable[tuple[int, int]], source: int = ORGANIZER) -> set[int]:
    succ: dict[int, list[int]] = {}
    for p, c in edges:
        succ.setdefault(p, []).append(c)
    seen = {source}
    stack = [source]
    while stack:
        for c in succ.get(stack.pop(), ()):
            if c not in seen:
                seen.add(c)
                stack.append(c)
    seen.discard(source)
    return seen


@dataclass(frozen=True)
class MarketInstance:
    """True types of all agents: invitation network plus strict preferences."""

    network: InvitationNetwork
    preferences: Mapping[int, Preference] = field(hash=False)
    shape: str = TREE

    def __post_init__(self):
        n = self.network.n
        if n < 1:
            raise MarketError("a market needs at least one agent")
        if set(self.preferences) != set(range(1, n + 1)):
            raise MarketError(f"preferences must be given for exactly agents 1..{n}")
        prefs = {i: check_permutation(self.preferences[i], n) for i in range(1, n + 1)}
        object.__setattr__(self, "preferences", prefs)
        self.network.validate(self.shape)

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def agents(self) -> range:
        return range(1, self.n + 1)

    def truthful(self) -> "ReportProfile":
        return ReportProfile.truthful(self)


@dataclass(frozen=True)
class ReportProfile:
    """Reported children and preferences for every agent."""

    children: Mapping[int, frozenset[int]] = field(hash=False)
    preferences: Mapping[int, Preference] = field(hash=False)

    @classmethod
    def truthful(cls, instance: MarketInstance) -> "ReportProfile":
        net = instance.network
        return cls(
            {i: net.children(i) for i in range(net.n + 1)},
            dict(instance.preferences),
        )

    @classmethod
    def with_overrides(
        cls,
        instance: MarketInstance,
        children: Mapping[int, Iterable[int]] | None = None,
        preferences: Mapping[int, Sequence[int]] | None = None,
    ) -> "ReportProfile":
        """Truthful profile with some agents' reports replaced."""
        base = cls.truthful(instance)
        kids = dict(base.children)
        prefs = dict(base.preferences)
        for i, cs in (children or {}).items():
            kids[int(i)] = frozenset(int(c) for c in cs)
        for i, p in (preferences or {}).items():
            prefs[int(i)] = tuple(p)
        profile = cls(kids, prefs)
        profile.validate(instance)
        return profile

    def validate(self, instance: MarketInstance) -> None:
        net = instance.network
        for i, cs in self.children.items():
            if not 0 <= i <= net.n:
                raise MarketError(f"report for unknown agent {i}")
            extra = set(cs) - net.children(i)
            if extra:
                raise MarketError(f"agent {i} reports {sorted(extra)} which are not its children")
        if ORGANIZER in self.children and self.children[ORGANIZER] != net.organizer_children:
            raise MarketError("the organizer always invites all of its children")
        for i, p in self.preferences.items():
            if not 1 <= i <= net.n:
                raise MarketError(f"preference report for unknown agent {i}")
            check_permutation(p, net.n)


@dataclass(frozen=True)
class Market:
    """The active market induced by a report profile.

    Relations are computed on the reported subgraph restricted to the
    participants. ``depth`` is the shortest invitation distance from the
    organizer.
    """

    n: int
    shape: str
    participants: frozenset[int]
    edges: frozenset[tuple[int, int]]
    preferences: Mapping[int, Preference] = field(hash=False, repr=False)
    parents: Mapping[int, frozenset[int]] = field(hash=False, repr=False)
    children: Mapping[int, frozenset[int]] = field(hash=False, repr=False)
    ancestors: Mapping[int, frozenset[int]] = field(hash=False, repr=False)
    descendants: Mapping[int, frozenset[int]] = field(hash=False, repr=False)
    siblings: Mapping[int, frozenset[int]] = field(hash=False, repr=False)
    depth: Mapping[int, int] = field(hash=False, repr=False)
    dominators: Mapping[int, frozenset[int]] = field(hash=False, repr=False, default=None)

    @property
    def organizer_children(self) -> frozenset[int]:
        return self.children[ORGANIZER]

    def relations(self, i: int) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        """``(ancestors, descendants, siblings)`` of participant ``i``."""
        if i not in self.participants:
            raise MarketError(f"agent {i} is not in the market")
        return self.ancestors[i], self.descendants[i], self.siblings[i]

    def path_set(self, i: int) -> frozenset[int]:
        """Agents on the organizer-to-``i`` path(s), ``i`` included."""
        return self.ancestors[i] | {i}

    def rank_table(self) -> dict[int, dict[int, int]]:
        return {i: {h: r for r, h in enumerate(self.preferences[i], start=1)} for i in self.participants}


def build_market(instance: MarketInstance, reports: ReportProfile | None = None) -> Market:
    """Derive the participating market from an instance and a report profile."""
    if reports is None:
        reports = ReportProfile.truthful(instance)
    reports.validate(instance)
    net = instance.network
    reported = {ORGANIZER: net.organizer_children}
    for i in instance.agents:
        reported[i] = frozenset(reports.children.get(i, net.children(i)))
    all_edges = [(p, c) for p, cs in reported.items() for c in cs]
    participants = frozenset(reachable(all_edges))
    edges = frozenset((p, c) for p, c in all_edges if c in participants and (p == ORGANIZER or p in participants))
    prefs = {i: tuple(reports.preferences.get(i, instance.preferences[i])) for i in participants}
    return market_from_edges(net.n, instance.shape, participants, edges, prefs)


def market_from_edges(
    n: int,
    shape: str,
    participants: frozenset[int],
    edges: frozenset[tuple[int, int]],
    preferences: Mapping[int, Preference],
) -> Market:
    nodes = [ORGANIZER, *sorted(participants)]
    parents = {v: set() for v in nodes}
    children = {v: set() for v in nodes}
    for p, c in edges:
        parents[c].add(p)
        children[p].add(c)

    def closure(start: int, step: Mapping[int, set[int]]) -> frozenset[int]:
        seen: set[int] = set()
        stack = list(step[start])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(step[v])
        seen.discard(ORGANIZER)
        return frozenset(seen)

    ancestors = {i: closure(i, parents) for i in participants}
    descendants = {i: closure(i, children) for i in participants}
    siblings = {
        i: frozenset(s for p in parents[i] for s in children[p] if s != i) for i in participants
    }
    depth = {ORGANIZER: 0}
    queue = deque([ORGANIZER])
    while queue:
        v = queue.popleft()
        for c in sorted(children[v]):
            if c not in depth:
                depth[c] = depth[v] + 1
                queue.append(c)
    # d dominates a when every invitation path from the organizer to a passes d
    dominators: dict[int, set[int]] = {a: set() for a in participants}
    for d in participants:
        cut = reachable((p, c) for p, c in edges if d not in (p, c))
        for a in participants - cut - {d}:
            dominators[a].add(d)
    return Market(
        n=n,
        shape=shape,
        participants=participants,
        edges=edges,
        preferences=dict(preferences),
        parents={v: frozenset(s) for v, s in parents.items()},
        children={v: frozenset(s) for v, s in children.items()},
        ancestors=ancestors,
        descendants=descendants,
        siblings=siblings,
        depth=depth,
        dominators={a: frozenset(s) for a, s in dominators.items()},
    )


@dataclass(frozen=True)
class Allocation:
    """Houses assigned to market participants; outsiders keep their endowment."""

    assignment: Mapping[int, int] = field(hash=False)

    def __post_init__(self):
        assignment = {int(i): int(h) for i, h in self.assignment.items()}
        if sorted(assignment.values()) != sorted(assignment):
            raise MarketError(f"allocation {assignment} is not a bijection on its participants' houses")
        object.__setattr__(self, "assignment", dict(sorted(assignment.items())))

    @classmethod
    def identity(cls, agents: Iterable[int]) -> "Allocation":
        return cls({i: i for i in agents})

    @classmethod
    def from_houses(cls, houses: Sequence[int]) -> "Allocation":
        """``houses[k]`` is the house of agent ``k + 1``."""
        return cls({i: h for i, h in enumerate(houses, start=1)})

    def house_of(self, i: int) -> int:
        return self.assignment.get(i, i)

    def houses(self, n: int) -> tuple[int, ...]:
        return tuple(self.house_of(i) for i in range(1, n + 1))

    def __eq__(self, other):
        if not isinstance(other, Allocation):
            return NotImplemented
        return self.assignment == other.assignment

    def __hash__(self):
        return hash(tuple(self.assignment.items()))


@dataclass(frozen=True)
class OutcomeMetrics:
    swap_count: int
    per_agent_improvement: tuple[int, ...]
    average_improvement: Fraction


def metrics(instance: MarketInstance, allocation: Allocation) -> OutcomeMetrics:
    """Swap count and rank improvements, averaged over all ``n`` agents."""
    n = instance.n
    if any(not 1 <= i <= n for i in allocation.assignment):
        raise MarketError("allocation references agents outside the instance")
    houses = allocation.houses(n)
    swaps = sum(1 for i, h in enumerate(houses, start=1) if h != i)
    gains = tuple(
        rank(instance.preferences[i], i) - rank(instance.preferences[i], h)
        for i, h in enumerate(houses, start=1)
    )
    return OutcomeMetrics(swaps, gains, Fraction(sum(gains), n))

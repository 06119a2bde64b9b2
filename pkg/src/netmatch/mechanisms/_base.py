from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


@dataclass
class RoundRecord:
    """What happened in one round of a mechanism."""

    pointers: dict[int, int] = field(default_factory=dict)
    resolutions: list[tuple] = field(default_factory=list)
    adjudications: list[tuple] = field(default_factory=list)
    cycles: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class RunTrace:
    rounds: list[RoundRecord] = field(default_factory=list)

    def removed(self) -> list[tuple[int, ...]]:
        """Every cycle that traded, in removal order (chain commits included)."""
        out = []
        for rnd in self.rounds:
            out.extend(cyc for _, _, _, cyc in rnd.adjudications if cyc)
            out.extend(rnd.cycles)
        return out

    def to_dict(self) -> dict:
        return {
            "rounds": [
                {
                    "pointers": {str(a): h for a, h in sorted(r.pointers.items())},
                    "resolutions": [list(x) for x in r.resolutions],
                    "adjudications": [
                        {"i": i, "j": j, "k": k, "cycle": list(c)} for i, j, k, c in r.adjudications
                    ],
                    "cycles": [list(c) for c in r.cycles],
                }
                for r in self.rounds
            ]
        }


def top_house(pref: Sequence[int], eligible: Iterable[int] | set[int]) -> int:
    """Most preferred house of ``pref`` among ``eligible`` (owner ids)."""
    eligible = eligible if isinstance(eligible, (set, frozenset)) else set(eligible)
    for h in pref:
        if h in eligible:
            return h
    raise RuntimeError("no eligible house; the agent's own house should always be available")


def pointer_cycles(pointers: Mapping[int, int]) -> list[tuple[int, ...]]:
    """Cycles of the functional graph ``agent -> owner of the house it points at``.

    Each cycle is rotated to start at its smallest agent; cycles are sorted.
    """
    state: dict[int, int] = {}
    cycles = []
    for start in sorted(pointers):
        if start in state:
            continue
        path = []
        v = start
        while v not in state:
            state[v] = 1
            path.append(v)
            v = pointers[v]
        if state[v] == 1 and v in path:
            cyc = path[path.index(v):]
            m = cyc.index(min(cyc))
            cycles.append(tuple(cyc[m:] + cyc[:m]))
        for u in path:
            state[u] = 2
    return sorted(cycles)


def trade(assignment: dict[int, int], cycle: Sequence[int], pointers: Mapping[int, int]) -> None:
    for a in cycle:
        assignment[a] = pointers[a]

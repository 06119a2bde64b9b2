"""Seeded random invitation networks and preference profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market import GRAPH, ORGANIZER, SHAPES, TREE, InvitationNetwork, MarketError, MarketInstance

_NETWORK, _PREFS, _EXTRA = 1, 2, 3


@dataclass(frozen=True)
class GenConfig:
    n: int
    shape: str = TREE
    extra_edges: int = 0
    master_seed: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise MarketError(f"unknown shape {self.shape!r}")
        if self.shape == TREE and self.extra_edges:
            raise MarketError("extra_edges only applies to graph networks")


def derive_seed(*parts: int) -> int:
    """64-bit seed that depends only on ``parts`` (order matters)."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1, np.uint64)[0])


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *stream]))


def gen_tree(n: int, seed: int) -> InvitationNetwork:
    """Uniform random recursive tree: agent ``k`` picks its parent uniformly from ``0..k-1``."""
    if n < 1:
        raise MarketError("n must be at least 1")
    rng = _rng(seed, _NETWORK)
    parents = [int(rng.integers(0, k)) for k in range(1, n + 1)]
    return InvitationNetwork.from_parents(parents)


def max_extra_edges(n: int) -> int:
    return n * (n - 1) // 2 - (n - 1)


def gen_dag(n: int, extra_edges: int, seed: int) -> InvitationNetwork:
    """Random recursive tree plus ``extra_edges`` forward agent-to-agent edges."""
    if extra_edges < 0 or extra_edges > max_extra_edges(n):
        raise MarketError(f"cannot add {extra_edges} extra edges to a {n}-agent network")
    tree = gen_tree(n, seed)
    if extra_edges == 0:
        return tree
    candidates = [(p, c) for c in range(2, n + 1) for p in range(1, c) if (p, c) not in tree.edges]
    rng = _rng(seed, _EXTRA)
    picked = rng.choice(len(candidates), size=extra_edges, replace=False)
    return InvitationNetwork(n, tree.edges | {candidates[int(x)] for x in picked})


def gen_preferences(n: int, seed: int) -> dict[int, tuple[int, ...]]:
    """Independent uniformly random strict rankings, one seeded stream per agent."""
    if n < 1:
        raise MarketError("n must be at least 1")
    return {i: tuple(int(h) for h in _rng(seed, _PREFS, i).permutation(np.arange(1, n + 1))) for i in range(1, n + 1)}


def gen_instance(n: int, seed: int, shape: str = TREE, extra_edges: int = 0) -> MarketInstance:
    GenConfig(n, shape, extra_edges, seed)
    network = gen_tree(n, seed) if shape == TREE else gen_dag(n, extra_edges, seed)
    return MarketInstance(network, gen_preferences(n, seed), shape)


def star_instance(n: int, seed: int) -> MarketInstance:
    """Every agent invited directly by the organizer."""
    network = InvitationNetwork(n, frozenset((ORGANIZER, i) for i in range(1, n + 1)))
    return MarketInstance(network, gen_preferences(n, seed), TREE)


def trial_seed(master_seed: int, n: int, trial: int) -> int:
    return derive_seed(master_seed, n, trial)


__all__ = [
    "GRAPH",
    "TREE",
    "GenConfig",
    "derive_seed",
    "gen_dag",
    "gen_instance",
    "gen_preferences",
    "gen_tree",
    "max_extra_edges",
    "star_instance",
    "trial_seed",
]

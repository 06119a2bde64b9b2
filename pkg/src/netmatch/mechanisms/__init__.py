"""House allocation mechanisms behind a single ``run`` entry point."""

from __future__ import annotations

from enum import Enum
from typing import Mapping

from ..market import Allocation, Market, MarketError, Preference
from ._base import RoundRecord, RunTrace, pointer_cycles
from .sharing import leave_and_share, yrmh_igyt
from .ttc import classic_ttc, modified_ttc
from .ttcd import PointerState, chain_adjudication, resolve_conflicts, ttcd, ttcd_graph, ttcd_tree


class MechanismId(str, Enum):
    CLASSIC_TTC = "classic_ttc"
    MODIFIED_TTC = "modified_ttc"
    LEAVE_AND_SHARE = "leave_and_share"
    YRMH_IGYT = "yrmh_igyt"
    TTCD = "ttcd"

    def __str__(self) -> str:
        return self.value


MECHANISMS = {
    MechanismId.CLASSIC_TTC: classic_ttc,
    MechanismId.MODIFIED_TTC: modified_ttc,
    MechanismId.LEAVE_AND_SHARE: leave_and_share,
    MechanismId.YRMH_IGYT: yrmh_igyt,
    MechanismId.TTCD: ttcd,
}

NETWORKED = (
    MechanismId.MODIFIED_TTC,
    MechanismId.LEAVE_AND_SHARE,
    MechanismId.YRMH_IGYT,
    MechanismId.TTCD,
)


def mechanism_id(name: str | MechanismId) -> MechanismId:
    try:
        return MechanismId(name)
    except ValueError:
        known = ", ".join(m.value for m in MechanismId)
        raise MarketError(f"unknown mechanism {name!r} (expected one of {known})") from None


def run(
    mechanism: str | MechanismId,
    market: Market,
    prefs: Mapping[int, Preference] | None = None,
) -> tuple[Allocation, RunTrace]:
    """Run ``mechanism`` on ``market``; ``prefs`` defaults to the market's reported preferences."""
    if not market.participants:
        return Allocation({}), RunTrace()
    return MECHANISMS[mechanism_id(mechanism)](market, prefs)


__all__ = [
    "MECHANISMS",
    "NETWORKED",
    "MechanismId",
    "PointerState",
    "RoundRecord",
    "RunTrace",
    "chain_adjudication",
    "classic_ttc",
    "leave_and_share",
    "mechanism_id",
    "modified_ttc",
    "pointer_cycles",
    "resolve_conflicts",
    "run",
    "ttcd",
    "ttcd_graph",
    "ttcd_tree",
    "yrmh_igyt",
]

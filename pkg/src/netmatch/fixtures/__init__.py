"""Small hand-built instances used by the tests and documentation."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..io import parse_instance, parse_report
from ..market import MarketInstance, ReportProfile

NAMES = ("p1", "p3", "p4", "example1", "case1", "case2")


def path(name: str) -> Path:
    """Filesystem path of ``name`` (``.json`` is appended when missing)."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files(__name__).joinpath(name)))


def load(name: str) -> MarketInstance:
    return parse_instance(path(name).read_text(encoding="utf-8"))


def load_report(name: str, instance: MarketInstance) -> ReportProfile:
    return parse_report(path(f"{name}.report").read_text(encoding="utf-8"), instance)

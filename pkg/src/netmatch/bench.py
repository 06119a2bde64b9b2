"""Benchmark runner: swaps and rank improvement per mechanism across network sizes."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .generators import gen_instance, max_extra_edges, trial_seed
from .market import TREE, MarketError, MarketInstance, build_market, metrics
from .mechanisms import NETWORKED, MechanismId, mechanism_id, run

CSV_HEADER = ("size", "trial", "seed", "mechanism", "swaps", "avg_improvement", "runtime_ms")
DEFAULT_SIZES = (10, 20, 30, 40, 50)
METRICS = {"swaps": "swaps", "improvement": "avg_improvement"}


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...] = DEFAULT_SIZES
    trials_per_size: int = 50
    mechanisms: tuple[MechanismId, ...] = NETWORKED
    master_seed: int = 0
    shape: str = TREE
    extra_edges: int = 0

    def __post_init__(self):
        if not self.sizes:
            raise MarketError("sizes must not be empty")
        if any(n < 1 for n in self.sizes):
            raise MarketError("sizes must be positive")
        if self.trials_per_size < 1:
            raise MarketError("trials_per_size must be at least 1")
        if not self.mechanisms:
            raise MarketError("mechanisms must not be empty")
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "mechanisms", tuple(mechanism_id(m) for m in self.mechanisms))


@dataclass(frozen=True)
class BenchRecord:
    size: int
    trial: int
    seed: int
    mechanism: MechanismId
    swap_count: int
    average_improvement: Fraction
    runtime_ms: float = field(compare=False)

    def row(self) -> tuple:
        return (
            self.size,
            self.trial,
            self.seed,
            self.mechanism.value,
            self.swap_count,
            f"{float(self.average_improvement):.6f}",
            f"{self.runtime_ms:.3f}",
        )


@dataclass(frozen=True)
class SummaryRow:
    size: int
    mechanism: MechanismId
    count: int
    mean_swaps: float
    sd_swaps: float
    mean_improvement: float
    sd_improvement: float


def measure(
    instance: MarketInstance, mechanisms: Iterable[MechanismId | str], size: int, trial: int, seed: int
) -> list[BenchRecord]:
    """Run each mechanism on the truthful market of ``instance``."""
    market = build_market(instance)
    out = []
    for mech in mechanisms:
        mech = mechanism_id(mech)
        start = time.perf_counter()
        allocation, _ = run(mech, market)
        elapsed = (time.perf_counter() - start) * 1000
        m = metrics(instance, allocation)
        out.append(BenchRecord(size, trial, seed, mech, m.swap_count, m.average_improvement, elapsed))
    return out


def run_benchmark(config: BenchConfig) -> list[BenchRecord]:
    records = []
    for size in config.sizes:
        extra = min(config.extra_edges, max_extra_edges(size))
        for trial in range(config.trials_per_size):
            seed = trial_seed(config.master_seed, size, trial)
            instance = gen_instance(size, seed, config.shape, extra)
            records.extend(measure(instance, config.mechanisms, size, trial, seed))
    return sort_records(records)


def sort_records(records: Iterable[BenchRecord]) -> list[BenchRecord]:
    return sorted(records, key=lambda r: (r.size, r.trial, r.mechanism.value))


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(r.row() for r in sort_records(records))
    return buf.getvalue()


def write_csv(records: Iterable[BenchRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    if len(values) == 1:
        return float(values[0]), 0.0
    return statistics.fmean(values), statistics.stdev(values)


def summarize(records: Iterable[BenchRecord]) -> list[SummaryRow]:
    """Mean and sample standard deviation per (size, mechanism)."""
    groups: dict[tuple[int, MechanismId], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.size, r.mechanism), []).append(r)
    if not groups:
        raise MarketError("cannot summarize an empty record list")
    rows = []
    for (size, mech), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        swaps = _mean_sd([r.swap_count for r in rs])
        gains = _mean_sd([float(r.average_improvement) for r in rs])
        rows.append(SummaryRow(size, mech, len(rs), swaps[0], swaps[1], gains[0], gains[1]))
    return rows


def emit_plot(summary: Sequence[SummaryRow], metric: str, path: str | Path) -> Path:
    """Line chart of the mean ``metric`` per size, one series per mechanism, as SVG."""
    if metric not in METRICS:
        raise MarketError(f"metric must be one of {sorted(METRICS)}")
    if not summary:
        raise MarketError("cannot plot an empty summary")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    attr = "mean_swaps" if metric == "swaps" else "mean_improvement"
    series: dict[MechanismId, list[tuple[int, float]]] = {}
    for row in summary:
        series.setdefault(row.mechanism, []).append((row.size, getattr(row, attr)))

    with matplotlib.rc_context({"svg.hashsalt": "netmatch", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for mech, pts in series.items():
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=mech.value, gid=f"series-{mech.value}")
        ax.set_xlabel("agents")
        ax.set_ylabel("mean swaps" if metric == "swaps" else "mean position improvement")
        ax.legend()
        path = Path(path)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


__all__ = [
    "CSV_HEADER",
    "DEFAULT_SIZES",
    "BenchConfig",
    "BenchRecord",
    "SummaryRow",
    "emit_plot",
    "measure",
    "records_to_csv",
    "run_benchmark",
    "summarize",
    "write_csv",
]

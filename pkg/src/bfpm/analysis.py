"""Object movement analysis: how strongly each object also belongs to its runner-up cluster."""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np

from .core import PartitionMatrix
from .errors import ComputationError

DEFAULT_THRESHOLD = 0.5


class SortOrder(str, enum.Enum):
    BY_INDEX = "index"
    BY_GAP = "gap"


@dataclass(frozen=True)
class MovementRecord:
    object_index: int
    assigned_cluster: int
    runner_up_cluster: int
    u_assigned: float
    u_runner_up: float
    critical: bool

    @property
    def gap(self) -> float:
        return self.u_assigned - self.u_runner_up


@dataclass(frozen=True)
class MovementReport:
    records: tuple[MovementRecord, ...]
    threshold: float
    critical_histogram: tuple[int, ...]

    @property
    def critical_count(self) -> int:
        return sum(r.critical for r in self.records)


def movement_report(partition: PartitionMatrix, threshold: float = DEFAULT_THRESHOLD) -> MovementReport:
    """Assigned and runner-up cluster per object; critical when the runner-up membership reaches ``threshold``."""
    if partition.c < 2:
        raise ComputationError("analysis: movement undefined for a single cluster")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"analysis: threshold must lie in [0, 1], got {threshold}")
    u = partition.values
    # stable sort on -u keeps the lowest index first among ties
    order = np.argsort(-u, axis=0, kind="stable")
    cols = np.arange(partition.n)
    first, second = order[0], order[1]
    upper, lower = u[first, cols], u[second, cols]
    critical = lower >= threshold
    records = tuple(
        MovementRecord(int(j), int(first[j]), int(second[j]), float(upper[j]), float(lower[j]), bool(critical[j]))
        for j in cols
    )
    hist = np.bincount(first[critical], minlength=partition.c)
    return MovementReport(records, float(threshold), tuple(int(h) for h in hist))


def movement_plot_data(report: MovementReport, sort: SortOrder | str = SortOrder.BY_INDEX):
    """Object order plus the aligned upper (assigned) and lower (runner-up) membership series."""
    sort = SortOrder(sort)
    records = list(report.records)
    if sort is SortOrder.BY_GAP:
        records.sort(key=lambda r: (r.gap, r.object_index))
    order = np.array([r.object_index for r in records], dtype=int)
    upper = np.array([r.u_assigned for r in records])
    lower = np.array([r.u_runner_up for r in records])
    return order, upper, lower


TSV_COLUMNS = ("object_index", "assigned", "runner_up", "u_assigned", "u_runner_up", "gap", "critical")


def movement_tsv(report: MovementReport, sort: SortOrder | str = SortOrder.BY_INDEX) -> str:
    order, _, _ = movement_plot_data(report, sort)
    out = io.StringIO()
    out.write("\t".join(TSV_COLUMNS) + "\n")
    for j in order:
        r = report.records[j]
        out.write(
            f"{r.object_index}\t{r.assigned_cluster}\t{r.runner_up_cluster}\t"
            f"{r.u_assigned:.12g}\t{r.u_runner_up:.12g}\t{r.gap:.12g}\t{int(r.critical)}\n"
        )
    return out.getvalue()

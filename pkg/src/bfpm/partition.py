"""Partition-class validators and static distance-to-membership assignment.

Also holds the two small synthetic worlds used to illustrate multi-cluster
membership: lines crossing at the origin, and integers divisible by 2 or 5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Dataset, PartitionClass, PartitionMatrix
from .errors import ComputationError, DataError

DEFAULT_TOL = 1e-9
DEFAULT_D_DELTA = 2.0


@dataclass(frozen=True)
class Violation:
    constraint: str
    cluster: Optional[int]
    obj: Optional[int]
    value: float


@dataclass(frozen=True)
class PartitionClassReport:
    class_tested: PartitionClass
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.satisfied


def _values(u) -> np.ndarray:
    return np.asarray(getattr(u, "values", u), dtype=np.float64)


def validate_partition(
    partition: PartitionMatrix,
    partition_class: PartitionClass | str | None = None,
    tol: float = DEFAULT_TOL,
) -> PartitionClassReport:
    """Check a membership matrix against the constraints of one partition class.

    ``partition_class`` defaults to the class the matrix is tagged with.
    Violations are collected, never raised.
    """
    if tol < 0:
        raise ValueError("partition: tolerance must be non-negative")
    if partition_class is None:
        partition_class = partition.partition_class
    cls = PartitionClass(partition_class)
    u = _values(partition)
    c, n = u.shape
    found: list[Violation] = []

    bad = np.argwhere((u < -tol) | (u > 1.0 + tol) | ~np.isfinite(u))
    found += [Violation("range", int(i), int(j), float(u[i, j])) for i, j in bad]

    if cls is PartitionClass.CRISP:
        off = np.minimum(np.abs(u), np.abs(u - 1.0)) > tol
        found += [Violation("binary", int(i), int(j), float(u[i, j])) for i, j in np.argwhere(off)]

    col_sum = u.sum(axis=0)
    row_sum = u.sum(axis=1)
    if cls in (PartitionClass.CRISP, PartitionClass.FUZZY):
        for j in np.flatnonzero(np.abs(col_sum - 1.0) > tol):
            found.append(Violation("column_sum", None, int(j), float(col_sum[j])))
        for i in np.flatnonzero(~((row_sum > 0.0) & (row_sum < n))):
            found.append(Violation("row_sum", int(i), None, float(row_sum[i])))
    else:
        for i in np.flatnonzero(~((row_sum > 0.0) & (row_sum <= n + tol))):
            found.append(Violation("row_sum", int(i), None, float(row_sum[i])))
        if cls is PartitionClass.POSSIBILISTIC:
            col_max = u.max(axis=0) if c else np.zeros(n)
            for j in np.flatnonzero(~(col_max > 0.0)):
                found.append(Violation("column_max", None, int(j), float(col_max[j])))
        else:
            col_mean = col_sum / c if c else np.zeros(n)
            for j in np.flatnonzero(~((col_mean > 0.0) & (col_mean <= 1.0 + tol))):
                found.append(Violation("column_mean", None, int(j), float(col_mean[j])))
    return PartitionClassReport(cls, tuple(found))


def class_hierarchy_check(partition: PartitionMatrix, tol: float = DEFAULT_TOL) -> set[PartitionClass]:
    """Every partition class whose constraints the matrix satisfies."""
    return {cls for cls in PartitionClass if validate_partition(partition, cls, tol).satisfied}


def static_membership(distance: float, d_delta: float = DEFAULT_D_DELTA) -> float:
    """Piecewise-linear membership: 1 at distance 0, falling to 0 at ``d_delta``."""
    if distance < 0:
        raise ValueError(f"partition: negative distance {distance}")
    if not d_delta > 0:
        raise ValueError(f"partition: d_delta must be positive, got {d_delta}")
    if distance == 0:
        return 1.0
    if distance <= d_delta:
        return 1.0 - distance / d_delta
    return 0.0


def _static_matrix(distances: np.ndarray, d_delta: float) -> np.ndarray:
    if np.any(distances < 0):
        raise ValueError("partition: negative distance")
    if not d_delta > 0:
        raise ValueError(f"partition: d_delta must be positive, got {d_delta}")
    return np.where(distances <= d_delta, 1.0 - distances / d_delta, 0.0)


def cap_to_unit_sum(column: np.ndarray) -> np.ndarray:
    """Bring a non-negative column to unit sum.

    Excess mass is removed from the largest memberships first: every entry is
    clipped at a common ceiling t chosen so the clipped column sums to 1. A
    column that falls short of 1 is scaled up proportionally instead.
    """
    total = column.sum()
    if total <= 0:
        raise ComputationError("partition: object outside all supports")
    if total < 1.0:
        return column / total
    desc = np.sort(column)[::-1]
    tail = total - np.cumsum(desc)  # mass below the k largest entries
    for k in range(1, len(desc) + 1):
        t = (1.0 - tail[k - 1]) / k
        if k == len(desc) or t >= desc[k]:
            break
    return np.minimum(column, t)


def assign_static(
    distances,
    d_delta: float = DEFAULT_D_DELTA,
    partition_class: PartitionClass | str = PartitionClass.BFPM,
) -> PartitionMatrix:
    """Turn a c x n distance matrix into memberships of the requested class.

    BFPM keeps the piecewise-linear memberships as they are; Fuzzy caps each
    column to unit sum (see ``cap_to_unit_sum``); Crisp gives each object
    wholly to its nearest cluster, ties to the lowest index.
    """
    d = np.asarray(distances, dtype=np.float64)
    cls = PartitionClass(partition_class)
    if cls is PartitionClass.CRISP:
        if np.any(d < 0):
            raise ValueError("partition: negative distance")
        u = np.zeros_like(d)
        u[np.argmin(d, axis=0), np.arange(d.shape[1])] = 1.0
        return PartitionMatrix(u, cls)
    u = _static_matrix(d, d_delta)
    if cls is PartitionClass.FUZZY:
        u = np.column_stack([cap_to_unit_sum(u[:, j]) for j in range(u.shape[1])])
    elif cls is PartitionClass.POSSIBILISTIC:
        raise ValueError("partition: static assignment supports crisp, fuzzy and bfpm")
    return PartitionMatrix(u, cls)


@dataclass(frozen=True)
class CrossingLines:
    """Points sampled on lines through the origin and their point-to-line distances.

    ``members[i]`` lists the dataset rows sampled on line i, in sampling order;
    shared points (the origin) appear in several lists but once in the dataset.
    """

    coefficients: np.ndarray
    dataset: Dataset
    distances: np.ndarray
    members: tuple[np.ndarray, ...]

    def block(self, line: int) -> np.ndarray:
        """Distances of line ``line``'s sample points to every line (c x points)."""
        return self.distances[:, self.members[line]]


def _direction(a: np.ndarray) -> np.ndarray:
    direction = np.array([-a[1], a[0]], dtype=np.float64)
    direction /= np.abs(direction).max()
    first = direction[np.flatnonzero(direction)[0]]
    return direction * np.sign(first) + 0.0


def generate_crossing_lines(coefficients, points_per_line: int = 5, spacing: float = 1.0) -> CrossingLines:
    """Sample ``points_per_line`` points on each line a . x = 0 in the plane.

    Points sit at integer multiples of ``spacing`` along a direction scaled so
    its largest coordinate is 1, so axis and diagonal lines land on the grid.
    """
    a = np.atleast_2d(np.asarray(coefficients, dtype=np.float64))
    if a.shape[1] != 2:
        raise DataError("partition: line coefficients must be c x 2")
    if points_per_line < 1 or points_per_line % 2 == 0:
        raise ValueError("partition: points_per_line must be odd so the origin is sampled")
    if not spacing > 0:
        raise ValueError("partition: spacing must be positive")
    for i, row in enumerate(a):
        if not np.any(row):
            raise DataError(f"partition: degenerate line (row {i} is zero)")

    half = (points_per_line - 1) // 2
    steps = np.arange(-half, half + 1) * spacing
    points: list[tuple[float, float]] = []
    index: dict[tuple[float, float], int] = {}
    labels: list[int] = []
    members = []
    for line, row in enumerate(a):
        idx = []
        for p in steps[:, None] * _direction(row)[None, :] + 0.0:
            key = (float(p[0]), float(p[1]))
            if key not in index:
                index[key] = len(points)
                points.append(key)
                labels.append(line)
            idx.append(index[key])
        members.append(np.array(idx))
    x = np.array(points)
    norms = np.linalg.norm(a, axis=1)
    distances = np.abs(a @ x.T) / norms[:, None]
    return CrossingLines(a, Dataset(x, ("x1", "x2"), tuple(labels)), distances, tuple(members))


def crossing_line_blocks(
    lines: CrossingLines,
    d_delta: float = DEFAULT_D_DELTA,
    partition_class: PartitionClass | str = PartitionClass.BFPM,
) -> list[np.ndarray]:
    """Per-line membership blocks, one c x points_per_line matrix per line.

    For the crisp class a shared point belongs to exactly one line; in the
    blocks of the other lines its column is removed (all zeros).
    """
    cls = PartitionClass(partition_class)
    blocks = []
    for line in range(len(lines.members)):
        u = assign_static(lines.block(line), d_delta, cls).values.copy()
        if cls is PartitionClass.CRISP:
            u[:, np.argmax(u, axis=0) != line] = 0.0
        blocks.append(u)
    return blocks


def divisible_demo(limit: int = 100, divisors=(2, 5), include_all: bool = False):
    """Integers 1..limit with full membership in every 'divisible by k' cluster.

    By default only integers divisible by at least one divisor are kept, since
    the rest belong to no cluster and cannot form a BFPM partition.
    """
    numbers = np.arange(1, limit + 1)
    u = np.array([(numbers % k == 0).astype(float) for k in divisors])
    if not include_all:
        keep = u.any(axis=0)
        numbers, u = numbers[keep], u[:, keep]
    dataset = Dataset(numbers[:, None].astype(float), ("value",))
    return dataset, PartitionMatrix(u, PartitionClass.BFPM)

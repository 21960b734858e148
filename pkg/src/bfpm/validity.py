"""Cluster validity indices: partition coefficient and entropy, Davies-Bouldin, CS and G.

DB and CS work on set membership, so they harden the soft partition first
(argmax, ties to the lowest cluster). G uses the soft memberships directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Dataset, PartitionMatrix, Prototypes, hardened_assignment
from .distance import pairwise_sq_euclidean
from .errors import BFPMError, ComputationError

# Index name -> True when larger is better.
DIRECTIONS = {"vpc": True, "vpe": False, "db": False, "cs": False, "g": True}


def vpc(partition: PartitionMatrix) -> float:
    """Partition coefficient: mean over objects of the squared memberships' sum."""
    u = partition.values
    return float(np.sum(u * u) / u.shape[1])


def vpe(partition: PartitionMatrix, base: float = math.e) -> float:
    """Partition entropy, -1/n sum u log u, with 0 log 0 taken as 0."""
    u = partition.values
    pos = u > 0
    total = np.sum(u[pos] * np.log(u[pos])) / math.log(base)
    return float(-total / u.shape[1]) + 0.0


def _clusters(partition: PartitionMatrix) -> list[np.ndarray]:
    if partition.c < 2:
        raise ComputationError("validity: at least two clusters are required")
    assign = hardened_assignment(partition)
    members = [np.flatnonzero(assign == i) for i in range(partition.c)]
    for i, idx in enumerate(members):
        if idx.size == 0:
            raise ComputationError(f"validity: hardened cluster {i} is empty")
    return members


def _prototype_distances(prototypes: Prototypes) -> np.ndarray:
    v = prototypes.centers
    d = np.sqrt(pairwise_sq_euclidean(v))
    off = ~np.eye(len(v), dtype=bool)
    if np.any(d[off] == 0.0):
        raise ComputationError("validity: degenerate prototypes (two coincide)")
    return d


def db_index(dataset: Dataset, partition: PartitionMatrix, prototypes: Prototypes) -> float:
    """Davies-Bouldin: mean over clusters of the worst (e_i + e_j) / D_ij.

    e_i is the mean squared distance of cluster i's members to prototype i.
    """
    members = _clusters(partition)
    x, v = dataset.objects, prototypes.centers
    dv = _prototype_distances(prototypes)
    e = np.array([np.mean(np.sum((x[idx] - v[i]) ** 2, axis=1)) for i, idx in enumerate(members)])
    ratio = (e[:, None] + e[None, :]) / np.where(dv > 0, dv, np.inf)
    np.fill_diagonal(ratio, -np.inf)
    return float(np.mean(ratio.max(axis=1)))


def cs_index(
    dataset: Dataset,
    partition: PartitionMatrix,
    prototypes: Prototypes,
    separation: str = "min",
) -> float:
    """CS index: mean within-cluster diameter over prototype separation, summed per cluster.

    The numerator adds, per cluster, the mean over members of the distance to
    the farthest member of the same cluster. The denominator adds, per
    cluster, the distance from its prototype to the nearest other prototype
    (``separation="min"``) or to the farthest one (``"max"``).
    """
    if separation not in ("min", "max"):
        raise ValueError(f"validity: separation must be 'min' or 'max', got {separation!r}")
    members = _clusters(partition)
    x = dataset.objects
    dv = _prototype_distances(prototypes)
    numerator = 0.0
    for idx in members:
        diam = np.sqrt(pairwise_sq_euclidean(x[idx]))
        numerator += float(np.mean(diam.max(axis=1)))
    if separation == "min":
        np.fill_diagonal(dv, np.inf)
        denominator = dv.min(axis=1).sum()
    else:
        np.fill_diagonal(dv, -np.inf)
        denominator = dv.max(axis=1).sum()
    return float(numerator / denominator)


def g_index(dataset: Dataset, partition: PartitionMatrix, pair_weight: str = "cluster") -> float:
    """G = separation / compactness for a soft partition.

    Separation averages squared object distances over all n^2 ordered pairs,
    each weighted by the smaller of the two objects' top memberships.
    Compactness averages, over unordered pairs, the squared distance times
    sum_i min(u_i,j1, u_i,j2).

    ``pair_weight="object"`` switches the separation weight to a literal
    reading where each object's weight is the largest membership any other
    object has in that object's hardened cluster.
    """
    u = partition.values
    c, n = u.shape
    if c < 2:
        raise ComputationError("validity: at least two clusters are required")
    if n < 2:
        raise ComputationError("validity: G needs at least two objects")
    d2 = pairwise_sq_euclidean(dataset.objects)
    if pair_weight == "cluster":
        top = u.max(axis=0)
        w2 = np.minimum(top[:, None], top[None, :])
    elif pair_weight == "object":
        assign = hardened_assignment(partition)
        order = np.argsort(-u, axis=1, kind="stable")
        top1 = u[np.arange(c), order[:, 0]]
        top2 = u[np.arange(c), order[:, 1]]
        first = top1[assign]
        # max over objects j != j1 of u[assign[j2], j]
        holder = order[assign, 0]
        rest = np.where(holder[None, :] == np.arange(n)[:, None], top2[assign][None, :], top1[assign][None, :])
        w2 = np.minimum(first[:, None], rest)
    else:
        raise ValueError(f"validity: pair_weight must be 'cluster' or 'object', got {pair_weight!r}")
    separation = float(np.sum(d2 * w2)) / n**2
    w1 = np.zeros((n, n))
    for i in range(c):
        w1 += np.minimum(u[i][:, None], u[i][None, :])
    upper = np.triu_indices(n, 1)
    compactness = 2.0 / (n * (n - 1)) * float(np.sum((d2 * w1)[upper]))
    if compactness <= 0.0:
        raise ComputationError("validity: degenerate partition (zero compactness)")
    return separation / compactness


@dataclass
class ValidityReport:
    vpc: Optional[float] = None
    vpe: Optional[float] = None
    db: Optional[float] = None
    cs: Optional[float] = None
    g: Optional[float] = None
    errors: dict[str, str] = field(default_factory=dict)

    def values(self) -> dict[str, Optional[float]]:
        return {k: getattr(self, k) for k in DIRECTIONS}

    def to_dict(self, digits: int = 12) -> dict:
        out: dict = {}
        for k, v in self.values().items():
            out[k] = None if v is None else float(f"{v:.{digits}g}")
        out["errors"] = {k: self.errors[k] for k in sorted(self.errors)}
        out["direction"] = {k: ("max" if up else "min") for k, up in DIRECTIONS.items()}
        return out


def validity_report(
    dataset: Dataset,
    partition: PartitionMatrix,
    prototypes: Prototypes,
    *,
    entropy_base: float = math.e,
    cs_separation: str = "min",
    g_pair_weight: str = "cluster",
) -> ValidityReport:
    """All five indices; a failing index is recorded in ``errors`` instead of raising."""
    report = ValidityReport()
    jobs = {
        "vpc": lambda: vpc(partition),
        "vpe": lambda: vpe(partition, entropy_base),
        "db": lambda: db_index(dataset, partition, prototypes),
        "cs": lambda: cs_index(dataset, partition, prototypes, cs_separation),
        "g": lambda: g_index(dataset, partition, g_pair_weight),
    }
    for name, job in jobs.items():
        try:
            setattr(report, name, job())
        except BFPMError as exc:
            report.errors[name] = str(exc)
    return report

"""Shared domain types: datasets, partition matrices, prototypes and run records."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distance import DistanceSpec
from .errors import BFPMError, ComputationError, DataError  # noqa: F401


class PartitionClass(str, enum.Enum):
    CRISP = "crisp"
    FUZZY = "fuzzy"
    POSSIBILISTIC = "possibilistic"
    BFPM = "bfpm"


class Method(str, enum.Enum):
    BFPM = "bfpm"
    FCM = "fcm"
    KMEANS = "kmeans"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """n objects described by d real features, optionally labelled."""

    objects: np.ndarray
    feature_names: Optional[tuple[str, ...]] = None
    labels: Optional[tuple] = None
    normalized: bool = False

    def __post_init__(self):
        x = np.asarray(self.objects, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise DataError(f"core: dataset must be a non-empty n x d matrix, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("core: dataset contains non-finite values")
        if self.normalized and (x.min() < 0.0 or x.max() > 1.0):
            raise DataError("core: normalized dataset has values outside [0, 1]")
        object.__setattr__(self, "objects", _frozen(x))
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != x.shape[1]:
                raise DataError(f"core: {len(names)} feature names for {x.shape[1]} features")
            object.__setattr__(self, "feature_names", names)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != x.shape[0]:
                raise DataError(f"core: {len(labels)} labels for {x.shape[0]} objects")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.objects.shape[0]

    @property
    def d(self) -> int:
        return self.objects.shape[1]


@dataclass(frozen=True)
class PartitionMatrix:
    """c x n membership matrix, clusters as rows, tagged with its partition class."""

    values: np.ndarray
    partition_class: PartitionClass

    def __post_init__(self):
        u = np.asarray(self.values, dtype=np.float64)
        if u.ndim != 2:
            raise DataError(f"core: partition must be a c x n matrix, got shape {u.shape}")
        if not np.all(np.isfinite(u)):
            raise DataError("core: partition contains non-finite memberships")
        if u.size and (u.min() < 0.0 or u.max() > 1.0):
            raise DataError("core: memberships must lie in [0, 1]")
        object.__setattr__(self, "values", _frozen(u))
        object.__setattr__(self, "partition_class", PartitionClass(self.partition_class))

    @property
    def c(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Prototypes:
    """c cluster centres; row i is the prototype of cluster i."""

    centers: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.centers, dtype=np.float64)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 1:
            raise DataError(f"core: prototypes must be a c x d matrix with c >= 1, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DataError("core: prototypes contain non-finite values")
        object.__setattr__(self, "centers", _frozen(v))

    @property
    def c(self) -> int:
        return self.centers.shape[0]

    @property
    def d(self) -> int:
        return self.centers.shape[1]


@dataclass(frozen=True)
class RunConfig:
    method: Method = Method.BFPM
    c: int = 2
    m: float = 2.0
    epsilon: float = 1e-6
    max_iter: int = 300
    distance: DistanceSpec = field(default_factory=DistanceSpec.euclidean)
    seed: int = 0
    restarts: int = 10

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if int(self.c) != self.c or self.c < 1:
            raise ValueError(f"core: number of clusters must be a positive integer, got {self.c}")
        if self.method is not Method.KMEANS and not self.m > 1.0:
            raise ValueError(f"core: fuzzifier must exceed 1, got {self.m}")
        if not self.epsilon > 0.0:
            raise ValueError(f"core: epsilon must be positive, got {self.epsilon}")
        if self.max_iter < 1:
            raise ValueError(f"core: max_iter must be positive, got {self.max_iter}")
        if self.restarts < 1:
            raise ValueError(f"core: restarts must be positive, got {self.restarts}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"core: seed must be an unsigned 64-bit integer, got {self.seed}")

    def check_against(self, dataset: Dataset) -> None:
        if self.c > dataset.n:
            raise ValueError(f"core: {self.c} clusters requested for {dataset.n} objects")


@dataclass(frozen=True)
class RunResult:
    partition: PartitionMatrix
    prototypes: Prototypes
    iterations: int
    converged: bool
    objective_trace: tuple[float, ...]
    seed_used: int


def hardened_assignment(partition: PartitionMatrix) -> np.ndarray:
    """Index of the largest membership per object; ties go to the lowest cluster index."""
    if partition.c == 0 or partition.n == 0:
        raise ComputationError("core: empty partition")
    return np.argmax(partition.values, axis=0)


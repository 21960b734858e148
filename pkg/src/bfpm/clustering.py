"""Prototype-based clustering: BFPM, fuzzy c-means and crisp k-means.

All three share the same loop: compute distances to the current prototypes,
update memberships, move the prototypes, and stop once the largest squared
prototype shift is at most epsilon.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    Dataset,
    Method,
    PartitionClass,
    PartitionMatrix,
    Prototypes,
    RunConfig,
    RunResult,
    hardened_assignment,
)
from .distance import distance_matrix
from .errors import ComputationError, DataError

log = logging.getLogger(__name__)

_MONOTONE_TOL = 1e-9


@dataclass(frozen=True)
class IterationState:
    U: PartitionMatrix
    V: Prototypes
    iter: int
    max_proto_shift: float


def initialize_prototypes(dataset: Dataset, c: int, seed: int) -> Prototypes:
    """Pick c distinct data rows at random (Forgy initialisation)."""
    x = dataset.objects
    _, first = np.unique(x, axis=0, return_index=True)
    distinct = x[np.sort(first)]
    if c > len(distinct):
        raise ComputationError(f"clustering: too few distinct objects ({len(distinct)}) for {c} clusters")
    rng = np.random.default_rng(seed)
    return Prototypes(distinct[rng.choice(len(distinct), size=c, replace=False)])


def _check_fuzzifier(m: float) -> None:
    if not m > 1.0:
        raise ValueError(f"clustering: fuzzifier must exceed 1, got {m}")


def _log_fcm_memberships(d: np.ndarray, m: float) -> np.ndarray:
    """log of 1 / sum_k (d_ij / d_kj)^(2/(m-1)), for columns without zero distances.

    Written as a log-softmax over -2/(m-1) * log d so ratios never overflow.
    """
    with np.errstate(divide="ignore"):
        z = -(2.0 / (m - 1.0)) * np.log(d)
    z = z - z.max(axis=0, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=0, keepdims=True))


def fcm_membership_update(distances, m: float = 2.0) -> PartitionMatrix:
    """Standard fuzzy c-means memberships; each column sums to one.

    An object sitting on one or more prototypes splits its unit mass evenly
    between them.
    """
    _check_fuzzifier(m)
    d = np.asarray(distances, dtype=np.float64)
    if np.any(d < 0):
        raise ValueError("clustering: negative distance")
    zero = d == 0.0
    singular = zero.any(axis=0)
    u = np.empty_like(d)
    if np.any(~singular):
        u[:, ~singular] = np.exp(_log_fcm_memberships(d[:, ~singular], m))
    if np.any(singular):
        z = zero[:, singular].astype(float)
        u[:, singular] = z / z.sum(axis=0)
    return PartitionMatrix(u, PartitionClass.FUZZY)


def bfpm_membership_update(distances, m: float = 2.0) -> PartitionMatrix:
    """BFPM memberships u_ij = [sum_k (d_ij / d_kj)^(2/(m-1))]^(-1/m).

    The bracket is at least 1, so every membership lies in (0, 1] and an
    object can be close to full member of several clusters at once. An object
    sitting on prototypes gets membership 1 in each of them, 0 elsewhere.
    """
    _check_fuzzifier(m)
    d = np.asarray(distances, dtype=np.float64)
    if np.any(d < 0):
        raise ValueError("clustering: negative distance")
    zero = d == 0.0
    singular = zero.any(axis=0)
    u = np.empty_like(d)
    if np.any(~singular):
        u[:, ~singular] = np.exp(_log_fcm_memberships(d[:, ~singular], m) / m)
    if np.any(singular):
        u[:, singular] = zero[:, singular].astype(float)
    return PartitionMatrix(np.minimum(u, 1.0), PartitionClass.BFPM)


def update_prototypes(dataset: Dataset, partition: PartitionMatrix, m: float = 2.0) -> Prototypes:
    """Each prototype becomes the u^m-weighted mean of all objects."""
    w = partition.values**m
    totals = w.sum(axis=1)
    empty = np.flatnonzero(totals <= 0.0)
    if empty.size:
        raise ComputationError(f"clustering: empty cluster {int(empty[0])}")
    return Prototypes((w @ dataset.objects) / totals[:, None])


def objective(dataset: Dataset, partition: PartitionMatrix, prototypes: Prototypes, m: float, spec=None) -> float:
    """J_m = sum_ij u_ij^m d(x_j, v_i)^2."""
    d = distance_matrix(dataset, prototypes, spec)
    return float(np.sum(partition.values**m * d**2))


def _reseed_empty(x: np.ndarray, centers: np.ndarray, empty: Sequence[int], spec) -> np.ndarray:
    """Move each empty cluster's prototype onto the object farthest from its nearest prototype."""
    centers = centers.copy()
    for i in empty:
        nearest = distance_matrix(x, centers, spec).min(axis=0)
        j = int(np.argmax(nearest))
        log.debug("reseeding empty cluster %d at object %d", i, j)
        centers[i] = x[j]
    return centers


def _soft_step(dataset: Dataset, centers: np.ndarray, config: RunConfig, reseeded: bool = False):
    d = distance_matrix(dataset, centers, config.distance)
    if config.method is Method.BFPM:
        u = bfpm_membership_update(d, config.m)
    else:
        u = fcm_membership_update(d, config.m)
    w = u.values**config.m
    empty = np.flatnonzero(w.sum(axis=1) <= 0.0)
    if empty.size:
        if reseeded:
            raise ComputationError(f"clustering: empty cluster {int(empty[0])} after reseeding")
        centers = _reseed_empty(dataset.objects, centers, empty, config.distance)
        return _soft_step(dataset, centers, config, True)
    return u, update_prototypes(dataset, u, config.m).centers


def _crisp_step(dataset: Dataset, centers: np.ndarray, config: RunConfig, reseeded: bool = False):
    d = distance_matrix(dataset, centers, config.distance)
    assign = np.argmin(d, axis=0)
    counts = np.bincount(assign, minlength=config.c)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        if reseeded:
            raise ComputationError(f"clustering: empty cluster {int(empty[0])} after reseeding")
        centers = _reseed_empty(dataset.objects, centers, empty, config.distance)
        return _crisp_step(dataset, centers, config, True)
    u = np.zeros((config.c, dataset.n))
    u[assign, np.arange(dataset.n)] = 1.0
    new = (u @ dataset.objects) / counts[:, None]
    return PartitionMatrix(u, PartitionClass.CRISP), new


def _final_partition(dataset: Dataset, centers: np.ndarray, config: RunConfig) -> PartitionMatrix:
    d = distance_matrix(dataset, centers, config.distance)
    if config.method is Method.BFPM:
        return bfpm_membership_update(d, config.m)
    if config.method is Method.FCM:
        return fcm_membership_update(d, config.m)
    u = np.zeros_like(d)
    u[np.argmin(d, axis=0), np.arange(d.shape[1])] = 1.0
    return PartitionMatrix(u, PartitionClass.CRISP)


def run_once(
    dataset: Dataset,
    config: RunConfig,
    seed: int,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """One clustering run from a single seeded initialisation."""
    config.check_against(dataset)
    centers = initialize_prototypes(dataset, config.c, seed).centers
    soft = config.method is not Method.KMEANS
    step = _soft_step if soft else _crisp_step
    trace: list[float] = []
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        u, new = step(dataset, centers, config)
        shift = float(np.max(np.sum((new - centers) ** 2, axis=1)))
        centers = new
        if soft:
            trace.append(objective(dataset, u, Prototypes(centers), config.m, config.distance))
        if on_iteration is not None:
            on_iteration(IterationState(u, Prototypes(centers), it, shift))
        if shift <= config.epsilon:
            converged = True
            break
    if any(b > a + _MONOTONE_TOL for a, b in zip(trace, trace[1:])):
        log.warning("clustering: %s objective increased between iterations (seed %d)", config.method.value, seed)
    return RunResult(
        partition=_final_partition(dataset, centers, config),
        prototypes=Prototypes(centers),
        iterations=it,
        converged=converged,
        objective_trace=tuple(trace),
        seed_used=seed,
    )


def _score(dataset: Dataset, result: RunResult, config: RunConfig) -> float:
    m = 1.0 if config.method is Method.KMEANS else config.m
    return objective(dataset, result.partition, result.prototypes, m, config.distance)


def run(
    dataset: Dataset,
    config: RunConfig,
    on_iteration: Optional[Callable[[IterationState], None]] = None,
) -> RunResult:
    """Best of ``config.restarts`` runs seeded seed, seed+1, ...

    The best run has the lowest final J_m (soft methods) or within-cluster
    sum of squares (k-means); ties keep the earliest seed.
    """
    best, best_score = None, np.inf
    for r in range(config.restarts):
        seed = (config.seed + r) % 2**64
        result = run_once(dataset, config, seed, on_iteration)
        score = _score(dataset, result, config)
        log.debug("restart seed=%d iterations=%d score=%.12g", seed, result.iterations, score)
        if score < best_score:
            best, best_score = result, score
    return best


def accuracy(partition: PartitionMatrix, labels) -> float:
    """Fraction of objects whose hardened cluster maps to their label.

    Clusters are matched to labels one-to-one so as to maximise agreement.
    """
    if labels is None:
        raise DataError("clustering: labels required for accuracy")
    labels = np.asarray(labels)
    if labels.shape[0] != partition.n:
        raise DataError(f"clustering: {labels.shape[0]} labels for {partition.n} objects")
    assigned = hardened_assignment(partition)
    classes, y = np.unique(labels, return_inverse=True)
    counts = np.zeros((partition.c, len(classes)), dtype=np.int64)
    np.add.at(counts, (assigned, y), 1)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(counts[rows, cols].sum() / partition.n)

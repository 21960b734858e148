"""Minkowski and Gaussian-kernel distances between objects and prototypes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError


class DistanceKind(str, enum.Enum):
    MINKOWSKI = "minkowski"
    KERNEL_GAUSSIAN = "kernel-gaussian"


@dataclass(frozen=True)
class DistanceSpec:
    """Which distance to use. ``param`` is the order k (Minkowski) or sigma (kernel)."""

    kind: DistanceKind = DistanceKind.MINKOWSKI
    param: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DistanceKind(self.kind))
        if self.kind is DistanceKind.MINKOWSKI and not self.param >= 1.0:
            raise ValueError(f"distance: not a metric order (k={self.param})")
        if self.kind is DistanceKind.KERNEL_GAUSSIAN and not self.param > 0.0:
            raise ValueError(f"distance: kernel width must be positive (sigma={self.param})")

    @classmethod
    def euclidean(cls) -> "DistanceSpec":
        return cls(DistanceKind.MINKOWSKI, 2.0)

    @classmethod
    def parse(cls, text: str) -> "DistanceSpec":
        """Parse ``minkowski:<k>`` or ``kernel-gaussian:<sigma>``."""
        kind, sep, value = text.strip().partition(":")
        try:
            kind = DistanceKind(kind.lower())
        except ValueError:
            raise ValueError(f"distance: unknown distance kind {kind!r}") from None
        if not sep:
            return cls(kind, 2.0 if kind is DistanceKind.MINKOWSKI else 1.0)
        try:
            param = float(value)
        except ValueError:
            raise ValueError(f"distance: bad parameter {value!r} in {text!r}") from None
        return cls(kind, param)

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.param:g}"


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"distance: dimension mismatch {x.shape} vs {y.shape}")
    return x, y


def minkowski(x, y, k: float = 2.0) -> float:
    x, y = _pair(x, y)
    if not k >= 1.0:
        raise ValueError(f"distance: not a metric order (k={k})")
    diff = np.abs(x - y)
    if k == 2.0:
        return float(math.sqrt(np.dot(diff, diff)))
    return float(np.sum(diff**k) ** (1.0 / k))


def gaussian_kernel(x, y, sigma: float = 1.0) -> float:
    """exp(-||x - y||^2 / (2 sigma^2))."""
    x, y = _pair(x, y)
    if not sigma > 0.0:
        raise ValueError(f"distance: kernel width must be positive (sigma={sigma})")
    diff = x - y
    return float(math.exp(-np.dot(diff, diff) / (2.0 * sigma * sigma)))


def kernel_distance(x, y, sigma: float = 1.0) -> float:
    """k(x,x) + k(y,y) - 2k(x,y), i.e. 2 - 2k(x,y) for the Gaussian kernel."""
    return 2.0 - 2.0 * gaussian_kernel(x, y, sigma)


def _as_matrix(obj, attr: str) -> np.ndarray:
    a = np.asarray(getattr(obj, attr, obj), dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    return a


def distance_matrix(dataset, prototypes, spec: DistanceSpec | None = None) -> np.ndarray:
    """c x n matrix whose (i, j) entry is the distance from prototype i to object j.

    Accepts ``Dataset``/``Prototypes`` instances or plain (n, d) / (c, d) arrays.
    """
    spec = spec or DistanceSpec.euclidean()
    x = _as_matrix(dataset, "objects")
    v = _as_matrix(prototypes, "centers")
    if x.shape[1] != v.shape[1]:
        raise DataError(f"distance: objects have {x.shape[1]} features, prototypes {v.shape[1]}")
    diff = np.abs(v[:, None, :] - x[None, :, :])
    if spec.kind is DistanceKind.KERNEL_GAUSSIAN:
        sq = np.einsum("cnd,cnd->cn", diff, diff)
        return 2.0 - 2.0 * np.exp(-sq / (2.0 * spec.param**2))
    k = spec.param
    if k == 2.0:
        return np.sqrt(np.einsum("cnd,cnd->cn", diff, diff))
    if k == 1.0:
        return diff.sum(axis=2)
    return np.sum(diff**k, axis=2) ** (1.0 / k)


def pairwise_sq_euclidean(x: np.ndarray) -> np.ndarray:
    """n x n squared Euclidean distances between rows of ``x``."""
    diff = x[:, None, :] - x[None, :, :]
    return np.einsum("ijd,ijd->ij", diff, diff)

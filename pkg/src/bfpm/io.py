"""CSV ingestion, min-max normalisation and report serialisation."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .core import Dataset, PartitionClass, PartitionMatrix, Prototypes
from .errors import DataError

JSON_DIGITS = 12


@dataclass(frozen=True)
class CsvSpec:
    path: Union[str, Path]
    has_header: bool = True
    label_column: Optional[Union[str, int]] = None
    delimiter: str = ","


def _label_index(spec: CsvSpec, header: Optional[list[str]], width: int) -> Optional[int]:
    col = spec.label_column
    if col is None:
        return None
    if isinstance(col, str) and header is not None and col in header:
        return header.index(col)
    try:
        idx = int(col)
    except (TypeError, ValueError):
        raise DataError(f"io: label column {col!r} not found in {spec.path}") from None
    if not -width <= idx < width:
        raise DataError(f"io: label column index {idx} out of range for {width} columns")
    return idx % width


def load_csv(spec: CsvSpec) -> Dataset:
    """Read a numeric table, optionally splitting off one label column.

    Every non-label cell must parse as a finite float; failures report the
    1-based line and column.
    """
    path = Path(spec.path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh, delimiter=spec.delimiter) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"io: cannot read {path}: {exc.strerror}") from None
    header = None
    first_line = 1
    if spec.has_header and rows:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        first_line = 2
    if not rows:
        raise DataError(f"io: {path} has no data rows")
    width = len(header) if header is not None else len(rows[0])
    label_idx = _label_index(spec, header, width)

    values, labels = [], []
    for r, row in enumerate(rows):
        line = first_line + r
        if len(row) != width:
            raise DataError(f"io: {path} line {line} has {len(row)} fields, expected {width}")
        feats = []
        for k, cell in enumerate(row):
            if k == label_idx:
                labels.append(cell.strip())
                continue
            try:
                value = float(cell)
            except ValueError:
                raise DataError(f"io: {path} line {line} column {k + 1}: cannot parse {cell.strip()!r}") from None
            if not math.isfinite(value):
                raise DataError(f"io: {path} line {line} column {k + 1}: non-finite value {cell.strip()!r}")
            feats.append(value)
        values.append(feats)
    names = None
    if header is not None:
        names = tuple(h for k, h in enumerate(header) if k != label_idx)
    if not values[0]:
        raise DataError(f"io: {path} has no feature columns")
    return Dataset(np.array(values), names, tuple(labels) if label_idx is not None else None)


def normalize_min_max(dataset: Dataset) -> Dataset:
    """Rescale every feature to [0, 1]; constant features become 0."""
    x = dataset.objects
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    scaled = np.where(span > 0, (x - lo) / np.where(span > 0, span, 1.0), 0.0)
    return Dataset(np.clip(scaled, 0.0, 1.0), dataset.feature_names, dataset.labels, normalized=True)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_membership_csv(path: Union[str, Path], partition: PartitionMatrix) -> None:
    """One row per object: ``object,cluster_0,...,cluster_{c-1}``."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["object"] + [f"cluster_{i}" for i in range(partition.c)])
        for j, col in enumerate(partition.values.T):
            w.writerow([j] + [_fmt(v) for v in col])


def read_membership_csv(path: Union[str, Path], partition_class: PartitionClass | str) -> PartitionMatrix:
    ds = load_csv(CsvSpec(path, has_header=True, label_column="object"))
    return PartitionMatrix(ds.objects.T, PartitionClass(partition_class))


def write_prototypes_csv(path: Union[str, Path], prototypes: Prototypes, feature_names=None) -> None:
    names = list(feature_names) if feature_names else [f"f{k}" for k in range(prototypes.d)]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cluster"] + names)
        for i, row in enumerate(prototypes.centers):
            w.writerow([i] + [_fmt(v) for v in row])


def read_prototypes_csv(path: Union[str, Path]) -> Prototypes:
    ds = load_csv(CsvSpec(path, has_header=True, label_column="cluster"))
    return Prototypes(ds.objects)


def round_sig(obj, digits: int = JSON_DIGITS):
    """Recursively round floats to ``digits`` significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    if isinstance(obj, np.generic):
        return round_sig(obj.item(), digits)
    return obj


def dump_json(obj, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(round_sig(obj), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

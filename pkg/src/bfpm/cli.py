"""Command-line entry point: ``bfpm {cluster,validate,movement,demo,bench}``.

Exit codes: 0 success, 1 usage, 2 data error, 3 computation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import DEFAULT_THRESHOLD, SortOrder, movement_report, movement_tsv
from .clustering import accuracy, run
from .core import Method, PartitionClass, RunConfig
from .distance import DistanceSpec
from .errors import ComputationError, DataError
from .io import (
    CsvSpec,
    dump_json,
    load_csv,
    normalize_min_max,
    read_membership_csv,
    read_prototypes_csv,
    write_membership_csv,
    write_prototypes_csv,
)
from .partition import (
    class_hierarchy_check,
    crossing_line_blocks,
    divisible_demo,
    generate_crossing_lines,
    validate_partition,
)
from .validity import validity_report

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _distance(text: str) -> DistanceSpec:
    try:
        return DistanceSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_dataset_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", required=required, help="dataset CSV")
    p.add_argument("--label-column", help="name or 0-based index of the label column")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--normalize", action="store_true", help="min-max scale every feature to [0, 1]")


def _add_run_flags(p: argparse.ArgumentParser, clusters_required: bool = True) -> None:
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.BFPM.value)
    p.add_argument("--clusters", type=_positive_int, required=clusters_required)
    p.add_argument("--fuzzifier", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--max-iter", type=_positive_int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=_positive_int, default=10)
    p.add_argument("--distance", type=_distance, default=DistanceSpec.euclidean(), help="minkowski:<k> or kernel-gaussian:<sigma>")


def _load(args):
    label = args.label_column
    if label is not None and label.lstrip("-").isdigit():
        label = int(label)
    ds = load_csv(CsvSpec(args.input, not args.no_header, label, args.delimiter))
    return normalize_min_max(ds) if args.normalize else ds


def _config(args, method: Optional[Method] = None, m: Optional[float] = None) -> RunConfig:
    return RunConfig(
        method=method or Method(args.method),
        c=args.clusters,
        m=args.fuzzifier if m is None else m,
        epsilon=args.epsilon,
        max_iter=args.max_iter,
        distance=args.distance,
        seed=args.seed,
        restarts=args.restarts,
    )


def cmd_cluster(args) -> int:
    ds = _load(args)
    config = _config(args)
    result = run(ds, config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_membership_csv(out / "membership.csv", result.partition)
    write_prototypes_csv(out / "prototypes.csv", result.prototypes, ds.feature_names)
    report = {
        "method": config.method.value,
        "partition_class": result.partition.partition_class.value,
        "clusters": config.c,
        "fuzzifier": config.m,
        "epsilon": config.epsilon,
        "max_iter": config.max_iter,
        "distance": str(config.distance),
        "restarts": config.restarts,
        "seed": config.seed,
        "seed_used": result.seed_used,
        "n_objects": ds.n,
        "n_features": ds.d,
        "normalized": ds.normalized,
        "iterations": result.iterations,
        "converged": result.converged,
        "objective_trace": list(result.objective_trace),
        "accuracy": accuracy(result.partition, ds.labels) if ds.labels is not None else None,
    }
    sys.stdout.write(dump_json(report, out / "run.json"))
    return EXIT_OK


def cmd_validate(args) -> int:
    ds = _load(args)
    cls = PartitionClass(args.partition_class or PartitionClass.BFPM)
    partition = read_membership_csv(args.membership, cls)
    prototypes = read_prototypes_csv(args.prototypes)
    if partition.n != ds.n:
        raise DataError(f"cli: membership has {partition.n} objects, dataset {ds.n}")
    report = validity_report(ds, partition, prototypes, cs_separation=args.cs_separation, g_pair_weight=args.g_pair_weight)
    out = report.to_dict()
    if args.partition_class:
        check = validate_partition(partition, cls)
        out["partition"] = {
            "class": cls.value,
            "satisfied": check.satisfied,
            "violations": len(check.violations),
            "classes_satisfied": sorted(c.value for c in class_hierarchy_check(partition)),
        }
    text = dump_json(out, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_movement(args) -> int:
    if args.membership:
        partition = read_membership_csv(args.membership, PartitionClass(args.partition_class))
    elif args.input and args.clusters:
        result = run(_load(args), _config(args))
        partition = result.partition
    else:
        raise UsageError("movement: give --membership, or --input with --clusters")
    text = movement_tsv(movement_report(partition, args.threshold), args.sort)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_lines(text: str) -> np.ndarray:
    try:
        rows = [[float(v) for v in part.split(",")] for part in text.split(";") if part.strip()]
        return np.array(rows, dtype=float).reshape(len(rows), 2)
    except ValueError:
        raise UsageError(f"demo lines: cannot parse --lines {text!r}; expected 'a1,a2;b1,b2;...'") from None


def format_matrix(name: str, u: np.ndarray, decimals: int = 1) -> str:
    body = "\n".join("  [" + " , ".join(f"{v:.{decimals}f}" for v in row) + "]" for row in u)
    return f"{name} =\n{body}\n"


def render_lines_demo(coefficients, points: int, spacing: float, d_delta: float, classes: Sequence[str]) -> str:
    lines = generate_crossing_lines(coefficients, points, spacing)
    parts = []
    names = [chr(ord("A") + k) if k < 26 else f"L{k + 1}" for k in range(len(lines.members))]
    for k, idx in enumerate(lines.members):
        pts = ", ".join(f"({x:g},{y:g})" for x, y in lines.dataset.objects[idx])
        parts.append(f"{names[k]} = {{{pts}}}\n")
    parts.append("\n")
    for k in range(len(lines.members)):
        parts.append(format_matrix(f"D_{k + 1}", lines.block(k)))
    for cls in classes:
        parts.append("\n")
        for k, block in enumerate(crossing_line_blocks(lines, d_delta, cls)):
            parts.append(format_matrix(f"U_{cls}({names[k]})", block))
    return "".join(parts)


def cmd_demo(args) -> int:
    if args.target == "lines":
        classes = ["crisp", "fuzzy", "bfpm"] if args.cls == "all" else [args.cls]
        sys.stdout.write(render_lines_demo(_parse_lines(args.lines), args.points, args.spacing, args.d_delta, classes))
        return EXIT_OK
    ds, partition = divisible_demo(args.limit, include_all=args.include_all)
    sys.stdout.write("value\tdivisible_by_2\tdivisible_by_5\n")
    for x, col in zip(ds.objects[:, 0], partition.values.T):
        sys.stdout.write(f"{int(x)}\t{col[0]:.1f}\t{col[1]:.1f}\n")
    check = validate_partition(partition)
    both = int(np.sum(partition.values.min(axis=0) == 1.0))
    sys.stderr.write(f"# bfpm partition valid: {check.satisfied}; full members of both clusters: {both}\n")
    return EXIT_OK


def _bench_rows(ds, args):
    rows = []
    for method in (Method.BFPM, Method.FCM, Method.KMEANS):
        config = _config(args, method)
        result = run(ds, config)
        rep = validity_report(ds, result.partition, result.prototypes)
        acc = accuracy(result.partition, ds.labels) if ds.labels is not None else None
        rows.append((method.value, f"{config.m:g}" if method is not Method.KMEANS else "-", acc, rep))
    if args.fuzzifiers:
        for m in args.fuzzifiers:
            config = _config(args, Method.BFPM, m)
            result = run(ds, config)
            rep = validity_report(ds, result.partition, result.prototypes)
            acc = accuracy(result.partition, ds.labels) if ds.labels is not None else None
            rows.append(("bfpm", f"{m:g}", acc, rep))
    return rows


def cmd_bench(args) -> int:
    if args.demo_lines:
        ds = generate_crossing_lines(_parse_lines(args.demo_lines)).dataset
    elif args.input:
        ds = _load(args)
    else:
        raise UsageError("bench: give --input or --demo-lines")
    header = ("method", "m", "accuracy", "vpc", "vpe", "db", "cs", "g")
    out = ["\t".join(header)]

    def cell(v):
        return "n/a" if v is None else f"{v:.4f}"

    for name, m, acc, rep in _bench_rows(ds, args):
        vals = rep.values()
        out.append("\t".join([name, m, cell(acc)] + [cell(vals[k]) for k in ("vpc", "vpe", "db", "cs", "g")]))
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bfpm", description="Bounded fuzzy possibilistic clustering and validity analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log warnings (-v) or progress (-vv)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="cluster a CSV dataset")
    _add_dataset_flags(p)
    _add_run_flags(p)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("validate", help="validity indices for a stored clustering")
    _add_dataset_flags(p)
    p.add_argument("--membership", required=True)
    p.add_argument("--prototypes", required=True)
    p.add_argument("--partition-class", choices=[c.value for c in PartitionClass])
    p.add_argument("--cs-separation", choices=["min", "max"], default="min")
    p.add_argument("--g-pair-weight", choices=["cluster", "object"], default="cluster")
    p.add_argument("--output")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("movement", help="assigned vs runner-up memberships as TSV")
    p.add_argument("--membership", help="membership CSV written by 'cluster'")
    p.add_argument("--partition-class", choices=[c.value for c in PartitionClass], default="bfpm")
    _add_dataset_flags(p, required=False)
    _add_run_flags(p, clusters_required=False)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--sort", choices=[s.value for s in SortOrder], default=SortOrder.BY_INDEX.value)
    p.add_argument("--output")
    p.set_defaults(func=cmd_movement)

    p = sub.add_parser("demo", help="synthetic examples")
    p.add_argument("target", choices=["lines", "divisible"])
    p.add_argument("--lines", default="0,1;1,0", help="line coefficients 'a1,a2;b1,b2;...'")
    p.add_argument("--points", type=_positive_int, default=5)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--d-delta", type=float, default=2.0)
    p.add_argument("--class", dest="cls", choices=["all", "crisp", "fuzzy", "bfpm"], default="all")
    p.add_argument("--limit", type=_positive_int, default=100)
    p.add_argument("--include-all", action="store_true", help="keep integers divisible by neither")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", help="compare bfpm, fcm and k-means on one dataset")
    _add_dataset_flags(p, required=False)
    p.add_argument("--demo-lines", help="use the crossing-lines points instead of --input")
    _add_run_flags(p)
    p.add_argument("--fuzzifiers", type=lambda s: [float(v) for v in s.split(",")], help="extra bfpm rows, e.g. 1.4,1.6,1.8,2")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        level = {0: logging.ERROR, 1: logging.WARNING}.get(args.verbose, logging.DEBUG)
        logging.basicConfig(level=level, format="%(name)s: %(message)s", stream=sys.stderr)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except ComputationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_COMPUTE
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

"""Bounded fuzzy possibilistic clustering with crisp, fuzzy and possibilistic baselines."""

__version__ = "0.1.0"

from .analysis import MovementRecord, MovementReport, movement_plot_data, movement_report
from .clustering import (
    IterationState,
    accuracy,
    bfpm_membership_update,
    fcm_membership_update,
    initialize_prototypes,
    run,
    update_prototypes,
)
from .core import Dataset, Method, PartitionClass, PartitionMatrix, Prototypes, RunConfig, RunResult, hardened_assignment
from .distance import DistanceSpec, distance_matrix, gaussian_kernel, kernel_distance, minkowski
from .errors import BFPMError, ComputationError, DataError
from .io import CsvSpec, load_csv, normalize_min_max
from .partition import (
    assign_static,
    class_hierarchy_check,
    generate_crossing_lines,
    static_membership,
    validate_partition,
)
from .validity import cs_index, db_index, g_index, validity_report, vpc, vpe

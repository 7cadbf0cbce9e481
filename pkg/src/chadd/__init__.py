"""Chromatic dynamical decoupling: graph colorings compiled into pulse schedules."""

from .errors import ChaddError, InputError, NumericalError, ResourceError
from .graphcore import Coloring, ConnectivityGraph, chromatic_bounds, color_greedy, validate_coloring
from .hadamard import ColorRowMap, WalshMatrix, default_row_map, depth_single_axis, schedule_bit
from .schur import SchurPartition, depth_multi_axis, partition, partition_even, partition_odd, verify_partition
from .synth import (
    PulseSchedule,
    ScheduleMetrics,
    compute_metrics,
    depth_concatenated,
    synth_achromatic,
    synth_concatenated,
    synth_multi_axis,
    synth_robust,
    synth_single_axis,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ChaddError",
    "ColorRowMap",
    "Coloring",
    "ConnectivityGraph",
    "InputError",
    "NumericalError",
    "PulseSchedule",
    "ResourceError",
    "SchurPartition",
    "ScheduleMetrics",
    "WalshMatrix",
    "chromatic_bounds",
    "color_greedy",
    "compute_metrics",
    "default_row_map",
    "depth_concatenated",
    "depth_multi_axis",
    "depth_single_axis",
    "partition",
    "partition_even",
    "partition_odd",
    "schedule_bit",
    "synth_achromatic",
    "synth_concatenated",
    "synth_multi_axis",
    "synth_robust",
    "synth_single_axis",
    "synthesize",
    "validate_coloring",
]

"""Pulse schedule synthesis for the CHaDD variants and achromatic baselines.

Conventions
-----------
A schedule is a grid of ``slots x qubits`` pulse labels.  Slot ``j`` is one
free-evolution interval ``tau`` followed by the pulses ``grid[j]``, so time
runs down the grid and a cycle reads ``P_{N-1} f ... P_1 f P_0 f`` as an
operator product.  The toggling frame during slot ``j`` is the accumulated
product ``Q_j = P_{j-1} ... P_0`` (phases dropped).

Chromatic schedules are built from per-color frame sequences that start in the
identity frame; the physical pulse after slot ``j`` is the frame difference
``Q_{j+1} Q_j``, and the pulse after the last slot returns the frame to the
identity.  ``terminal_frame`` records whatever frame is left after the grid;
it is computed, never assumed, and is the identity for every synthesizer
here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from . import paulis
from .errors import InputError
from .graphcore import Coloring, ConnectivityGraph, validate_coloring
from .hadamard import ColorRowMap, default_row_map, depth_single_axis, schedule_bit
from .schur import SchurPartition, depth_multi_axis, nu_multi_axis, partition

__all__ = [
    "PulseSchedule",
    "ScheduleMetrics",
    "VARIANTS",
    "frames_to_grid",
    "grid_to_frames",
    "synth_single_axis",
    "synth_multi_axis",
    "synth_robust",
    "synth_concatenated",
    "synth_achromatic",
    "synthesize",
    "repeat",
    "compute_metrics",
    "depth_single_axis",
    "depth_multi_axis",
    "depth_concatenated",
    "UR4_SIGNS",
]

UR4_SIGNS = (1, -1, -1, 1)
VARIANTS = ("chadd", "chadd-multi", "chadd-r", "chadd-cat", "xx", "xy4", "ur4", "idle")

_ACHROMATIC = {
    "xx": ("X", "X", "X", "X"),
    "xy4": ("X", "Y", "X", "Y"),
    "ur4": ("X", "X-", "X-", "X"),
    "idle": ("I", "I", "I", "I"),
}


@dataclass(frozen=True)
class PulseSchedule:
    variant: str
    grid: tuple[tuple[str, ...], ...]
    tau: float = 1.0
    terminal_frame: tuple[str, ...] = ()
    coloring: Coloring | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        grid = tuple(tuple(paulis.check_label(p) for p in row) for row in self.grid)
        if not grid:
            raise InputError("a schedule needs at least one slot")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise InputError("every slot must list one label per qubit")
        object.__setattr__(self, "grid", grid)
        if not self.terminal_frame:
            object.__setattr__(self, "terminal_frame", _residual_frame(grid))
        else:
            term = tuple(paulis.check_label(p) for p in self.terminal_frame)
            if len(term) != width:
                raise InputError("terminal_frame length must equal the qubit count")
            object.__setattr__(self, "terminal_frame", term)
        if self.coloring is not None and len(self.coloring) != width:
            raise InputError("coloring size does not match the qubit count")
        if self.tau <= 0:
            raise InputError("tau must be positive")

    @property
    def slots(self) -> int:
        return len(self.grid)

    @property
    def qubit_count(self) -> int:
        return len(self.grid[0])

    @property
    def duration(self) -> float:
        return self.slots * self.tau

    @property
    def cycle_slots(self) -> int:
        return int(self.metadata.get("cycle_slots", self.slots))

    def qubit_string(self, v: int) -> tuple[str, ...]:
        return tuple(row[v] for row in self.grid)

    def frames(self) -> list[tuple[str, ...]]:
        return grid_to_frames(self.grid)

    def with_tau(self, tau: float) -> "PulseSchedule":
        return PulseSchedule(self.variant, self.grid, tau, self.terminal_frame, self.coloring, dict(self.metadata))

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "tau": self.tau,
            "slots": self.slots,
            "qubits": self.qubit_count,
            "grid": [list(row) for row in self.grid],
            "terminal_frame": list(self.terminal_frame),
            "coloring": None if self.coloring is None else self.coloring.to_dict(),
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> "PulseSchedule":
        try:
            grid = data["grid"]
            coloring = data.get("coloring")
            sched = cls(
                variant=data.get("variant", "custom"),
                grid=grid,
                tau=float(data.get("tau", 1.0)),
                terminal_frame=tuple(data.get("terminal_frame", ())),
                coloring=None if coloring is None else Coloring.from_dict(coloring),
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"schedule object is missing fields: {exc}") from exc
        if "slots" in data and data["slots"] != sched.slots:
            raise InputError(f"'slots' is {data['slots']} but the grid has {sched.slots} rows")
        if "qubits" in data and data["qubits"] != sched.qubit_count:
            raise InputError(f"'qubits' is {data['qubits']} but the grid has {sched.qubit_count} columns")
        return sched

    @classmethod
    def from_json(cls, text: str) -> "PulseSchedule":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed schedule JSON at line {exc.lineno}: {exc.msg}") from exc
        return cls.from_dict(data)


def _residual_frame(grid: Sequence[Sequence[str]]) -> tuple[str, ...]:
    acc = ["I"] * len(grid[0])
    for row in grid:
        acc = [paulis.product(p, a) for p, a in zip(row, acc)]
    return tuple(acc)


def grid_to_frames(grid: Sequence[Sequence[str]]) -> list[tuple[str, ...]]:
    """Toggling frame ``Q_j`` for every slot, reconstructed from physical pulses."""
    acc = ("I",) * len(grid[0])
    frames = []
    for row in grid:
        frames.append(acc)
        acc = tuple(paulis.product(p, a) for p, a in zip(row, acc))
    return frames


def frames_to_grid(frames: Sequence[Sequence[str]]) -> tuple[tuple[str, ...], ...]:
    """Physical pulses realizing a frame sequence that starts and ends at identity."""
    if any(f != "I" for f in frames[0]):
        raise InputError("frame sequences must start in the identity frame")
    closing = ("I",) * len(frames[0])
    nxt = list(frames[1:]) + [closing]
    return tuple(
        tuple(paulis.product(a, b) for a, b in zip(cur, new)) for cur, new in zip(frames, nxt)
    )


def _check(graph: ConnectivityGraph, coloring: Coloring) -> None:
    if len(coloring) != graph.vertex_count:
        raise InputError("coloring does not cover the graph")
    if not validate_coloring(graph, coloring):
        raise InputError("coloring is not proper: some edge is monochromatic")


def _row_map_for(coloring: Coloring, row_map: ColorRowMap | None, spectators: Iterable[int]) -> ColorRowMap:
    if row_map is None:
        row_map = default_row_map(coloring, spectators=spectators)
    row_map.check_coloring(coloring)
    return row_map


def _row_meta(row_map: ColorRowMap) -> dict:
    return {"row_map": {str(c): r for c, r in sorted(row_map.rows.items())},
            "spectators": sorted(row_map.spectators), "nu": row_map.nu}


def synth_single_axis(
    graph: ConnectivityGraph,
    coloring: Coloring,
    row_map: ColorRowMap | None = None,
    axis: str = "x",
    tau: float = 1.0,
    spectators: Iterable[int] = (),
) -> PulseSchedule:
    """Single-axis CHaDD: color ``c`` sits in the ``axis`` frame at step ``j`` iff ``g(c) . j`` is odd."""
    _check(graph, coloring)
    row_map = _row_map_for(coloring, row_map, spectators)
    label = paulis.axis_label(axis)
    rows = [row_map.row_of(c) for c in coloring.colors]
    frames = [
        tuple(label if schedule_bit(r, j) else "I" for r in rows) for j in range(row_map.size)
    ]
    meta = {"axis": axis, "chi": len(row_map.rows), **_row_meta(row_map)}
    return PulseSchedule("chadd", frames_to_grid(frames), tau, coloring=coloring, metadata=meta)


_MULTI_FRAME = {(0, 0): "I", (0, 1): "X", (1, 0): "Y", (1, 1): "Z"}


def synth_multi_axis(
    graph: ConnectivityGraph,
    coloring: Coloring,
    schur: SchurPartition | None = None,
    triple_map: Mapping[int, int] | None = None,
    tau: float = 1.0,
    spectators: Iterable[int] = (),
) -> PulseSchedule:
    """Multi-axis CHaDD from disjoint Schur triples.

    ``triple_map`` sends each scheduled color to a 1-based position in
    ``schur.triples``; the default assigns them in order.  A triple's rows, in
    ascending order, are the x, y and z sign rows.  At step ``j`` the frame is
    ``I, X, Y`` or ``Z`` according to which of the x and y rows flip sign
    (the z row is their product).  Spectator colors stay in the identity frame.
    """
    _check(graph, coloring)
    spectators = frozenset(spectators)
    scheduled = [c for c in coloring.color_set if c not in spectators]
    chi = len(scheduled)
    if schur is None:
        schur = partition(nu_multi_axis(max(chi, 1)))
    if triple_map is None:
        triple_map = {c: i + 1 for i, c in enumerate(scheduled)}
    triple_map = {int(c): int(k) for c, k in triple_map.items()}
    if len(schur.triples) < chi:
        raise InputError(f"{chi} colors need {chi} Schur triples; partition has {len(schur.triples)}")
    if set(triple_map) != set(scheduled):
        raise InputError(f"triple map covers colors {sorted(triple_map)}, expected {scheduled}")
    if len(set(triple_map.values())) != len(triple_map):
        raise InputError("triple map is not injective")
    for c, k in triple_map.items():
        if not 1 <= k <= len(schur.triples):
            raise InputError(f"color {c} mapped to triple {k}, outside 1..{len(schur.triples)}")
    xy_rows = {c: schur.triples[k - 1][:2] for c, k in triple_map.items()}

    n_slots = 1 << schur.nu
    frames = []
    for j in range(n_slots):
        row = []
        for c in coloring.colors:
            if c in spectators:
                row.append("I")
                continue
            a, b = xy_rows[c]
            row.append(_MULTI_FRAME[(schedule_bit(a, j), schedule_bit(b, j))])
        frames.append(tuple(row))
    meta = {
        "chi": chi,
        "nu": schur.nu,
        "triples": {str(c): list(schur.triples[k - 1]) for c, k in sorted(triple_map.items())},
        "spectators": sorted(spectators),
    }
    return PulseSchedule("chadd-multi", frames_to_grid(frames), tau, coloring=coloring, metadata=meta)


def _ur4_signs(grid: Sequence[Sequence[str]]) -> tuple[tuple[str, ...], ...]:
    cols = []
    for v in range(len(grid[0])):
        k = 0
        col = []
        for row in grid:
            p = row[v]
            if p == "I":
                col.append("I")
                continue
            col.append(p[0] if UR4_SIGNS[k % 4] > 0 else p[0] + "-")
            k += 1
        cols.append(col)
    return tuple(tuple(col[j] for col in cols) for j in range(len(grid)))


def synth_robust(
    graph: ConnectivityGraph,
    coloring: Coloring,
    row_map: ColorRowMap | None = None,
    axis: str = "x",
    tau: float = 1.0,
    spectators: Iterable[int] = (),
) -> PulseSchedule:
    """CHaDD-R: two single-axis cycles with pulse signs rewritten to repeat ``+ - - +``."""
    base = synth_single_axis(graph, coloring, row_map, axis, tau, spectators)
    grid = _ur4_signs(base.grid + base.grid)
    return PulseSchedule("chadd-r", grid, tau, coloring=coloring, metadata=dict(base.metadata))


def synth_concatenated(
    graph: ConnectivityGraph,
    coloring: Coloring,
    row_map: ColorRowMap | None = None,
    tau: float = 1.0,
    outer: str = "x",
    inner: str = "z",
    spectators: Iterable[int] = (),
) -> PulseSchedule:
    """Concatenated multi-axis CHaDD: every slot of the outer sequence holds a full inner sequence."""
    if outer == inner:
        raise InputError("outer and inner axes must differ")
    _check(graph, coloring)
    row_map = _row_map_for(coloring, row_map, spectators)
    lo, li = paulis.axis_label(outer), paulis.axis_label(inner)
    rows = [row_map.row_of(c) for c in coloring.colors]
    n = row_map.size
    frames = []
    for j in range(n):
        for k in range(n):
            frames.append(tuple(
                paulis.product(lo if schedule_bit(r, j) else "I", li if schedule_bit(r, k) else "I")
                for r in rows
            ))
    meta = {"outer": outer, "inner": inner, "chi": len(row_map.rows), **_row_meta(row_map)}
    return PulseSchedule("chadd-cat", frames_to_grid(frames), tau, coloring=coloring, metadata=meta)


def synth_achromatic(
    kind: str,
    qubit_count: int,
    qubits: Iterable[int] | None = None,
    cycles: int = 1,
    tau: float = 1.0,
) -> PulseSchedule:
    """Synchronous single-qubit sequence on ``qubits`` (default all); others idle.

    Every kind is a 4-slot cycle with one pulse after each interval:
    ``xx`` is ``X X X X``, ``xy4`` is ``X Y X Y``, ``ur4`` is ``X X- X- X``.
    """
    kind = kind.lower()
    if kind not in _ACHROMATIC:
        raise InputError(f"unknown achromatic sequence {kind!r}; choose from {sorted(_ACHROMATIC)}")
    if cycles < 1:
        raise InputError("cycles must be >= 1")
    targets = set(range(qubit_count)) if qubits is None else set(qubits)
    if not targets:
        raise InputError("achromatic sequences need at least one target qubit")
    if not targets <= set(range(qubit_count)):
        raise InputError("target qubit out of range")
    pattern = _ACHROMATIC[kind]
    grid = tuple(
        tuple(p if v in targets else "I" for v in range(qubit_count)) for p in pattern
    ) * cycles
    meta = {"targets": sorted(targets), "cycle_slots": len(pattern)}
    return PulseSchedule(kind, grid, tau, metadata=meta)


def repeat(schedule: PulseSchedule, times: int) -> PulseSchedule:
    if times < 1:
        raise InputError("repeat count must be >= 1")
    meta = dict(schedule.metadata)
    meta["cycle_slots"] = schedule.cycle_slots
    return PulseSchedule(schedule.variant, schedule.grid * times, schedule.tau, coloring=schedule.coloring, metadata=meta)


def depth_concatenated(chi: int) -> int:
    return depth_single_axis(chi) ** 2


def synthesize(
    variant: str,
    graph: ConnectivityGraph,
    coloring: Coloring,
    *,
    row_map: ColorRowMap | None = None,
    schur: SchurPartition | None = None,
    triple_map: Mapping[int, int] | None = None,
    spectators: Iterable[int] = (),
    tau: float = 1.0,
    axis: str = "x",
) -> PulseSchedule:
    """Dispatch on a variant name from :data:`VARIANTS`.

    Achromatic variants target every non-spectator qubit.
    """
    spectators = frozenset(spectators)
    if variant == "chadd":
        return synth_single_axis(graph, coloring, row_map, axis, tau, spectators)
    if variant == "chadd-r":
        return synth_robust(graph, coloring, row_map, axis, tau, spectators)
    if variant == "chadd-cat":
        return synth_concatenated(graph, coloring, row_map, tau, spectators=spectators)
    if variant == "chadd-multi":
        return synth_multi_axis(graph, coloring, schur, triple_map, tau, spectators)
    if variant in _ACHROMATIC:
        targets = [v for v, c in enumerate(coloring.colors) if c not in spectators]
        sched = synth_achromatic(variant, graph.vertex_count, targets, 1, tau)
        return PulseSchedule(sched.variant, sched.grid, tau, coloring=coloring,
                             metadata={**sched.metadata, "spectators": sorted(spectators)})
    raise InputError(f"unknown variant {variant!r}; choose from {VARIANTS}")


@dataclass(frozen=True)
class ScheduleMetrics:
    depth: int
    slots: int
    total_pulses: int
    pulse_rate: Fraction  # pulses per qubit per slot
    prr: float  # pulses per qubit per unit time
    per_color_pulses: dict[int, int]
    color_string_pulses: dict[int, int]
    spectator_pulses: int

    def csv_row(self, variant: str, chi: int | None) -> dict:
        return {"variant": variant, "chi": "" if chi is None else chi, "depth": self.depth,
                "pulses": self.total_pulses, "prr": repr(self.prr)}


def compute_metrics(schedule: PulseSchedule, qubits: Iterable[int] | None = None) -> ScheduleMetrics:
    """Pulse accounting over the whole grid plus the terminal frame.

    ``qubits`` restricts the count (e.g. to system qubits).  ``per_color_pulses``
    sums physical pulses over all qubits of a color; ``color_string_pulses``
    counts one color's pulse string once, i.e. single-color pulses.
    """
    chosen = sorted(range(schedule.qubit_count) if qubits is None else set(qubits))
    if not chosen:
        raise InputError("metrics need at least one qubit")
    per_qubit = {
        v: sum(row[v] != "I" for row in schedule.grid) + (schedule.terminal_frame[v] != "I")
        for v in chosen
    }
    total = sum(per_qubit.values())
    spectators = set(schedule.metadata.get("spectators", ()))
    per_color: dict[int, int] = {}
    string_count: dict[int, int] = {}
    colored = 0
    if schedule.coloring is not None:
        for v in chosen:
            c = schedule.coloring[v]
            if c in spectators:
                continue
            per_color[c] = per_color.get(c, 0) + per_qubit[v]
            string_count.setdefault(c, per_qubit[v])
            colored += per_qubit[v]
    rate = Fraction(total, len(chosen) * schedule.slots)
    return ScheduleMetrics(
        depth=schedule.cycle_slots,
        slots=schedule.slots,
        total_pulses=total,
        pulse_rate=rate,
        prr=float(rate) / schedule.tau,
        per_color_pulses=per_color,
        color_string_pulses=string_count,
        spectator_pulses=total - colored,
    )

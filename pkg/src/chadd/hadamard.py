"""Walsh-Hadamard sign arithmetic and color-to-row maps.

``W_nu`` is never stored densely: the sign of entry ``(i, j)`` is
``(-1) ** popcount(i & j)``.  Row 0 is all ``+`` and is reserved for spectator
colors whose qubits receive no pulses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError
from .graphcore import Coloring

__all__ = [
    "WalshMatrix",
    "ColorRowMap",
    "depth_single_axis",
    "nu_single_axis",
    "schedule_bit",
    "sign",
    "row_flips",
    "default_row_map",
]


def sign(i: int, j: int) -> int:
    return -1 if (int(i) & int(j)).bit_count() & 1 else 1


def schedule_bit(g_of_c: int, j: int) -> int:
    """1 when the qubits scheduled on row ``g_of_c`` sit inside the conjugation frame at step ``j``."""
    return (int(g_of_c) & int(j)).bit_count() & 1


def nu_single_axis(chi: int) -> int:
    if not isinstance(chi, (int, np.integer)) or chi < 1:
        raise InputError(f"chromatic number must be a positive integer, got {chi!r}")
    return int(chi).bit_length()  # floor(log2 chi) + 1


def depth_single_axis(chi: int) -> int:
    return 1 << nu_single_axis(chi)


@dataclass(frozen=True)
class WalshMatrix:
    nu: int

    def __post_init__(self):
        if self.nu < 0:
            raise InputError("nu must be non-negative")

    @property
    def size(self) -> int:
        return 1 << self.nu

    def sign(self, i: int, j: int) -> int:
        return sign(i, j)

    def row(self, i: int) -> np.ndarray:
        j = np.arange(self.size)
        bits = np.zeros(self.size, dtype=np.int64)
        x = i & j
        while np.any(x):
            bits ^= x & 1
            x >>= 1
        return 1 - 2 * bits

    def dense(self) -> np.ndarray:
        """Materialized ``size x size`` sign matrix (tests and small sizes only)."""
        return np.stack([self.row(i) for i in range(self.size)])


def row_flips(row: int, nu: int) -> int:
    """Cyclic sign changes along a row: the pulses one color receives per cycle."""
    n = 1 << nu
    return sum(schedule_bit(row, j) != schedule_bit(row, (j + 1) % n) for j in range(n))


@dataclass(frozen=True)
class ColorRowMap:
    """Injective map from colors to Hadamard rows ``1..N-1``.

    ``spectators`` lists colors deliberately left on row 0; their qubits are
    never pulsed, so their own decoherence is untouched while their couplings
    to scheduled colors still average out.
    """

    rows: Mapping[int, int]
    nu: int
    spectators: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        rows = {int(c): int(r) for c, r in dict(self.rows).items()}
        spectators = frozenset(int(c) for c in self.spectators)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "spectators", spectators)
        n = 1 << self.nu
        for c, r in rows.items():
            if not 1 <= r < n:
                raise InputError(f"color {c} mapped to row {r}, outside 1..{n - 1}")
        if len(set(rows.values())) != len(rows):
            raise InputError("color-to-row map is not injective")
        if spectators & rows.keys():
            raise InputError("a color cannot be both scheduled and a spectator")

    @property
    def size(self) -> int:
        return 1 << self.nu

    def row_of(self, color: int) -> int:
        if color in self.spectators:
            return 0
        try:
            return self.rows[color]
        except KeyError:
            raise InputError(f"row map has no entry for color {color}") from None

    def check_coloring(self, coloring: Coloring) -> None:
        domain = set(self.rows) | set(self.spectators)
        if domain != set(coloring.color_set):
            raise InputError(
                f"row map covers colors {sorted(domain)} but the coloring uses {list(coloring.color_set)}"
            )

    def to_dict(self) -> dict:
        out = {"rows": {str(c): r for c, r in sorted(self.rows.items())}, "nu": self.nu}
        if self.spectators:
            out["spectators"] = sorted(self.spectators)
        return out

    @classmethod
    def from_dict(cls, data: Mapping, nu: int | None = None) -> "ColorRowMap":
        rows = {int(c): int(r) for c, r in data["rows"].items()}
        if nu is None:
            nu = data.get("nu")
        if nu is None:
            nu = max(rows.values(), default=1).bit_length()
        return cls(rows, int(nu), frozenset(data.get("spectators", ())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _optimal_cost(weights: list[int], costs: list[int]) -> int:
    # rearrangement inequality: heaviest colors on the rows with fewest flips
    ws = sorted(weights, reverse=True)
    cs = sorted(costs)[: len(ws)]
    return sum(w * c for w, c in zip(ws, cs))


def default_row_map(
    coloring: Coloring,
    nu: int | None = None,
    spectators: Iterable[int] = (),
) -> ColorRowMap:
    """Row map minimizing the total number of physical pulses per cycle.

    A color on row ``r`` pulses each of its qubits ``row_flips(r)`` times per
    cycle, so the cost is ``sum_c |V_c| * flips(g(c))``.  Among optimal maps the
    lexicographically smallest ``(g(1), g(2), ...)`` is returned.  For two
    colors on ``W_2`` this gives ``{1: 2, 2: 3}``, the balanced schedule.
    """
    spectators = frozenset(spectators)
    scheduled = [c for c in coloring.color_set if c not in spectators]
    if nu is None:
        nu = nu_single_axis(max(len(scheduled), 1))
    n = 1 << nu
    if len(scheduled) > n - 1:
        raise InputError(f"{len(scheduled)} colors do not fit in the {n - 1} nonzero rows of W_{nu}")
    flips = {r: row_flips(r, nu) for r in range(1, n)}
    weight = {c: len(coloring.classes[c]) for c in scheduled}

    target = _optimal_cost([weight[c] for c in scheduled], list(flips.values()))
    chosen: dict[int, int] = {}
    spent = 0
    free = set(flips)
    for i, c in enumerate(scheduled):
        rest = scheduled[i + 1:]
        for r in sorted(free):
            remaining = free - {r}
            cost = spent + weight[c] * flips[r]
            cost += _optimal_cost([weight[d] for d in rest], [flips[q] for q in remaining])
            if cost == target:
                chosen[c] = r
                spent += weight[c] * flips[r]
                free.remove(r)
                break
    return ColorRowMap(chosen, nu, spectators)

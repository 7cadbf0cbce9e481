"""Single-qubit Pauli labels with phases dropped.

Labels are ``"I", "X", "Y", "Z"`` plus the negative-rotation pulse labels
``"X-", "Y-", "Z-"``.  For frame bookkeeping a label reduces to its symplectic
bits ``(x, z)``; products XOR those bits and ignore the global phase.
"""

from __future__ import annotations

from .errors import InputError

LABELS = ("I", "X", "Y", "Z", "X-", "Y-", "Z-")
AXES = ("x", "y", "z")

_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_FROM_BITS = {v: k for k, v in _BITS.items()}


def check_label(label: str) -> str:
    if label not in LABELS:
        raise InputError(f"unknown pulse label {label!r}; expected one of {LABELS}")
    return label


def base(label: str) -> str:
    """Axis letter of a label with any sign stripped (``"X-" -> "X"``)."""
    return label[0]


def is_negative(label: str) -> bool:
    return label.endswith("-")


def bits(label: str) -> tuple[int, int]:
    return _BITS[label[0]]


def product(a: str, b: str) -> str:
    xa, za = _BITS[a[0]]
    xb, zb = _BITS[b[0]]
    return _FROM_BITS[(xa ^ xb, za ^ zb)]


def anticommutes(a: str, b: str) -> bool:
    xa, za = _BITS[a[0]]
    xb, zb = _BITS[b[0]]
    return bool((xa & zb) ^ (za & xb))


def axis_label(axis: str) -> str:
    if axis not in AXES:
        raise InputError(f"axis must be one of {AXES}, got {axis!r}")
    return axis.upper()

"""Exact first-order average Hamiltonian over the Pauli algebra.

Conjugating a Pauli string by a Pauli frame only flips its sign, once per
qubit where the two anticommute, so the first-order average of a term is the
term times an integer: the sum of those signs over the slots.  Everything here
is integer or ``Fraction`` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .. import paulis
from ..errors import InputError
from ..synth import PulseSchedule, grid_to_frames
from .hamiltonian import ErrorHamiltonian, Term, term_string

__all__ = ["PauliPolynomial", "conjugation_sign", "term_signs", "first_order_average"]

Key = tuple  # (pauli string, tag or None)


def conjugation_sign(pauli: str, frame: Sequence[str]) -> int:
    """Sign ``s`` with ``F P F^dagger = s P`` for Pauli strings ``P`` and frame ``F``."""
    flips = sum(paulis.anticommutes(p, f) for p, f in zip(pauli, frame) if p != "I")
    return -1 if flips & 1 else 1


@dataclass
class PauliPolynomial:
    """Sparse map from ``(pauli_string, tag)`` to an exact rational coefficient."""

    coeffs: dict[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in dict(self.coeffs).items():
            c = Fraction(c)
            if c:
                clean[self._key(key)] = c
        self.coeffs = clean

    @staticmethod
    def _key(key) -> Key:
        if isinstance(key, str):
            return (key, None)
        string, tag = key
        return (string, tag)

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(self._key(key), Fraction(0))

    def __iter__(self) -> Iterator[Key]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliPolynomial) and self.coeffs == other.coeffs

    def items(self):
        return self.coeffs.items()

    def add(self, key, coeff) -> None:
        key = self._key(key)
        c = self.coeffs.get(key, Fraction(0)) + Fraction(coeff)
        if c:
            self.coeffs[key] = c
        else:
            self.coeffs.pop(key, None)

    def __add__(self, other: "PauliPolynomial") -> "PauliPolynomial":
        out = PauliPolynomial(dict(self.coeffs))
        for k, c in other.items():
            out.add(k, c)
        return out

    def scale(self, factor) -> "PauliPolynomial":
        f = Fraction(factor)
        return PauliPolynomial({k: c * f for k, c in self.coeffs.items()})

    def conjugate(self, frame: Sequence[str]) -> "PauliPolynomial":
        return PauliPolynomial(
            {(s, t): c * conjugation_sign(s, frame) for (s, t), c in self.coeffs.items()}
        )


def _terms(shape: ErrorHamiltonian | Iterable[Term]) -> list[Term]:
    if isinstance(shape, ErrorHamiltonian):
        return [t for t, _ in shape.terms()]
    return [tuple(t) for t in shape]


def term_signs(schedule: PulseSchedule, terms: Iterable[Term]) -> dict[Term, list[int]]:
    """Per-slot conjugation signs of each term, frames rebuilt from the physical pulses."""
    frames = grid_to_frames(schedule.grid)
    n = schedule.qubit_count
    out = {}
    for t in terms:
        s = term_string(t, n)
        out[t] = [conjugation_sign(s, f) for f in frames]
    return out


def first_order_average(
    schedule: PulseSchedule,
    shape: ErrorHamiltonian | Iterable[Term],
    weighted: bool = False,
) -> PauliPolynomial:
    """``sum_j Q_j H Q_j^dagger`` with each term tagged by itself.

    With ``weighted=False`` every term enters with coefficient 1, so the result
    holds the integer multiplier (in ``[-slots, slots]``) of each term; terms
    that cancel are absent.  ``weighted=True`` multiplies by the Hamiltonian's
    own coefficients, converted exactly from their float values.
    """
    terms = _terms(shape)
    n = schedule.qubit_count
    for t in terms:
        if max(t[0], t[1] if len(t) == 4 else 0) >= n:
            raise InputError(f"term {t} acts outside the {n}-qubit schedule")
    weights: Mapping[Hashable, float] = {}
    if weighted:
        if not isinstance(shape, ErrorHamiltonian):
            raise InputError("weighted averages need an ErrorHamiltonian, not a bare shape")
        weights = dict(shape.terms())
    poly = PauliPolynomial()
    for t, signs in term_signs(schedule, terms).items():
        total = sum(signs)
        coeff = Fraction(total) * (Fraction(weights[t]) if weighted else 1)
        poly.add((term_string(t, n), t), coeff)
    return poly

"""Dense bang-bang evolution under an error Hamiltonian.

Ordering: qubit 0 is the most significant tensor factor and the bath is the
last (least significant) factor.  States and propagators are carried as
``(dim, batch)`` arrays; pulses act as single-qubit 2x2 operations on the
reshaped tensor, and free evolution uses an eigendecomposition of ``H``
computed once per Hamiltonian (or the diagonal directly when ``H`` is built
from ``z`` terms only).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from .. import paulis
from ..errors import NumericalError, ResourceError, InputError
from ..synth import PulseSchedule
from .hamiltonian import ErrorHamiltonian
from .oracle import term_signs

__all__ = [
    "MAX_QUBITS",
    "PAULI",
    "ResidualScan",
    "Propagator",
    "build_dense",
    "pulse_matrix",
    "apply_pulse_error",
    "evolve_schedule",
    "evolve_states",
    "average_hamiltonian",
    "target_unitary",
    "phase_distance",
    "residual_scaling",
]

MAX_QUBITS = 14  # n + log2(bath_dim)
UNDERFLOW = 1e-13

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n: int, bath_dim: int) -> int:
    dim = (1 << n) * bath_dim
    if n + np.log2(bath_dim) > MAX_QUBITS + 1e-9:
        raise ResourceError(f"dense dimension 2^{n} x {bath_dim} exceeds the 2^{MAX_QUBITS} limit")
    return dim


def _sparse_term(n: int, ops: dict[int, str], bath: np.ndarray | None, bath_dim: int) -> sp.csr_matrix:
    out = sp.identity(1, dtype=complex, format="csr")
    for v in range(n):
        out = sp.kron(out, sp.csr_matrix(PAULI[ops.get(v, "I")]), format="csr")
    b = sp.identity(bath_dim, dtype=complex, format="csr") if bath is None else sp.csr_matrix(bath)
    return sp.kron(out, b, format="csr")


def build_dense(h: ErrorHamiltonian) -> np.ndarray:
    """Full Hermitian matrix of ``h``, dimension ``2**n * bath_dim``."""
    dim = _check_size(h.n, h.bath_dim)
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for term, w in h.terms():
        if len(term) == 2:
            ops = {term[0]: term[1].upper()}
        else:
            ops = {term[0]: term[2].upper(), term[1]: term[3].upper()}
        total = total + w * _sparse_term(h.n, ops, h.bath_op(term), h.bath_dim)
    return total.toarray()


def _diagonal(h: ErrorHamiltonian) -> np.ndarray:
    n = h.n
    idx = np.arange(1 << n)
    z = [1 - 2 * ((idx >> (n - 1 - v)) & 1) for v in range(n)]
    diag = np.zeros(1 << n)
    for (v, _), w in h.singles.items():
        diag += w * z[v]
    for (u, v, _, _), w in h.pairs.items():
        diag += w * z[u] * z[v]
    return diag


@lru_cache(maxsize=None)
def pulse_matrix(label: str, epsilon: float = 0.0) -> np.ndarray:
    """``P_a(theta) = exp(-i theta sigma_a / 2)`` with ``theta = +-pi (1 + epsilon)``."""
    paulis.check_label(label)
    if label == "I":
        return PAULI["I"]
    theta = np.pi * (1 + epsilon) * (-1 if paulis.is_negative(label) else 1)
    out = np.cos(theta / 2) * PAULI["I"] - 1j * np.sin(theta / 2) * PAULI[paulis.base(label)]
    out.setflags(write=False)
    return out


def apply_pulse_error(schedule: PulseSchedule, epsilon: float) -> list[dict[int, np.ndarray]]:
    """Per-slot maps ``qubit -> 2x2 pulse`` with over-rotation ``epsilon``; the last entry is the terminal frame."""
    if abs(epsilon) >= 0.2:
        raise InputError("pulse over-rotation must satisfy |epsilon| < 0.2")
    rows = list(schedule.grid) + [schedule.terminal_frame]
    return [{v: pulse_matrix(p, float(epsilon)) for v, p in enumerate(row) if p != "I"} for row in rows]


def _apply_1q(state: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    s = state.reshape(1 << q, 2, -1)
    return np.einsum("ab,ibj->iaj", m, s).reshape(state.shape)


class Propagator:
    """Free evolution ``exp(-i tau H)`` applied to ``(dim, batch)`` arrays."""

    def __init__(self, h: ErrorHamiltonian):
        self.n = h.n
        self.bath_dim = h.bath_dim
        self.dim = _check_size(h.n, h.bath_dim)
        self._cache: dict[float, np.ndarray] = {}
        if h.is_diagonal:
            self.energies = _diagonal(h)
            self.vectors = None
        else:
            self.energies, self.vectors = np.linalg.eigh(build_dense(h))

    def step_operator(self, tau: float) -> np.ndarray:
        """Diagonal phases (fast path) or the dense ``dim x dim`` unitary."""
        tau = float(tau)
        if tau not in self._cache:
            phases = np.exp(-1j * tau * self.energies)
            if self.vectors is None:
                self._cache[tau] = phases
            else:
                self._cache[tau] = (self.vectors * phases) @ self.vectors.conj().T
        return self._cache[tau]

    def free(self, state: np.ndarray, tau: float) -> np.ndarray:
        op = self.step_operator(tau)
        if self.vectors is None:
            return op[:, None] * state
        return op @ state


def evolve_states(
    states: np.ndarray,
    schedule: PulseSchedule,
    propagator: Propagator,
    tau: float | None = None,
    epsilon: float = 0.0,
    close: bool = True,
) -> np.ndarray:
    """Run one pass of ``schedule`` on the columns of ``states``.

    ``close`` applies the terminal frame correction after the last slot.
    """
    if schedule.qubit_count != propagator.n:
        raise InputError(f"schedule has {schedule.qubit_count} qubits, Hamiltonian has {propagator.n}")
    tau = schedule.tau if tau is None else tau
    ops = apply_pulse_error(schedule, epsilon)
    if not close:
        ops = ops[:-1]
    state = np.array(states, dtype=complex, copy=True)
    for j, slot in enumerate(ops):
        if j < schedule.slots:
            state = propagator.free(state, tau)
        for q, m in slot.items():
            state = _apply_1q(state, m, q)
    return state


def evolve_schedule(
    schedule: PulseSchedule,
    hamiltonian: ErrorHamiltonian,
    tau: float | None = None,
    epsilon: float = 0.0,
    propagator: Propagator | None = None,
) -> np.ndarray:
    """Total unitary ``(terminal frame) * prod_j [pulses_j exp(-i tau H)]``."""
    prop = propagator or Propagator(hamiltonian)
    u = evolve_states(np.eye(prop.dim, dtype=complex), schedule, prop, tau, epsilon)
    err = np.linalg.norm(u.conj().T @ u - np.eye(prop.dim), 2)
    if err > 1e-10:
        raise NumericalError(f"evolution lost unitarity: |U^dag U - I| = {err:.2e}")
    return u


def average_hamiltonian(schedule: PulseSchedule, hamiltonian: ErrorHamiltonian) -> ErrorHamiltonian:
    """First-order average ``(1/slots) sum_j Q_j H Q_j^dagger`` as a Hamiltonian of the same shape."""
    signs = term_signs(schedule, [t for t, _ in hamiltonian.terms()])
    scale = {t: sum(s) / schedule.slots for t, s in signs.items()}
    singles = {t: w * scale[t] for t, w in hamiltonian.singles.items() if scale[t]}
    pairs = {t: w * scale[t] for t, w in hamiltonian.pairs.items() if scale[t]}
    baths = {t: op for t, op in hamiltonian.bath_ops.items() if t in singles or t in pairs}
    return ErrorHamiltonian(hamiltonian.graph, singles, pairs, hamiltonian.bath_dim, baths)


def target_unitary(schedule: PulseSchedule, hamiltonian: ErrorHamiltonian, tau: float | None = None) -> np.ndarray:
    """``exp(-i T Hbar)`` with ``Hbar`` the first-order average and ``T`` the schedule duration.

    Surviving terms are exactly those the decoupling leaves at first order: the
    pure-axis terms for single-axis CHaDD, nothing for multi-axis and
    concatenated CHaDD (the target is then the identity).
    """
    tau = schedule.tau if tau is None else tau
    avg = average_hamiltonian(schedule, hamiltonian)
    dim = _check_size(hamiltonian.n, hamiltonian.bath_dim)
    if not avg.terms():
        return np.eye(dim, dtype=complex)
    return expm(-1j * schedule.slots * tau * build_dense(avg))


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Operator-norm distance ``|U - e^{i phi} V|`` with ``phi = arg tr(V^dagger U)``."""
    overlap = np.trace(v.conj().T @ u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v, 2))


@dataclass(frozen=True)
class ResidualScan:
    taus: tuple[float, ...]
    residuals: tuple[float, ...]
    underflow: tuple[bool, ...]
    slope: float | None


def residual_scaling(
    schedule: PulseSchedule,
    hamiltonian: ErrorHamiltonian,
    tau_list: Sequence[float],
) -> ResidualScan:
    """Residual distance to the first-order target at each ``tau`` and its log-log slope.

    Residuals under ``1e-13`` are flagged and left out of the fit; the slope is
    ``None`` when fewer than two points remain.
    """
    taus = tuple(float(t) for t in tau_list)
    if len(taus) < 3:
        raise InputError("residual scaling needs at least three tau values")
    ratios = np.array(taus[1:]) / np.array(taus[:-1])
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise InputError("tau values must form a geometric progression")
    prop = Propagator(hamiltonian)
    res = []
    for t in taus:
        u = evolve_schedule(schedule, hamiltonian, t, propagator=prop)
        res.append(phase_distance(u, target_unitary(schedule, hamiltonian, t)))
    flags = tuple(r < UNDERFLOW for r in res)
    xs = [np.log(t) for t, f in zip(taus, flags) if not f]
    ys = [np.log(r) for r, f in zip(res, flags) if not f]
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else None
    return ResidualScan(taus, tuple(res), flags, slope)

"""Simulated fidelity experiments with preparation settings and binomial shots.

A setting prepares every system qubit in one Pauli eigenstate and every gray
(spectator) qubit in ``|0>``, ``|+>`` or ``|1>``.  After the schedule runs the
system preparation is undone, and the fidelity of a setting is the fraction of
``0`` outcomes over all measured system qubits (``metric="marginal"``), or
optionally the probability that they all read ``0`` (``metric="joint"``).  Bath factors start maximally mixed, which
is simulated exactly by carrying one column per bath basis state.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import InputError
from ..synth import PulseSchedule
from .dense import Propagator, _apply_1q, evolve_states
from .hamiltonian import ErrorHamiltonian

__all__ = [
    "SYSTEM_STATES",
    "GRAY_STATES",
    "PrepSetting",
    "FidelityRecord",
    "prep_settings",
    "fidelity_experiment",
    "records_to_csv",
    "worker_count",
]

_S2 = 1 / math.sqrt(2)
# unitaries mapping |0> to each preparation state
_PREP = {
    "0": np.eye(2, dtype=complex),
    "1": np.array([[0, 1], [1, 0]], dtype=complex),
    "+": np.array([[_S2, -_S2], [_S2, _S2]], dtype=complex),
    "-": np.array([[_S2, _S2], [-_S2, _S2]], dtype=complex),
    "+i": np.array([[_S2, 1j * _S2], [1j * _S2, _S2]], dtype=complex),
    "-i": np.array([[_S2, -1j * _S2], [-1j * _S2, _S2]], dtype=complex),
}
SYSTEM_STATES = ("0", "1", "+", "-", "+i", "-i")
GRAY_STATES = ("0", "+", "1")


@dataclass(frozen=True)
class PrepSetting:
    system: str
    gray: str

    def __post_init__(self):
        if self.system not in _PREP or self.gray not in _PREP:
            raise InputError(f"unknown preparation {self}")


def prep_settings() -> list[PrepSetting]:
    """The 18 settings: 3 gray preparations times 6 system Pauli eigenstates."""
    return [PrepSetting(s, g) for g in GRAY_STATES for s in SYSTEM_STATES]


@dataclass(frozen=True)
class FidelityRecord:
    schedule: str
    repeats: int
    duration: float
    mean_fidelity: float
    sigma: float
    exact_fidelity: float


def worker_count(default: int | None = None) -> int:
    env = os.environ.get("CHADD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"CHADD_THREADS must be an integer, got {env!r}") from None
    return default or min(8, os.cpu_count() or 1)


def _initial_states(
    settings: Sequence[PrepSetting], n: int, bath_dim: int, system: Sequence[int], gray: Sequence[int]
) -> np.ndarray:
    dim = (1 << n) * bath_dim
    cols = []
    for st in settings:
        psi = np.zeros((dim, bath_dim), dtype=complex)
        for b in range(bath_dim):
            psi[b, b] = 1.0  # |0...0> (x) |b>
        for v in system:
            psi = _apply_1q(psi, _PREP[st.system], v)
        for v in gray:
            psi = _apply_1q(psi, _PREP[st.gray], v)
        cols.append(psi)
    return np.concatenate(cols, axis=1)


def _success_probabilities(
    states: np.ndarray,
    settings: Sequence[PrepSetting],
    n: int,
    bath_dim: int,
    system: Sequence[int],
    metric: str = "marginal",
) -> np.ndarray:
    psi = states
    for k, st in enumerate(settings):
        block = slice(k * bath_dim, (k + 1) * bath_dim)
        undo = _PREP[st.system].conj().T
        sub = psi[:, block]
        for v in system:
            sub = _apply_1q(sub, undo, v)
        psi[:, block] = sub
    probs = np.abs(psi.reshape((2,) * n + (bath_dim, len(settings), bath_dim))) ** 2
    probs = np.moveaxis(probs, n + 1, 0) / bath_dim  # settings first; bath input averaged
    if metric == "marginal":
        return np.mean([probs.take(0, axis=1 + v).reshape(len(settings), -1).sum(1) for v in system], axis=0)
    if metric != "joint":
        raise InputError(f"unknown fidelity metric {metric!r}")
    index = (slice(None),) + tuple(0 if v in set(system) else slice(None) for v in range(n))
    return probs[index].reshape(len(settings), -1).sum(1)


def _run_one(
    name: str,
    schedule: PulseSchedule,
    propagator: Propagator,
    settings: Sequence[PrepSetting],
    system: Sequence[int],
    gray: Sequence[int],
    repeats: Sequence[int],
    shots: int,
    epsilon: float,
    seed: np.random.SeedSequence,
    metric: str,
) -> list[FidelityRecord]:
    rng = np.random.default_rng(seed)
    n, bd = propagator.n, propagator.bath_dim
    state = _initial_states(settings, n, bd, system, gray)
    cycle = PulseSchedule(schedule.variant, schedule.grid, schedule.tau, schedule.terminal_frame)
    out = []
    done = 0
    for r in repeats:
        while done < r:
            state = evolve_states(state, cycle, propagator, epsilon=epsilon)
            done += 1
        probs = _success_probabilities(state.copy(), settings, n, bd, system, metric)
        probs = np.clip(probs, 0.0, 1.0)
        est = rng.binomial(shots, probs) / shots if shots else probs
        sigma = float(np.std(est, ddof=1)) if len(est) > 1 else 0.0
        out.append(FidelityRecord(name, r, round(r * schedule.slots * schedule.tau, 12), float(np.mean(est)), sigma, float(np.mean(probs))))
    return out


def fidelity_experiment(
    schedules: Mapping[str, PulseSchedule] | Sequence[PulseSchedule],
    hamiltonian: ErrorHamiltonian,
    repeats_grid: Sequence[int] | Mapping[str, Sequence[int]],
    shots: int = 1000,
    system_qubits: Iterable[int] | None = None,
    gray_qubits: Iterable[int] = (),
    settings: Sequence[PrepSetting] | None = None,
    epsilon: float = 0.0,
    seed: int = 0,
    granularity: Mapping[str, int] | None = None,
    workers: int | None = None,
    metric: str = "marginal",
) -> list[FidelityRecord]:
    """Mean fidelity over the preparation settings after each repeat count.

    ``repeats_grid`` counts passes of each schedule (one list for all, or one
    per name).  ``granularity`` optionally demands repeat counts be multiples
    of a per-schedule value.  ``sigma`` is the sample standard deviation of the
    per-setting estimates.  ``shots=0`` skips sampling and reports exact
    probabilities.  ``metric="joint"`` scores the all-zero outcome instead of
    the per-qubit fraction of zeros.  Shot streams are spawned per schedule from ``seed``, so
    results do not depend on worker scheduling.
    """
    if isinstance(schedules, Mapping):
        named = list(schedules.items())
    else:
        named = [(s.variant, s) for s in schedules]
    if len({k for k, _ in named}) != len(named):
        raise InputError("schedule names must be unique")
    if metric not in ("joint", "marginal"):
        raise InputError(f"unknown fidelity metric {metric!r}")
    if shots < 0:
        raise InputError("shots must be >= 0")
    n = hamiltonian.n
    gray = sorted(set(gray_qubits))
    system = sorted(set(range(n)) - set(gray)) if system_qubits is None else sorted(set(system_qubits))
    if set(system) & set(gray):
        raise InputError("a qubit cannot be both system and gray")
    settings = list(settings) if settings is not None else prep_settings()
    if not settings:
        raise InputError("need at least one preparation setting")
    for name, s in named:
        if s.qubit_count != n:
            raise InputError(f"schedule {name!r} has {s.qubit_count} qubits, Hamiltonian has {n}")
    grids = {}
    for name, _ in named:
        reps = repeats_grid[name] if isinstance(repeats_grid, Mapping) else repeats_grid
        reps = [int(r) for r in reps]
        if any(r < 0 for r in reps) or reps != sorted(reps):
            raise InputError(f"repeat counts for {name!r} must be non-negative and ascending")
        g = (granularity or {}).get(name, 1)
        bad = [r for r in reps if r % g]
        if bad:
            raise InputError(f"repeat counts {bad} for {name!r} are not multiples of its granularity {g}")
        grids[name] = reps

    propagator = Propagator(hamiltonian)
    seeds = np.random.SeedSequence(seed).spawn(len(named))
    jobs = [
        (name, s, propagator, settings, system, gray, grids[name], shots, epsilon, sq, metric)
        for (name, s), sq in zip(named, seeds)
    ]
    with ThreadPoolExecutor(max_workers=workers or worker_count()) as pool:
        results = list(pool.map(lambda a: _run_one(*a), jobs))
    return [rec for chunk in results for rec in chunk]


def records_to_csv(records: Iterable[FidelityRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schedule", "repeats", "duration", "mean_fidelity", "sigma"])
    for r in records:
        w.writerow([r.schedule, r.repeats, repr(r.duration), repr(r.mean_fidelity), repr(r.sigma)])
    return buf.getvalue()

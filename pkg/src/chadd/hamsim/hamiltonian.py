"""Error Hamiltonians: one- and two-body Pauli terms, optionally dressed by bath operators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import InputError
from ..graphcore import ConnectivityGraph
from ..paulis import AXES

__all__ = ["ErrorHamiltonian", "Term", "random_hamiltonian", "hamiltonian_shape", "term_string"]

# (v, a) for single-qubit terms, (u, v, a, b) with u < v for couplings
Term = tuple


def term_string(term: Term, n: int) -> str:
    """Pauli string (``"IXZ..."``) of a term on ``n`` qubits."""
    chars = ["I"] * n
    if len(term) == 2:
        chars[term[0]] = term[1].upper()
    else:
        u, v, a, b = term
        chars[u] = a.upper()
        chars[v] = b.upper()
    return "".join(chars)


def _canon_pair(u: int, v: int, a: str, b: str) -> Term:
    return (u, v, a, b) if u < v else (v, u, b, a)


@dataclass(frozen=True)
class ErrorHamiltonian:
    """``H = sum omega_v^a s_v^a (x) B + sum J_uv^ab s_u^a s_v^b (x) B``.

    ``bath_ops`` maps a term to its dimensionless Hermitian bath operator;
    terms without one act as the identity on the bath.
    """

    graph: ConnectivityGraph
    singles: Mapping[Term, float] = field(default_factory=dict)
    pairs: Mapping[Term, float] = field(default_factory=dict)
    bath_dim: int = 1
    bath_ops: Mapping[Term, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        n = self.graph.vertex_count
        singles: dict[Term, float] = {}
        for (v, a), w in dict(self.singles).items():
            if a not in AXES or not 0 <= v < n:
                raise InputError(f"bad single-qubit term {(v, a)}")
            singles[(int(v), a)] = singles.get((int(v), a), 0.0) + float(w)
        pairs: dict[Term, float] = {}
        edges = set(self.graph.sorted_edges)
        for key, w in dict(self.pairs).items():
            u, v, a, b = key
            if a not in AXES or b not in AXES:
                raise InputError(f"bad coupling axes in {key}")
            key = _canon_pair(int(u), int(v), a, b)
            if (key[0], key[1]) not in edges:
                raise InputError(f"coupling {key} is not on an edge of the graph")
            pairs[key] = pairs.get(key, 0.0) + float(w)
        if int(self.bath_dim) < 1:
            raise InputError("bath_dim must be >= 1")
        baths = {}
        for key, op in dict(self.bath_ops).items():
            key = tuple(key) if len(key) == 2 else _canon_pair(*key)
            if key not in singles and key not in pairs:
                raise InputError(f"bath operator given for absent term {key}")
            op = np.asarray(op, dtype=complex)
            if op.shape != (self.bath_dim, self.bath_dim):
                raise InputError(f"bath operator for {key} must be {self.bath_dim}x{self.bath_dim}")
            if not np.allclose(op, op.conj().T, atol=1e-12, rtol=0):
                raise InputError(f"bath operator for {key} is not Hermitian")
            baths[key] = op
        object.__setattr__(self, "singles", singles)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "bath_dim", int(self.bath_dim))
        object.__setattr__(self, "bath_ops", baths)

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    def terms(self) -> list[tuple[Term, float]]:
        return sorted(self.singles.items()) + sorted(self.pairs.items())

    def bath_op(self, term: Term) -> np.ndarray | None:
        return self.bath_ops.get(term)

    @property
    def is_diagonal(self) -> bool:
        """True when every term is built from ``z`` and there is no bath."""
        if self.bath_dim != 1:
            return False
        return all(a == "z" for (_, a) in self.singles) and all(
            a == "z" and b == "z" for (_, _, a, b) in self.pairs
        )

    def norm_bound(self) -> float:
        """Triangle-inequality bound on the operator norm."""
        total = 0.0
        for term, w in self.terms():
            op = self.bath_ops.get(term)
            total += abs(w) * (1.0 if op is None else float(np.linalg.norm(op, 2)))
        return total

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "singles": [[v, a, w] for (v, a), w in sorted(self.singles.items())],
            "pairs": [[u, v, a, b, w] for (u, v, a, b), w in sorted(self.pairs.items())],
            "bath_dim": self.bath_dim,
        }

    def to_json(self) -> str:
        if self.bath_ops:
            raise InputError("bath operators are not part of the JSON format")
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "ErrorHamiltonian":
        try:
            graph = ConnectivityGraph.from_dict(data["graph"])
            singles = {(int(v), str(a)): float(w) for v, a, w in data.get("singles", [])}
            pairs = {
                (int(u), int(v), str(a), str(b)): float(w) for u, v, a, b, w in data.get("pairs", [])
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Hamiltonian object: {exc}") from exc
        return cls(graph, singles, pairs, int(data.get("bath_dim", 1)))

    @classmethod
    def from_json(cls, text: str) -> "ErrorHamiltonian":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed Hamiltonian JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)


def hamiltonian_shape(h: ErrorHamiltonian) -> list[Term]:
    """Which terms are present, without their coefficients."""
    return [t for t, _ in h.terms()]


def _random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (a + a.conj().T) / 2
    return h / np.linalg.norm(h, 2)


def random_hamiltonian(
    graph: ConnectivityGraph,
    rng: np.random.Generator | int | None = None,
    single_axes: Sequence[str] = AXES,
    pair_axes: Iterable[tuple[str, str]] | None = None,
    bath_dim: int = 1,
    scale: float = 1.0,
    qubits: Iterable[int] | None = None,
) -> ErrorHamiltonian:
    """Coefficients uniform in ``[-scale, scale]``; unit-norm random bath operators when ``bath_dim > 1``.

    ``qubits`` restricts the single-qubit terms; every edge gets every pair in
    ``pair_axes`` (default: all nine).
    """
    rng = np.random.default_rng(rng)
    if pair_axes is None:
        pair_axes = [(a, b) for a in AXES for b in AXES]
    pair_axes = list(pair_axes)
    chosen = range(graph.vertex_count) if qubits is None else sorted(set(qubits))
    singles = {(v, a): scale * rng.uniform(-1, 1) for v in chosen for a in single_axes}
    pairs = {(u, v, a, b): scale * rng.uniform(-1, 1) for (u, v) in graph.sorted_edges for a, b in pair_axes}
    baths = {}
    if bath_dim > 1:
        for t in list(singles) + list(pairs):
            baths[t] = _random_hermitian(rng, bath_dim)
    return ErrorHamiltonian(graph, singles, pairs, bath_dim, baths)

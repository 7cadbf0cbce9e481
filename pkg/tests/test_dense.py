from __future__ import annotations

from functools import reduce

import numpy as np
import pytest
from scipy.linalg import expm

from chadd.errors import InputError, ResourceError
from chadd.graphcore import Coloring, ConnectivityGraph, complete_graph, path_graph
from chadd.hadamard import ColorRowMap
from chadd.hamsim.dense import (
    PAULI,
    Propagator,
    apply_pulse_error,
    average_hamiltonian,
    build_dense,
    evolve_schedule,
    phase_distance,
    pulse_matrix,
    residual_scaling,
    target_unitary,
)
from chadd.hamsim.hamiltonian import ErrorHamiltonian, random_hamiltonian
from chadd.synth import PulseSchedule, synth_achromatic, synth_multi_axis, synth_single_axis

TAUS = [1e-2, 10**-2.5, 1e-3]


def kron_term(n, ops, bath=None, bath_dim=1):
    mats = [PAULI[ops.get(v, "I")] for v in range(n)]
    mats.append(np.eye(bath_dim) if bath is None else bath)
    return reduce(np.kron, mats)


class TestBuildDense:
    def test_single_z(self):
        h = ErrorHamiltonian(ConnectivityGraph(1), {(0, "z"): 1.0})
        assert np.allclose(build_dense(h), np.diag([1, -1]))

    def test_zz(self):
        h = ErrorHamiltonian(path_graph(2), pairs={(0, 1, "z", "z"): 1.0})
        assert np.allclose(build_dense(h), np.diag([1, -1, -1, 1]))

    def test_qubit_order(self):
        h = ErrorHamiltonian(path_graph(2), {(0, "x"): 1.0})
        assert np.allclose(build_dense(h), np.kron(PAULI["X"], np.eye(2)))

    @pytest.mark.parametrize("bath_dim", [1, 2])
    def test_random_matches_kron_assembly(self, bath_dim):
        g = complete_graph(4) if bath_dim == 1 else path_graph(3)
        h = random_hamiltonian(g, 5, bath_dim=bath_dim)
        ref = sum(
            w * kron_term(g.vertex_count,
                          {t[0]: t[1].upper()} if len(t) == 2 else {t[0]: t[2].upper(), t[1]: t[3].upper()},
                          h.bath_op(t), bath_dim)
            for t, w in h.terms()
        )
        m = build_dense(h)
        assert np.allclose(m, ref)
        assert np.allclose(m, m.conj().T, atol=1e-12)
        assert abs(np.trace(m)) < 1e-9 or bath_dim > 1

    def test_resource_limit(self):
        h = ErrorHamiltonian(path_graph(15), {(0, "z"): 1.0})
        with pytest.raises(ResourceError):
            build_dense(h)

    def test_non_hermitian_bath_rejected(self):
        with pytest.raises(InputError):
            ErrorHamiltonian(ConnectivityGraph(1), {(0, "z"): 1.0}, bath_dim=2,
                             bath_ops={(0, "z"): np.array([[0, 1], [0, 0]])})

    def test_pair_off_graph_rejected(self):
        with pytest.raises(InputError):
            ErrorHamiltonian(path_graph(3), pairs={(0, 2, "z", "z"): 1.0})


class TestPulses:
    def test_ideal_pulse_is_minus_i_sigma(self):
        assert np.allclose(pulse_matrix("X"), -1j * PAULI["X"])
        assert np.allclose(pulse_matrix("Y-"), 1j * PAULI["Y"])

    def test_over_rotation(self):
        assert np.allclose(pulse_matrix("X", 0.1), expm(-0.5j * np.pi * 1.1 * PAULI["X"]))

    def test_zero_epsilon_identical(self):
        s = synth_achromatic("ur4", 2)
        for a, b in zip(apply_pulse_error(s, 0.0), apply_pulse_error(s, 0.0)):
            assert a.keys() == b.keys()
        h = random_hamiltonian(path_graph(2), 1)
        assert np.allclose(evolve_schedule(s, h, 0.1, epsilon=0.0), evolve_schedule(s, h, 0.1))

    def test_epsilon_bound(self):
        with pytest.raises(InputError):
            apply_pulse_error(synth_achromatic("xx", 1), 0.2)


class TestEvolution:
    def test_idle_schedule_is_free_evolution(self):
        g = path_graph(2)
        h = random_hamiltonian(g, 2)
        s = synth_achromatic("idle", 2, cycles=2)
        u = evolve_schedule(s, h, 0.05)
        assert np.allclose(u, expm(-1j * 8 * 0.05 * build_dense(h)))

    def test_diagonal_fast_path_matches_eigh(self):
        g = complete_graph(3)
        h = random_hamiltonian(g, 3, single_axes=("z",), pair_axes=[("z", "z")])
        s = synth_single_axis(g, Coloring([1, 2, 3]))
        fast = evolve_schedule(s, h, 0.2)
        h_eigh = ErrorHamiltonian(g, {**h.singles, (0, "x"): 0.0}, h.pairs)
        assert not h_eigh.is_diagonal
        assert np.allclose(fast, evolve_schedule(s, h_eigh, 0.2))

    def test_explicit_pulse_order(self):
        # one slot: free evolution first, then the pulse
        g = ConnectivityGraph(1)
        h = ErrorHamiltonian(g, {(0, "z"): 0.7})
        s = PulseSchedule("custom", [["X"]], terminal_frame=("I",))
        expected = pulse_matrix("X") @ expm(-1j * 0.3 * build_dense(h))
        assert np.allclose(evolve_schedule(s, h, 0.3), expected)

    def test_unitary(self):
        g = complete_graph(3)
        h = random_hamiltonian(g, 4, bath_dim=2)
        u = evolve_schedule(synth_multi_axis(g, Coloring([1, 2, 3])), h, 0.05)
        assert np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) < 1e-10

    def test_balanced_zz_converges_to_identity(self):
        g = path_graph(2)
        h = ErrorHamiltonian(g, pairs={(0, 1, "z", "z"): 1.0})
        s = synth_single_axis(g, Coloring([1, 2]), ColorRowMap({1: 2, 2: 3}, 2))
        res = [phase_distance(evolve_schedule(s, h, t), np.eye(4)) for t in (1e-2, 1e-3, 1e-4)]
        assert res[0] < 1e-10  # diagonal H commutes through: exact cancellation

    def test_single_axis_converges_to_pure_x(self):
        g = path_graph(2)
        h = ErrorHamiltonian(g, {(0, "x"): 0.8, (1, "z"): 0.5}, {(0, 1, "z", "x"): 0.3})
        s = synth_single_axis(g, Coloring([1, 2]))
        for t in (1e-2, 1e-3, 1e-4):
            target = expm(-1j * s.slots * t * 0.8 * np.kron(PAULI["X"], np.eye(2)))
            assert phase_distance(evolve_schedule(s, h, t), target) < 50 * t**2


class TestResidual:
    def test_average_hamiltonian_keeps_pure_terms(self):
        g = path_graph(2)
        h = ErrorHamiltonian(g, {(0, "x"): 0.8, (1, "z"): 0.5}, {(0, 1, "x", "x"): 0.3, (0, 1, "z", "z"): 1.0})
        avg = average_hamiltonian(synth_single_axis(g, Coloring([1, 2])), h)
        assert avg.singles == {(0, "x"): 0.8} and avg.pairs == {(0, 1, "x", "x"): 0.3}

    def test_target_identity_for_multi_axis(self):
        g = path_graph(2)
        h = random_hamiltonian(g, 0)
        s = synth_multi_axis(g, Coloring([1, 2]))
        assert np.allclose(target_unitary(s, h, 0.1), np.eye(4))

    @pytest.mark.parametrize("bath_dim", [1, 2])
    def test_slope_two(self, bath_dim):
        g = complete_graph(3)
        h = random_hamiltonian(g, 9, bath_dim=bath_dim)
        scan = residual_scaling(synth_single_axis(g, Coloring([1, 2, 3])), h, TAUS)
        assert 1.8 <= scan.slope <= 2.2

    def test_pure_x_underflows(self):
        g = path_graph(2)
        h = ErrorHamiltonian(g, {(0, "x"): 0.4, (1, "x"): -0.2}, {(0, 1, "x", "x"): 0.7})
        scan = residual_scaling(synth_single_axis(g, Coloring([1, 2])), h, TAUS)
        assert all(scan.underflow) and scan.slope is None

    def test_needs_geometric_taus(self):
        h = random_hamiltonian(path_graph(2), 0)
        s = synth_single_axis(path_graph(2), Coloring([1, 2]))
        with pytest.raises(InputError):
            residual_scaling(s, h, [0.1, 0.05])
        with pytest.raises(InputError):
            residual_scaling(s, h, [0.1, 0.05, 0.01])


class TestPropagator:
    def test_step_cached(self):
        h = random_hamiltonian(path_graph(2), 0)
        p = Propagator(h)
        assert p.step_operator(0.1) is p.step_operator(0.1)

"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the summary lines are
also printed at the end of any pytest session that includes this file), or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from chadd.graphcore import Coloring, color_greedy, complete_graph, embedded_ring, triangular_grid, with_leaves
from chadd.hadamard import ColorRowMap, depth_single_axis
from chadd.hamsim.dense import residual_scaling
from chadd.hamsim.experiment import fidelity_experiment
from chadd.hamsim.hamiltonian import ErrorHamiltonian, random_hamiltonian, term_string
from chadd.hamsim.oracle import first_order_average
from chadd.paulis import AXES
from chadd.schur import SchurPartition, depth_multi_axis, partition_even, partition_odd, verify_partition
from chadd.synth import (
    compute_metrics,
    depth_concatenated,
    synth_achromatic,
    synth_concatenated,
    synth_multi_axis,
    synth_robust,
    synth_single_axis,
    synthesize,
)
from helpers import random_coloring, random_connected_graph, random_row_map, random_triple_map

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    assert ok, detail


def full_shape(graph):
    singles = [(v, a) for v in range(graph.vertex_count) for a in AXES]
    pairs = [(u, v, a, b) for (u, v) in graph.sorted_edges for a in AXES for b in AXES]
    return singles + pairs


def test_criterion_1_depth_table():
    t0 = time.perf_counter()
    problems = []
    for chi in range(1, 101):
        n1 = depth_single_axis(chi)
        if n1 != 2 ** (math.floor(math.log2(chi)) + 1) or not chi <= n1 <= 2 * chi:
            problems.append(f"single chi={chi}")
        nm = depth_multi_axis(chi)
        closed = min(
            2 ** (2 * math.ceil(0.5 * math.log2(3 * chi + 1))),
            2 ** (2 * math.ceil(0.5 * (math.log2(3 * chi + 5) - 1)) + 1),
        )
        if nm != closed or not 3 * chi + 1 <= nm <= 2 * (3 * chi + 5):
            problems.append(f"multi chi={chi}")
        nc = depth_concatenated(chi)
        if nc != 4 ** (math.floor(math.log2(chi)) + 1) or nc > 4 * chi * chi:
            problems.append(f"concatenated chi={chi}")
    if any(depth_multi_axis(c) != 16 for c in range(2, 6)) or any(depth_multi_axis(c) != 32 for c in range(6, 10)):
        problems.append("N=16 for chi 2-5 or N=32 for chi 6-9")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 1.0
    record(1, ok, f"chi in [1,100] exact, {elapsed * 1e3:.1f} ms" + (f"; {problems[:3]}" if problems else ""))


def test_criterion_2_schur_counts():
    t0 = time.perf_counter()
    got = {}
    for nu in (2, 4, 6, 8):
        p = partition_even(nu)
        got[nu] = (len(p), len(p) == (2**nu - 1) // 3 and verify_partition(p))
    for nu in (3, 5, 7):
        p = partition_odd(nu)
        got[nu] = (len(p), len(p) == (2**nu - 5) // 3 and verify_partition(p))
    elapsed = time.perf_counter() - t0
    ok = all(v for _, v in got.values()) and elapsed < 60
    counts = ", ".join(f"nu={k}:{c}" for k, (c, _) in sorted(got.items()))
    record(2, ok, f"{counts}; {elapsed:.2f} s")


def test_criterion_3_exact_cancellation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240603)
    failures = []
    for trial in range(100):
        g = random_connected_graph(rng, 2, 10)
        c = random_coloring(g, rng)
        shape = full_shape(g)
        n = g.vertex_count
        rmap = random_row_map(c, rng, extra_nu=int(rng.integers(0, 2)))
        for variant, s in (("single", synth_single_axis(g, c, rmap)), ("robust", synth_robust(g, c, rmap))):
            poly = first_order_average(s, shape)
            for t in shape:
                pure = all(a == "x" for a in (t[1:] if len(t) == 2 else t[2:]))
                if poly[(term_string(t, n), t)] != (s.slots if pure else 0):
                    failures.append((trial, variant, t))
        schur, tmap = random_triple_map(c, rng)
        if len(first_order_average(synth_multi_axis(g, c, schur, tmap), shape)):
            failures.append((trial, "multi"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    record(3, ok, f"100 graphs, exact Fraction equality, {len(failures)} failures, {elapsed:.1f} s")


def test_criterion_4_residual_scaling():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    taus = [10**-2, 10**-2.5, 10**-3, 10**-3.5]
    slopes = []
    for i in range(10):
        g = random_connected_graph(rng, 2, 6)
        c = color_greedy(g)
        h = random_hamiltonian(g, rng, bath_dim=1 + i % 2)
        for name, s in (("single", synth_single_axis(g, c)), ("multi", synth_multi_axis(g, c)),
                        ("concatenated", synth_concatenated(g, c))):
            slopes.append((i, name, residual_scaling(s, h, taus).slope))
    elapsed = time.perf_counter() - t0
    bad = [x for x in slopes if x[2] is None or not 1.8 <= x[2] <= 2.2]
    vals = [x[2] for x in slopes if x[2] is not None]
    ok = not bad and elapsed < 300
    record(4, ok, f"30 slopes in [{min(vals):.3f}, {max(vals):.3f}], {len(bad)} outside [1.8, 2.2], {elapsed:.1f} s")


def test_criterion_5_prr_ratios():
    k3 = complete_graph(3)
    c = Coloring([1, 2, 3])
    identity = ColorRowMap({1: 1, 2: 2, 3: 3}, 2)
    rate = lambda s: compute_metrics(s).pulse_rate  # noqa: E731
    r_xx = rate(synth_single_axis(k3, c, identity)) / rate(synth_achromatic("xx", 3))
    r_ur4 = rate(synth_robust(k3, c, identity)) / rate(synth_achromatic("ur4", 3, cycles=2))
    # spread in which triple k holds row k, so triple g(c) carries color c's row g(c)
    spread = SchurPartition(4, [(1, 4, 5), (2, 8, 10), (3, 13, 14), (6, 9, 15), (7, 11, 12)])
    multi = synth_multi_axis(k3, c, spread, {1: 2, 2: 3, 3: 1})
    xy4 = synth_achromatic("xy4", 3, cycles=4)
    m = compute_metrics(multi)
    r_xy4 = Fraction(m.total_pulses, compute_metrics(xy4).total_pulses)
    per_qubit = Fraction(m.total_pulses, 3)
    default_count = compute_metrics(synth_multi_axis(k3, c, triple_map={1: 2, 2: 3, 3: 1})).total_pulses
    ok = r_xx == Fraction(2, 3) and r_ur4 == Fraction(2, 3) and r_xy4 == Fraction(38, 48) and m.slots == 16
    record(5, ok, f"CHaDD:XX={r_xx}, CHaDD-R:UR4={r_ur4}, multi:XY4={m.total_pulses}/48 "
                  f"({per_qubit} per qubit over {m.slots} slots; default GF(4) spread gives {default_count}/48)")


def _ordering_instance():
    base = triangular_grid(3, 3)
    graph = with_leaves(base, [0, 1, 2])
    coloring = Coloring([1 + (r + c) % 3 for r in range(3) for c in range(3)] + [4, 4, 4])
    # near-uniform ZZ crosstalk keeps the idle oscillation coherent; weak detuning on top
    rng = np.random.default_rng(7)
    pairs = {(u, v, "z", "z"): 0.3 * rng.uniform(0.8, 1.2) for u, v in graph.sorted_edges}
    singles = {(v, "z"): 0.3 * rng.uniform(-0.5, 0.5) for v in range(graph.n)}
    return graph, coloring, ErrorHamiltonian(graph, singles, pairs)


def test_criterion_6_simulated_ordering():
    t0 = time.perf_counter()
    graph, coloring, h = _ordering_instance()
    tau, gray = 0.02, [9, 10, 11]
    variants = ["chadd", "chadd-multi", "chadd-r", "xx", "xy4", "ur4"]
    scheds = {v: synthesize(v, graph, coloring, spectators={4}, tau=tau) for v in variants}
    scheds["idle"] = synth_achromatic("idle", graph.vertex_count, tau=tau)
    units = [2, 4, 8, 12]  # durations in 16-slot blocks
    reps = {k: [u * 16 // s.slots for u in units] for k, s in scheds.items()}
    recs = fidelity_experiment(scheds, h, reps, shots=2000, gray_qubits=gray, seed=6)
    fid = {k: [r.mean_fidelity for r in recs if r.schedule == k] for k in scheds}
    beats_xx = sum(a > b for a, b in zip(fid["chadd"], fid["xx"]))
    best = [max(fid[k][i] for k in scheds) for i in range(len(units))]
    near_top = sum(best[i] - fid["chadd-multi"][i] <= 0.02 for i in range(len(units)))

    fine = [4 * u for u in range(1, 25)]  # 16-slot steps for the idle trace
    idle = [r.mean_fidelity for r in fidelity_experiment({"idle": scheds["idle"]}, h, fine, shots=2000,
                                                          gray_qubits=gray, seed=7)]
    # revival: largest recovery above the running minimum; shot noise per point is ~0.003
    rise = max(idle[j] - min(idle[:j]) for j in range(1, len(idle)))
    elapsed = time.perf_counter() - t0
    ok = beats_xx >= 3 and near_top >= 3 and rise >= 0.05 and elapsed < 600
    summary = " ".join(f"{k}={['%.3f' % x for x in v]}" for k, v in fid.items() if k in ("chadd", "chadd-multi", "xx", "idle"))
    record(6, ok, f"CHaDD>XX at {beats_xx}/4, multi within 0.02 of best at {near_top}/4, "
                  f"idle revival {rise:.3f}; {summary}; {elapsed:.1f} s")


def test_criterion_7_spectators():
    g, c, gray = embedded_ring()
    n = g.vertex_count
    shape = full_shape(g)
    grays = set(c.classes[gray])
    issues = []
    single = synth_single_axis(g, c, ColorRowMap({1: 2, 2: 3, 3: 1}, 2, frozenset({gray})))
    multi = synth_multi_axis(g, c, spectators={gray})
    for label, s in (("single-axis", single), ("multi-axis", multi)):
        poly = first_order_average(s, shape)
        for t in shape:
            got = poly[(term_string(t, n), t)]
            if len(t) == 2 and t[0] in grays:
                if got != s.slots:
                    issues.append((label, t, got))
            elif len(t) == 4 and (t[0] in grays) != (t[1] in grays):
                system_axis = t[3] if t[0] in grays else t[2]
                coupled_x = label == "single-axis" and system_axis == "x"
                # a system x factor commutes with an x-type frame and is kept, as for any pure-x index
                if got != (s.slots if coupled_x else 0):
                    issues.append((label, t, got))
    n_cross = sum(1 for t in shape if len(t) == 4 and (t[0] in grays) != (t[1] in grays))
    ok = not issues
    record(7, ok, f"{n}-qubit ring, {len(grays)} gray on row 0, {n_cross} system-gray terms; "
                  f"gray singles = N, system-gray = 0 (multi) / 0 unless system factor is x (single); "
                  f"{len(issues)} mismatches")


def test_criterion_8_pulse_error_robustness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    wins = []
    for _ in range(5):
        g = random_connected_graph(rng, 4, 7)
        c = color_greedy(g)
        h = random_hamiltonian(g, rng, single_axes=("z",), pair_axes=[("z", "z")], scale=0.3)
        plain = synth_single_axis(g, c, tau=0.02)
        robust = synth_robust(g, c, tau=0.02)
        cycles = 12  # robust cycles; plain runs twice as many to match the duration
        recs = fidelity_experiment({"chadd": plain, "chadd-r": robust}, h,
                                   {"chadd": [2 * cycles], "chadd-r": [cycles]},
                                   shots=2000, epsilon=0.02, seed=int(rng.integers(1 << 30)))
        f = {r.schedule: r.mean_fidelity for r in recs}
        wins.append((f["chadd-r"], f["chadd"]))
    elapsed = time.perf_counter() - t0
    n_win = sum(a > b for a, b in wins)
    ok = n_win >= 3 and elapsed < 300
    record(8, ok, f"CHaDD-R > CHaDD on {n_win}/5 instances at eps=0.02 over {cycles} cycles: "
                  + ", ".join(f"{a:.3f}>{b:.3f}" for a, b in wins) + f"; {elapsed:.1f} s")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)

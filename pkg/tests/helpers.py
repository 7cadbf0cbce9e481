"""Random instance generators shared by the property and acceptance tests."""

from __future__ import annotations

import networkx as nx
import numpy as np
from hypothesis import strategies as st

from chadd.graphcore import Coloring, ConnectivityGraph
from chadd.hadamard import ColorRowMap, nu_single_axis
from chadd.schur import nu_multi_axis, partition


def random_connected_graph(rng: np.random.Generator, n_min: int = 2, n_max: int = 10) -> ConnectivityGraph:
    n = int(rng.integers(n_min, n_max + 1))
    # random spanning tree plus random extra edges keeps it connected
    edges = {(int(rng.integers(0, v)), v) for v in range(1, n)}
    p = rng.uniform(0, 0.6)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return ConnectivityGraph(n, edges)


def random_coloring(graph: ConnectivityGraph, rng: np.random.Generator) -> Coloring:
    """Greedy coloring along a random vertex order, colors relabeled at random."""
    order = rng.permutation(graph.vertex_count)
    color = {}
    for v in order:
        taken = {color[w] for w in graph.adjacency[v] if w in color}
        c = 1
        while c in taken:
            c += 1
        color[int(v)] = c
    k = max(color.values())
    relabel = {old: new + 1 for old, new in zip(range(1, k + 1), rng.permutation(k))}
    return Coloring([relabel[color[v]] for v in range(graph.vertex_count)])


def random_row_map(coloring: Coloring, rng: np.random.Generator, extra_nu: int = 0) -> ColorRowMap:
    nu = nu_single_axis(coloring.k) + extra_nu
    rows = rng.choice(np.arange(1, 1 << nu), size=coloring.k, replace=False)
    return ColorRowMap({c: int(r) for c, r in zip(coloring.color_set, rows)}, nu)


def random_triple_map(coloring: Coloring, rng: np.random.Generator):
    schur = partition(nu_multi_axis(coloring.k))
    picks = rng.choice(len(schur.triples), size=coloring.k, replace=False)
    return schur, {c: int(k) + 1 for c, k in zip(coloring.color_set, picks)}


@st.composite
def connected_graphs(draw, n_max: int = 10) -> ConnectivityGraph:
    seed = draw(st.integers(0, 2**32 - 1))
    return random_connected_graph(np.random.default_rng(seed), 2, n_max)


@st.composite
def graphs_with_colorings(draw, n_max: int = 10):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 2, n_max)
    return g, random_coloring(g, rng), rng


@st.composite
def any_graphs(draw, n_max: int = 64) -> ConnectivityGraph:
    n = draw(st.integers(1, n_max))
    p = draw(st.floats(0, 1))
    seed = draw(st.integers(0, 2**32 - 1))
    g = nx.gnp_random_graph(n, p, seed=seed)
    return ConnectivityGraph(n, g.edges())

"""Qubit connectivity graphs, proper colorings and chromatic-number bounds.

Graphs are small immutable value objects: vertices are ``0..n-1`` and edges are
stored canonically as ``(u, v)`` with ``u < v``.  Colors are the integers
``1..k``, matching the convention used by the scheduling modules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import InputError

__all__ = [
    "ConnectivityGraph",
    "Coloring",
    "color_greedy",
    "validate_coloring",
    "chromatic_bounds",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "square_grid",
    "triangular_grid",
    "heavy_hex",
    "embedded_ring",
    "with_leaves",
]


@dataclass(frozen=True)
class ConnectivityGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]] = ()):
        if not isinstance(vertex_count, int) or vertex_count < 0:
            raise InputError(f"vertex_count must be a non-negative integer, got {vertex_count!r}")
        canon = set()
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} does not have two endpoints")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InputError(f"self-loop on vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputError(f"edge {(u, v)} out of range for {vertex_count} vertices")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", frozenset(canon))

    @property
    def n(self) -> int:
        return self.vertex_count

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    def subgraph(self, vertices: Iterable[int]) -> tuple["ConnectivityGraph", list[int]]:
        """Induced subgraph, relabelled to ``0..m-1``; also returns the old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return ConnectivityGraph(len(keep), edges), keep

    def to_dict(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.sorted_edges]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ConnectivityGraph":
        try:
            n = data["n"]
            edges = data.get("edges", [])
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"graph object needs keys 'n' and 'edges': {exc}") from exc
        if not isinstance(n, int):
            raise InputError(f"'n' must be an integer, got {n!r}")
        return cls(n, edges)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ConnectivityGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed graph JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class Coloring:
    """A proper coloring ``f: V -> {1..k}``; ``colors[v]`` is the color of vertex v."""

    colors: tuple[int, ...]
    k: int

    def __init__(self, colors: Sequence[int], k: int | None = None):
        colors = tuple(int(c) for c in colors)
        used = set(colors)
        if k is None:
            k = max(used, default=0)
        if used and (min(used) < 1 or max(used) > k):
            raise InputError(f"colors must lie in 1..{k}")
        if used != set(range(1, k + 1)):
            missing = sorted(set(range(1, k + 1)) - used)
            raise InputError(f"every color in 1..{k} must be used; missing {missing}")
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "k", k)

    @property
    def color_set(self) -> tuple[int, ...]:
        return tuple(range(1, self.k + 1))

    @cached_property
    def classes(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {c: [] for c in self.color_set}
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return {c: tuple(vs) for c, vs in out.items()}

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def to_dict(self) -> dict:
        return {"k": self.k, "colors": list(self.colors)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Coloring":
        try:
            return cls(data["colors"], data.get("k"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"coloring object needs key 'colors': {exc}") from exc


def color_greedy(graph: ConnectivityGraph) -> Coloring:
    """DSATUR coloring.

    The next vertex is the uncolored one with the most distinct neighbor colors;
    ties go to the larger degree, then to the lowest vertex index.  Each vertex
    takes the smallest color absent from its neighborhood, so at most
    ``max_degree + 1`` colors are used.
    """
    n = graph.vertex_count
    if n == 0:
        return Coloring((), 0)
    adj = graph.adjacency
    color = [0] * n
    seen: list[set[int]] = [set() for _ in range(n)]
    for _ in range(n):
        best = max(
            (v for v in range(n) if not color[v]),
            key=lambda v: (len(seen[v]), len(adj[v]), -v),
        )
        c = 1
        while c in seen[best]:
            c += 1
        color[best] = c
        for w in adj[best]:
            seen[w].add(c)
    return Coloring(color)


def validate_coloring(graph: ConnectivityGraph, coloring: Coloring | Sequence[int]) -> bool:
    colors = coloring.colors if isinstance(coloring, Coloring) else tuple(coloring)
    if len(colors) != graph.vertex_count:
        raise InputError(
            f"coloring covers {len(colors)} vertices but the graph has {graph.vertex_count}"
        )
    return all(colors[u] != colors[v] for u, v in graph.edges)


def _component_bounds(g: nx.Graph) -> tuple[int, int]:
    m = g.number_of_nodes()
    delta = max((d for _, d in g.degree()), default=0)
    is_complete = g.number_of_edges() == m * (m - 1) // 2
    is_odd_cycle = m >= 3 and m % 2 == 1 and all(d == 2 for _, d in g.degree())
    upper = delta + 1 if (is_complete or is_odd_cycle) else delta
    # Largest clique inside any closed neighborhood, lifted to 3 by an odd cycle.
    lower = max((len(c) for c in nx.find_cliques(g)), default=1)
    if not nx.is_bipartite(g):
        lower = max(lower, 3)
    return lower, max(upper, lower)


def chromatic_bounds(graph: ConnectivityGraph) -> tuple[int, int]:
    """Lower and upper bounds on the chromatic number.

    Upper bound is Brooks' theorem per connected component.  The lower bound is
    the largest clique found in a closed vertex neighborhood, raised to 3 when
    the component contains an odd cycle.  Components combine by taking maxima.
    """
    if graph.vertex_count == 0:
        return (0, 0)
    g = graph.to_networkx()
    lo, hi = 0, 0
    for comp in nx.connected_components(g):
        clo, chi = _component_bounds(g.subgraph(comp))
        lo, hi = max(lo, clo), max(hi, chi)
    return lo, hi


# --- graph families used throughout tests and examples -----------------------------

def complete_graph(n: int) -> ConnectivityGraph:
    return ConnectivityGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> ConnectivityGraph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return ConnectivityGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> ConnectivityGraph:
    return ConnectivityGraph(n, [(i, i + 1) for i in range(n - 1)])


def square_grid(rows: int, cols: int) -> ConnectivityGraph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return ConnectivityGraph(rows * cols, edges)


def triangular_grid(rows: int, cols: int) -> ConnectivityGraph:
    """Square grid plus one diagonal per plaquette; 3-colorable via ``(r + c) mod 3``."""
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = list(square_grid(rows, cols).edges)
    for r in range(rows - 1):
        for c in range(cols - 1):
            edges.append((idx(r, c), idx(r + 1, c + 1)))
    return ConnectivityGraph(rows * cols, edges)


def heavy_hex(rows: int, cols: int) -> ConnectivityGraph:
    """Heavy-hex patch: a brick-wall hexagonal lattice with every edge subdivided.

    ``rows`` counts hexagon rows and ``cols`` the brick columns per vertex row;
    ``heavy_hex(1, 2)`` is a single 12-qubit heavy-hex cell.  Subdivision makes
    every heavy-hex patch bipartite.
    """
    vid = {}
    for r in range(rows + 1):
        for c in range(cols + 1):
            vid[(r, c)] = len(vid)
    lattice = []
    for r in range(rows + 1):
        for c in range(cols):
            lattice.append((vid[(r, c)], vid[(r, c + 1)]))
    for r in range(rows):
        for c in range(cols + 1):
            if (r + c) % 2 == 0:
                lattice.append((vid[(r, c)], vid[(r + 1, c)]))
    n = len(vid)
    edges = []
    for u, v in lattice:
        edges += [(u, n), (n, v)]
        n += 1
    # drop lattice vertices of degree <= 1 along the boundary (dangling bridges)
    g = ConnectivityGraph(n, edges)
    nxg = g.to_networkx()
    while True:
        leaves = [v for v in nxg.nodes if nxg.degree(v) <= 1]
        if not leaves:
            break
        nxg.remove_nodes_from(leaves)
    sub, _ = g.subgraph(nxg.nodes)
    return sub


def embedded_ring(cells: int = 6) -> tuple[ConnectivityGraph, Coloring, int]:
    """System/bath embedding on a heavy-hex ring of ``2 * cells`` qubits.

    Even positions are system qubits colored 1, 2, 3, 1, 2, 3, ... and coupled to
    their next-nearest system neighbors; odd positions are bath ("gray")
    qubits.  Returns the graph, its coloring, and the single gray color
    (``4``), which schedules should map to row 0.
    """
    if cells % 3 != 0 or cells < 3:
        raise InputError("cells must be a positive multiple of 3 for an RGB ring")
    n = 2 * cells
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(2 * i, (2 * i + 2) % n) for i in range(cells)]
    colors = [1 + (i // 2) % 3 if i % 2 == 0 else 4 for i in range(n)]
    return ConnectivityGraph(n, edges), Coloring(colors), 4


def with_leaves(graph: ConnectivityGraph, anchors: Sequence[int]) -> ConnectivityGraph:
    """Attach one new pendant vertex to each anchor vertex (new labels follow ``n``)."""
    n = graph.vertex_count
    edges = list(graph.edges) + [(a, n + i) for i, a in enumerate(anchors)]
    return ConnectivityGraph(n + len(anchors), edges)

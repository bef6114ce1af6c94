"""Undirected simple graphs: edge-list I/O, benchmark topology generators,
structural matrices (adjacency, degree, Laplacian, normalized Laplacian) and
summary metrics (degrees, density, diameter, bipartiteness).
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SYMMETRY_TOL = 1e-12


class EdgeListError(ValueError):
    """Malformed edge-list input (message carries the offending line number)."""


class DisconnectedGraphError(ValueError):
    """Raised by operations that require a connected graph."""


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 0..n-1.

    ``edges`` holds each edge once as a sorted pair (i, j) with i < j;
    ``neighbors`` is the per-vertex adjacency list in ascending order.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        normalized = set()
        for i, j in pairs:
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) outside vertex range [0, {n})")
            normalized.add((i, j) if i < j else (j, i))
        edges = tuple(sorted(normalized))
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in edges:
            adj[i].append(j)
            adj[j].append(i)
        neighbors = tuple(tuple(sorted(a)) for a in adj)
        return cls(n=n, edges=edges, neighbors=neighbors)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class TopologySummary:
    """Structural profile of a graph; ``diameter`` is None when disconnected."""

    regular: bool
    bipartite: bool
    connected: bool
    d_min: int
    d_max: int
    d_avg: float
    density: float
    diameter: int | None


class GraphOperators(NamedTuple):
    adjacency: np.ndarray
    degree: np.ndarray
    laplacian: np.ndarray
    normalized_laplacian: np.ndarray


# ---------------------------------------------------------------------------
# Edge-list file format
# ---------------------------------------------------------------------------

def from_edge_list(text: str) -> Graph:
    """Parse the plain-text edge-list format.

    One "i j" pair per line with 0-based vertex ids. Lines starting with '#'
    are comments. An optional header line "n <count>" fixes the vertex count;
    otherwise it is inferred as 1 + max id.
    """
    pairs: list[tuple[int, int]] = []
    declared_n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if declared_n is not None:
                raise EdgeListError(f"line {lineno}: duplicate 'n' header")
            if len(tokens) != 2:
                raise EdgeListError(f"line {lineno}: malformed 'n' header: {line!r}")
            try:
                declared_n = int(tokens[1])
            except ValueError:
                raise EdgeListError(
                    f"line {lineno}: malformed vertex count: {tokens[1]!r}"
                ) from None
            if declared_n < 1:
                raise EdgeListError(f"line {lineno}: vertex count must be positive")
            continue
        if len(tokens) != 2:
            raise EdgeListError(f"line {lineno}: expected two vertex ids, got {line!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: malformed token in {line!r}") from None
        if i < 0 or j < 0:
            raise EdgeListError(f"line {lineno}: negative vertex id in {line!r}")
        if i == j:
            raise EdgeListError(f"line {lineno}: self-loop on vertex {i}")
        pairs.append((i, j))
    if not pairs:
        raise EdgeListError("empty edge set")
    inferred_n = 1 + max(max(i, j) for i, j in pairs)
    n = inferred_n if declared_n is None else declared_n
    if declared_n is not None and inferred_n > declared_n:
        raise EdgeListError(
            f"edge endpoint {inferred_n - 1} exceeds declared vertex count {declared_n}"
        )
    return Graph.from_edges(n, pairs)


def to_edge_list(g: Graph) -> str:
    """Serialize a graph to the canonical edge-list text (round-trips exactly)."""
    lines = ["# generated by relstate", f"n {g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def graph_digest(g: Graph) -> str:
    """Hex digest of the canonical structure (header + sorted edges)."""
    body = f"n {g.n}\n" + "".join(f"{i} {j}\n" for i, j in g.edges)
    return hashlib.sha256(body.encode("ascii")).hexdigest()


# ---------------------------------------------------------------------------
# Topology generators
# ---------------------------------------------------------------------------

def gen_complete(n: int) -> Graph:
    """Complete graph: all n(n-1)/2 edges."""
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def gen_circulant(n: int, offsets: Sequence[int]) -> Graph:
    """Circulant graph: vertex i adjacent to (i +/- s) mod n for each offset s."""
    if n < 2:
        raise ValueError(f"circulant graph needs n >= 2, got {n}")
    if not offsets:
        raise ValueError("circulant graph needs at least one offset")
    if len(set(offsets)) != len(offsets):
        raise ValueError(f"offsets must be distinct, got {tuple(offsets)}")
    for s in offsets:
        if not (1 <= s < n / 2 + 1):
            raise ValueError(f"offset {s} outside valid range [1, {n / 2 + 1})")
    pairs = []
    for i in range(n):
        for s in offsets:
            pairs.append((i, (i + s) % n))
    return Graph.from_edges(n, pairs)


def gen_star(n: int) -> Graph:
    """Star: vertex 0 is the hub, adjacent to every other vertex."""
    if n < 2:
        raise ValueError(f"star graph needs n >= 2, got {n}")
    return Graph.from_edges(n, ((0, i) for i in range(1, n)))


def gen_small_world(n1: int, n2: int) -> Graph:
    """Two cliques of sizes n1 and n2 joined by the single bridge {n1-1, n1}."""
    if n1 < 2 or n2 < 2:
        raise ValueError(f"both clique sizes must be >= 2, got {n1}, {n2}")
    n = n1 + n2
    pairs = [(i, j) for i in range(n1) for j in range(i + 1, n1)]
    pairs += [(i, j) for i in range(n1, n) for j in range(i + 1, n)]
    pairs.append((n1 - 1, n1))
    return Graph.from_edges(n, pairs)


def gen_binary_tree_plus(n: int) -> Graph:
    """Level-order complete binary tree plus one shortcut edge closing an odd cycle.

    Node i has children 2i+1 and 2i+2 when those ids are < n. The shortcut
    joins the root to the left-most node (id 2^d - 1) of the deepest
    completely filled level of even depth d >= 2; the cycle it closes has
    odd length d + 1, so the graph is never bipartite. For n < 7 no such
    level exists and the shortcut degenerates to the edge {1, 2}, closing
    the triangle through the root directly.
    """
    if n < 3:
        raise ValueError(f"binary tree plus shortcut needs n >= 3, got {n}")
    pairs = [(i, 2 * i + c) for i in range(n) for c in (1, 2) if 2 * i + c < n]
    # level d is completely filled iff its last node 2^(d+1) - 2 is < n
    depth = 0
    while 2 ** (depth + 3) <= n + 1:
        depth += 2
    if depth >= 2:
        pairs.append((0, 2**depth - 1))
    else:
        pairs.append((1, 2))
    return Graph.from_edges(n, pairs)


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------

def _bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.neighbors[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    return all(d >= 0 for d in _bfs_distances(g, 0))


def is_bipartite(g: Graph) -> bool:
    """Two-colorability, checked per component by BFS."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors[v]:
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def diameter(g: Graph) -> int:
    """Longest shortest path (edge count), via one BFS per vertex."""
    best = 0
    for v in range(g.n):
        dist = _bfs_distances(g, v)
        far = max(dist)
        if min(dist) < 0:
            raise DisconnectedGraphError("diameter undefined on a disconnected graph")
        best = max(best, far)
    return best


def summarize(g: Graph) -> TopologySummary:
    degs = g.degrees
    connected = is_connected(g)
    return TopologySummary(
        regular=min(degs) == max(degs),
        bipartite=is_bipartite(g),
        connected=connected,
        d_min=min(degs),
        d_max=max(degs),
        d_avg=2 * g.edge_count / g.n,
        density=2 * g.edge_count / (g.n * (g.n - 1)),
        diameter=diameter(g) if connected else None,
    )


def operators(g: Graph) -> GraphOperators:
    """Dense adjacency, degree, Laplacian and normalized Laplacian matrices."""
    degs = g.degrees
    if min(degs) == 0:
        isolated = degs.index(0)
        raise ValueError(f"vertex {isolated} is isolated (degree 0)")
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    d = np.diag(np.asarray(degs, dtype=float))
    lap = d - a
    inv_sqrt = 1.0 / np.sqrt(np.asarray(degs, dtype=float))
    norm_lap = np.eye(g.n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]
    return GraphOperators(a, d, lap, norm_lap)

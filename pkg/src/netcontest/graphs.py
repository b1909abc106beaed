"""Undirected graphs, random-walk transition matrices, and value propagation.

The influence network is an undirected graph (self-loops allowed). Its
normalized transition matrix M has M[j, j'] = 1/deg(j) for each neighbor j'.
Propagating a per-node weight vector w through t steps of the walk yields the
network value of each node at horizon t: v[j'] = sum_j w[j] * M^t[j, j'].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse


@dataclass
class Graph:
    """Immutable undirected graph with per-node sorted neighbor lists.

    flat_neighbors/offsets are a CSR-style view of the adjacency, built once
    at construction and shared by the transition matrix and the simulator.
    """

    n: int
    adjacency: list  # one sorted int array per node
    degrees: np.ndarray
    flat_neighbors: np.ndarray
    offsets: np.ndarray

    def has_self_loop(self, node: int) -> bool:
        return node in self.adjacency[node]


def build_graph(n: int, edges, add_self_loops: bool = False) -> Graph:
    """Build a Graph from an unordered edge list.

    Each edge is an unordered pair {u, v}; u == v declares a self-loop, which
    counts once in the node's degree. If add_self_loops is set, every node
    lacking a self-loop gets one. Duplicate edges, out-of-range endpoints, and
    isolated nodes (when add_self_loops is off) are rejected.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    neighbor_sets = [set() for _ in range(n)]
    seen = set()
    for pos, (u, v) in enumerate(edges):
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge #{pos} ({u}, {v}) out of range for n={n}")
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise ValueError(f"duplicate edge #{pos}: ({u}, {v}) already present")
        seen.add(key)
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    if add_self_loops:
        for j in range(n):
            neighbor_sets[j].add(j)
    for j in range(n):
        if not neighbor_sets[j]:
            raise ValueError(
                f"node {j} is isolated; every node needs a neighbor "
                "(pass add_self_loops=True to pin isolated nodes to themselves)"
            )
    adjacency = [np.array(sorted(s), dtype=np.int64) for s in neighbor_sets]
    degrees = np.array([a.size for a in adjacency], dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=offsets[1:])
    flat = np.concatenate(adjacency) if n else np.array([], dtype=np.int64)
    return Graph(
        n=n,
        adjacency=adjacency,
        degrees=degrees,
        flat_neighbors=flat,
        offsets=offsets,
    )


def transition_matrix(graph: Graph) -> sparse.csr_array:
    """Row-stochastic walk matrix: row j holds 1/deg(j) at each neighbor."""
    inv_deg = 1.0 / graph.degrees.astype(float)
    data = np.repeat(inv_deg, graph.degrees)
    return sparse.csr_array(
        (data, graph.flat_neighbors, graph.offsets), shape=(graph.n, graph.n)
    )


@dataclass
class ValuationVector:
    """Per-customer values for one player: intrinsic weights or network values.

    horizon is None for intrinsic weights and the walk length t for a
    propagated network value.
    """

    values: np.ndarray
    player: str = "D"
    horizon: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError(f"values must be 1-D, got shape {self.values.shape}")
        if (self.values < 0).any():
            raise ValueError("valuations must be nonnegative")
        if self.player not in ("D", "A"):
            raise ValueError(f"player tag must be 'D' or 'A', got {self.player!r}")

    @property
    def total(self) -> float:
        return float(self.values.sum())


def _weights_array(weights) -> np.ndarray:
    arr = np.asarray(getattr(weights, "values", weights), dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"weights must be 1-D, got shape {arr.shape}")
    return arr


def walk_weight_propagation(matrix, weights, steps: int) -> np.ndarray:
    """Push weights through `steps` applications of the walk matrix.

    Returns v with v[j'] = sum_j w[j] * M^steps[j, j'], computed as repeated
    vector-matrix products; no dense matrix power is ever formed.
    """
    if steps < 0:
        raise ValueError(f"step count must be >= 0, got {steps}")
    w = _weights_array(weights)
    n = matrix.shape[0]
    if matrix.shape != (n, n) or w.size != n:
        raise ValueError(
            f"dimension mismatch: matrix {matrix.shape}, weights {w.size}"
        )
    out = w.copy()
    for _ in range(steps):
        out = out @ matrix
    return out


def network_values(graph: Graph, weights, steps: int) -> ValuationVector:
    """Network value of every customer at horizon `steps` for one player."""
    w = _weights_array(weights)
    if (w < 0).any():
        raise ValueError("weights must be nonnegative")
    player = getattr(weights, "player", "D")
    values = walk_weight_propagation(transition_matrix(graph), w, steps)
    return ValuationVector(values=values, player=player, horizon=int(steps))


# ---------------------------------------------------------------------------
# File formats: edge lists and valuation vectors
# ---------------------------------------------------------------------------


def read_edge_list(path) -> tuple[int, list]:
    """Parse an edge-list file: first line n, then one `u v` pair per line."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    n = None
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if n is None:
            if len(parts) != 1:
                raise ValueError(f"{path}:{lineno}: expected node count, got {raw!r}")
            try:
                n = int(parts[0])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad node count {parts[0]!r}") from None
            continue
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad edge {raw!r}") from None
    if n is None:
        raise ValueError(f"{path}: empty edge-list file")
    return n, edges


def load_graph(path, add_self_loops: bool = False) -> Graph:
    n, edges = read_edge_list(path)
    return build_graph(n, edges, add_self_loops=add_self_loops)


def read_valuations(path) -> np.ndarray:
    """Parse a valuation file: one decimal per line."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value {raw!r}") from None
    if not values:
        raise ValueError(f"{path}: empty valuation file")
    return np.array(values, dtype=float)


def write_valuations(path, values) -> None:
    """Write one decimal per line, 17 significant digits (round-trip exact)."""
    arr = _weights_array(values)
    with open(path, "w") as fh:
        for x in arr:
            fh.write(f"{x:.17g}\n")

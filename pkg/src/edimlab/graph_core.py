"""Simple undirected graphs, seeded G(n, p) sampling, BFS distances and edge-list I/O.

Vertices are the dense integers ``0..n-1``. Randomness comes from numpy's
PCG64 bit generator seeded through :class:`numpy.random.SeedSequence`:

* ``generate_er(n, p, seed)`` uses ``SeedSequence(seed)``;
* sub-streams (one per Monte Carlo trial, sweep cell, ...) use
  ``SeedSequence(seed, spawn_key=(index, ...))`` via :func:`substream`.

PCG64 output and ``Generator.random`` are stable across platforms, so a
``(n, p, seed)`` triple always yields the same graph.
"""

from __future__ import annotations

import io
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import EdgeListFormatError

UNREACHABLE = np.iinfo(np.int32).max
"""Distance marker for pairs in different components.

Chosen as the largest int32 so that ``min`` over endpoint distances and
equality comparisons behave naturally (UNREACHABLE == UNREACHABLE).
"""

MAX_SEED = 2**64 - 1

# matmul BFS levels to try before handing a long-diameter graph to csgraph
_DENSE_BFS_MAX_LEVELS = 8


def rng_from_seed(seed: int, *keys: int) -> np.random.Generator:
    _check_seed(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(keys))))


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``(seed, keys...)``; ``keys`` are e.g. trial indices."""
    if not keys:
        raise ValueError("substream needs at least one key")
    return rng_from_seed(seed, *keys)


def _check_seed(seed: int) -> None:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``edges`` is sorted lexicographically with ``u < v`` in every pair, so an
    edge's position in the tuple is its canonical index.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        if n < 0:
            raise ValueError("n must be non-negative")
        canon = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError(f"duplicate edge {key}")
            canon.add(key)
        ordered = tuple(sorted(canon))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return cls(n, ordered, tuple(tuple(sorted(a)) for a in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency_matrix[u, v])

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` int array of the canonical edge list."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            e = self.edge_array
            a[e[:, 0], e[:, 1]] = True
            a[e[:, 1], e[:, 0]] = True
        a.setflags(write=False)
        return a

    def degrees(self) -> np.ndarray:
        return self.adjacency_matrix.sum(axis=1)


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop distances; ``d[u, v] == UNREACHABLE`` across components."""

    n: int
    d: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        self.d.setflags(write=False)

    def __getitem__(self, uv):
        return self.d[uv]

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and self.n == other.n and np.array_equal(self.d, other.d)

    @property
    def connected(self) -> bool:
        return not bool((self.d == UNREACHABLE).any())

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges recovered as the ``d == 1`` pairs, in canonical order."""
        u, v = np.nonzero(np.triu(self.d == 1, 1))
        return np.stack([u, v], axis=1).astype(np.int64)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def _check_np(n: int, p: float) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")


def er_from_rng(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p) drawn from ``rng``: one uniform double per pair, lexicographic over (u, v), u < v.

    Pair (u, v) is an edge iff its draw is ``< p``. Rows are drawn one at a
    time; the stream consumed is identical to a single ``rng.random(C(n, 2))``.
    """
    _check_np(n, p)
    rows_u: list[np.ndarray] = []
    rows_v: list[np.ndarray] = []
    for u in range(n - 1):
        hit = np.flatnonzero(rng.random(n - 1 - u) < p)
        if hit.size:
            rows_u.append(np.full(hit.size, u, dtype=np.int64))
            rows_v.append(hit + (u + 1))
    if rows_u:
        eu = np.concatenate(rows_u)
        ev = np.concatenate(rows_v)
    else:
        eu = ev = np.zeros(0, dtype=np.int64)
    return _graph_from_sorted_arrays(n, eu, ev)


def _graph_from_sorted_arrays(n: int, eu: np.ndarray, ev: np.ndarray) -> Graph:
    # fast path for generator output: already canonical, skip re-validation
    edges = tuple(zip(eu.tolist(), ev.tolist()))
    a = np.zeros((n, n), dtype=bool)
    a[eu, ev] = True
    a[ev, eu] = True
    adjacency = tuple(tuple(np.flatnonzero(row).tolist()) for row in a)
    g = Graph(n, edges, adjacency)
    a.setflags(write=False)
    g.__dict__["adjacency_matrix"] = a
    g.__dict__["edge_array"] = np.stack([eu, ev], axis=1) if len(eu) else np.zeros((0, 2), dtype=np.int64)
    return g


def generate_er(n: int, p: float, seed: int) -> Graph:
    """Seeded Erdős–Rényi graph G(n, p); bit-identical for identical arguments."""
    _check_np(n, p)
    return er_from_rng(n, p, rng_from_seed(seed))


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Single-source BFS over adjacency lists (plain queue, no numpy tricks)."""
    dist = np.full(g.n, UNREACHABLE, dtype=np.int32)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.adjacency[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = du
                queue.append(w)
    return dist


def distances_from(g: Graph, sources: Sequence[int]) -> np.ndarray:
    """Hop distances from each of ``sources`` to every vertex, shape ``(len(sources), n)``.

    Level-synchronous BFS with the frontier expanded by a dense matrix
    product. Graphs whose BFS has not finished after a few levels are
    handed to scipy's csgraph instead.
    """
    src = np.asarray(sources, dtype=np.int64)
    k, n = src.size, g.n
    dist = np.full((k, n), UNREACHABLE, dtype=np.int32)
    if k == 0 or n == 0:
        return dist
    adj = g.adjacency_matrix.astype(np.float32)
    front = np.zeros((k, n), dtype=bool)
    front[np.arange(k), src] = True
    reached = front.copy()
    dist[front] = 0
    level = 0
    while front.any():
        if level >= _DENSE_BFS_MAX_LEVELS:
            return _csgraph_distances(g, src)
        level += 1
        nxt = (front.astype(np.float32) @ adj) > 0
        nxt &= ~reached
        dist[nxt] = level
        reached |= nxt
        front = nxt
    return dist


def _csgraph_distances(g: Graph, src: np.ndarray) -> np.ndarray:
    mat = csr_matrix(g.adjacency_matrix.astype(np.int8))
    raw = shortest_path(mat, method="D", directed=False, unweighted=True, indices=src)
    out = np.full(raw.shape, UNREACHABLE, dtype=np.int32)
    finite = np.isfinite(raw)
    out[finite] = raw[finite].astype(np.int32)
    return out


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    return DistanceMatrix(g.n, distances_from(g, range(g.n)))


def diameter(g: Graph | DistanceMatrix) -> int:
    """Largest finite distance, or ``UNREACHABLE`` if the graph is disconnected."""
    dm = g if isinstance(g, DistanceMatrix) else all_pairs_distances(g)
    if dm.n == 0:
        return 0
    return int(dm.d.max())


# --- edge-list files -------------------------------------------------------


def _parse_ints(line: str, lineno: int, want: int) -> list[int]:
    parts = line.split()
    if len(parts) != want:
        raise EdgeListFormatError(f"expected {want} integers, got {len(parts)}", lineno)
    if not all(x.isascii() and x.isdigit() for x in parts):
        raise EdgeListFormatError(f"tokens must be non-negative ASCII decimal: {line.strip()!r}", lineno)
    return [int(x) for x in parts]


def parse_edge_list(text: str) -> Graph:
    lines = text.splitlines()
    # tolerate trailing blank lines only
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EdgeListFormatError("missing header 'n m'", 1)
    n, m = _parse_ints(lines[0], 1, 2)
    if len(lines) - 1 != m:
        raise EdgeListFormatError(f"header declares {m} edges, found {len(lines) - 1} edge lines", 1)
    seen: set[tuple[int, int]] = set()
    edges = []
    for i, line in enumerate(lines[1:], start=2):
        u, v = _parse_ints(line, i, 2)
        if u == v:
            raise EdgeListFormatError(f"self-loop at vertex {u}", i)
        if u >= n or v >= n:
            raise EdgeListFormatError(f"vertex index >= n={n}", i)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListFormatError(f"duplicate edge {key}", i)
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    buf = io.StringIO()
    buf.write(f"{g.n} {g.m}\n")
    for u, v in g.edges:
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def read_edge_list(source: str | os.PathLike | TextIO) -> Graph:
    if hasattr(source, "read"):
        return parse_edge_list(source.read())
    with open(source, encoding="ascii") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, sink: str | os.PathLike | TextIO) -> None:
    text = format_edge_list(g)
    if hasattr(sink, "write"):
        sink.write(text)
        return
    with open(sink, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)

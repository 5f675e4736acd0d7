"""Distance signatures under a landmark set and the set-cover (hitting set) reduction.

For a landmark set ``R = (r_1, ..., r_k)`` every vertex ``x`` gets the
signature ``(d(x, r_1), ..., d(x, r_k))``; an edge ``xy`` gets
``min(d(x, r_i), d(y, r_i))`` coordinate-wise. ``R`` is (edge) generating
when the signatures of all vertices (edges) are pairwise distinct.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import EdimlabError
from .graph_core import UNREACHABLE, DistanceMatrix, Graph

Edge = tuple[int, int]


class Mode(str, enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"


class PairType(enum.Enum):
    TYPE1 = 1  # edges share exactly one endpoint
    TYPE2 = 2  # endpoint sets disjoint


def landmark_set(members: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Canonical landmark tuple: sorted, duplicate-free, all members ``< n``."""
    vals = [int(v) for v in members]
    out = tuple(sorted(set(vals)))
    if len(out) != len(vals):
        raise ValueError("landmark set contains duplicates")
    if out and (out[0] < 0 or (n is not None and out[-1] >= n)):
        raise ValueError(f"landmark out of range 0..{n}")
    return out


def edge_vertex_distance(dm: DistanceMatrix, e: Sequence[int], v: int) -> int:
    x, y = e
    return int(min(dm.d[x, v], dm.d[y, v]))


def vertex_signature(dm: DistanceMatrix, v: int, R: Iterable[int]) -> tuple[int, ...]:
    R = landmark_set(R, dm.n)
    return tuple(int(x) for x in dm.d[v, list(R)]) if R else ()


def edge_signature(dm: DistanceMatrix, e: Sequence[int], R: Iterable[int]) -> tuple[int, ...]:
    R = landmark_set(R, dm.n)
    if not R:
        return ()
    x, y = e
    cols = list(R)
    return tuple(int(a) for a in np.minimum(dm.d[x, cols], dm.d[y, cols]))


def rows_distinct(rows: np.ndarray) -> bool:
    # hash-based dedup: O(#objects * |R|)
    if rows.shape[0] <= 1:
        return True
    rows = np.ascontiguousarray(rows)
    seen = set()
    for r in rows:
        b = r.tobytes()
        if b in seen:
            return False
        seen.add(b)
    return True


def _edges_of(dm: DistanceMatrix, edges) -> np.ndarray:
    if edges is None:
        return dm.edge_array
    if isinstance(edges, Graph):
        return edges.edge_array
    arr = np.asarray(edges, dtype=np.int64)
    return arr.reshape(-1, 2)


def edge_distance_rows(dm: DistanceMatrix, edges: np.ndarray, cols) -> np.ndarray:
    """``(m, len(cols))`` table of ``d(e, c)`` for each edge ``e`` and column vertex ``c``."""
    cols = np.asarray(cols, dtype=np.int64)
    if edges.shape[0] == 0:
        return np.zeros((0, cols.size), dtype=np.int32)
    return np.minimum(dm.d[edges[:, 0]][:, cols], dm.d[edges[:, 1]][:, cols])


def is_generating_set(dm: DistanceMatrix, R: Iterable[int]) -> bool:
    R = landmark_set(R, dm.n)
    if dm.n <= 1:
        return True
    return rows_distinct(dm.d[:, list(R)] if R else np.zeros((dm.n, 0), dtype=np.int32))


def is_edge_generating_set(dm: DistanceMatrix, R: Iterable[int], edges=None) -> bool:
    """True iff all edge signatures under ``R`` are distinct.

    ``edges`` may be a :class:`Graph`, an ``(m, 2)`` array or ``None`` (edges
    are then read off the distance matrix as the distance-1 pairs).
    """
    R = landmark_set(R, dm.n)
    e = _edges_of(dm, edges)
    if e.shape[0] <= 1:
        return True
    return rows_distinct(edge_distance_rows(dm, e, list(R)))


def classify_pair(e1: Sequence[int], e2: Sequence[int]) -> PairType:
    a, b = set(e1), set(e2)
    if len(a) != 2 or len(b) != 2:
        raise ValueError("edges need two distinct endpoints")
    shared = len(a & b)
    if shared == 2:
        raise ValueError(f"identical edges {tuple(e1)} and {tuple(e2)}")
    return PairType.TYPE1 if shared == 1 else PairType.TYPE2


def _pack_bits(bools: np.ndarray) -> int:
    """Little-endian bitset of a 1-D boolean vector as a Python int."""
    if bools.size == 0:
        return 0
    return int.from_bytes(np.packbits(bools, bitorder="little").tobytes(), "little")


def _pack_rows(bools: np.ndarray) -> list[int]:
    if bools.shape[1] == 0:
        return [0] * bools.shape[0]
    packed = np.packbits(bools, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


@dataclass(frozen=True)
class CoverInstance:
    """Hitting-set view of (edge) metric dimension.

    ``table[i, v]`` is the distance from object ``i`` (vertex, or edge by
    canonical index) to candidate vertex ``v``. The universe is every
    unordered object pair ``(a, b)``, ``a < b``, in lexicographic order;
    candidate ``v`` distinguishes ``(a, b)`` iff ``table[a, v] != table[b, v]``.

    The explicit bitsets (``universe``, ``distinguishers``, ``pair_masks``)
    are built lazily since the universe is quadratic in the object count.
    """

    mode: Mode
    objects: tuple = field(repr=False)
    table: np.ndarray = field(repr=False, compare=False)
    disconnected: bool = False

    @property
    def n_objects(self) -> int:
        return self.table.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.table.shape[1]

    @property
    def universe_size(self) -> int:
        k = self.n_objects
        return k * (k - 1) // 2

    def _pair_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.universe_size > config.MAX_UNIVERSE_PAIRS:
            raise EdimlabError(
                f"universe of {self.universe_size} pairs exceeds MAX_UNIVERSE_PAIRS={config.MAX_UNIVERSE_PAIRS}"
            )
        return np.triu_indices(self.n_objects, 1)

    @cached_property
    def universe(self) -> list[tuple[int, int]]:
        a, b = self._pair_index_arrays()
        return list(zip(a.tolist(), b.tolist()))

    @cached_property
    def _neq(self) -> np.ndarray:
        a, b = self._pair_index_arrays()
        return self.table[a] != self.table[b]

    @cached_property
    def distinguishers(self) -> list[int]:
        """Per candidate vertex, bitset over universe indices of the pairs it distinguishes."""
        neq = self._neq
        return [_pack_bits(neq[:, v]) for v in range(self.n_candidates)]

    @cached_property
    def pair_masks(self) -> list[int]:
        """Per universe pair, bitset over candidate vertices that distinguish it."""
        return _pack_rows(self._neq)

    @cached_property
    def infeasible_pairs(self) -> list[tuple[int, int]]:
        """Object pairs with identical rows in the full table (no candidate separates them)."""
        groups: dict[bytes, list[int]] = {}
        tab = np.ascontiguousarray(self.table)
        for i in range(self.n_objects):
            groups.setdefault(tab[i].tobytes(), []).append(i)
        bad = []
        for members in groups.values():
            bad.extend(combinations(members, 2))
        return sorted(bad)

    @property
    def feasible(self) -> bool:
        return not self.infeasible_pairs

    def requirements(self) -> list[int]:
        """Inclusion-minimal distinct candidate masks (each must be hit by a cover).

        Hitting every returned mask is equivalent to covering the whole universe.
        """
        masks = sorted(set(self.pair_masks), key=lambda m: (m.bit_count(), m))
        kept: list[int] = []
        for m in masks:
            if not any(k & m == k for k in kept):
                kept.append(m)
        return kept

    def covers(self, R: Iterable[int]) -> bool:
        """Does ``R`` distinguish every universe pair? Checked by signature dedup."""
        cols = list(landmark_set(R, self.n_candidates))
        if self.n_objects <= 1:
            return True
        return rows_distinct(self.table[:, cols])


def object_table(dm: DistanceMatrix, g: Graph, mode: Mode | str) -> tuple[tuple, np.ndarray]:
    mode = Mode(mode)
    if mode is Mode.VERTEX:
        return tuple(range(dm.n)), np.asarray(dm.d)
    cols = np.arange(dm.n)
    return g.edges, edge_distance_rows(dm, g.edge_array, cols)


def build_cover_instance(dm: DistanceMatrix, g: Graph, mode: Mode | str) -> CoverInstance:
    if dm.n != g.n:
        raise ValueError("distance matrix and graph disagree on n")
    mode = Mode(mode)
    objects, table = object_table(dm, g, mode)
    table = np.ascontiguousarray(table, dtype=np.int32)
    table.setflags(write=False)
    return CoverInstance(mode, objects, table, disconnected=not dm.connected)


def is_resolving(dm: DistanceMatrix, g: Graph, R: Iterable[int], mode: Mode | str) -> bool:
    if Mode(mode) is Mode.VERTEX:
        return is_generating_set(dm, R)
    return is_edge_generating_set(dm, R, g)


__all__ = [
    "UNREACHABLE",
    "CoverInstance",
    "Mode",
    "PairType",
    "build_cover_instance",
    "classify_pair",
    "edge_distance_rows",
    "edge_signature",
    "edge_vertex_distance",
    "is_edge_generating_set",
    "is_generating_set",
    "is_resolving",
    "landmark_set",
    "object_table",
    "rows_distinct",
    "vertex_signature",
]

"""Minimum hitting-set solvers over :class:`CoverInstance`, and dim/edim wrappers.

All solvers break ties towards the lowest vertex id, so a given instance
always produces the same witness.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import config
from .errors import CapExceededError, EdimlabError, InfeasibleError, SearchTooLargeError
from .graph_core import Graph, all_pairs_distances
from .resolving import CoverInstance, Mode, build_cover_instance, is_edge_generating_set, is_generating_set


class Method(str, enum.Enum):
    BRUTE = "brute"
    BNB = "bnb"
    GREEDY = "greedy"


@dataclass(frozen=True)
class SolveResult:
    size: int
    witness: tuple[int, ...]
    optimal: bool
    nodes_explored: int
    wall_time: float
    warnings: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "witness": list(self.witness),
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "wall_time_ms": round(self.wall_time * 1000.0, 3),
        }


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _check_feasible(inst: CoverInstance) -> None:
    if inst.infeasible_pairs:
        raise InfeasibleError(inst.infeasible_pairs)


def _finish(inst: CoverInstance, witness, optimal: bool, nodes: int, t0: float) -> SolveResult:
    witness = tuple(sorted(int(v) for v in witness))
    if not inst.covers(witness):
        raise EdimlabError(f"internal error: witness {witness} does not cover the instance")
    warnings = ("DISCONNECTED",) if inst.disconnected else ()
    return SolveResult(len(witness), witness, optimal, nodes, time.perf_counter() - t0, warnings)


def brute_force_minimum(inst: CoverInstance, cap: int | None = None) -> SolveResult:
    """Exhaustive search by increasing size, lexicographic within a size.

    The first cover found is the lexicographically least minimum cover.
    """
    t0 = time.perf_counter()
    _check_feasible(inst)
    c = inst.n_candidates
    cap = c if cap is None else min(int(cap), c)
    if cap < 0:
        raise ValueError("cap must be non-negative")
    total = sum(math.comb(c, k) for k in range(cap + 1))
    if total > config.BRUTE_FORCE_MAX_SUBSETS:
        raise SearchTooLargeError(
            f"brute force would enumerate {total} subsets (> {config.BRUTE_FORCE_MAX_SUBSETS})"
        )
    reqs = inst.requirements()
    nodes = 0
    for k in range(cap + 1):
        for subset in combinations(range(c), k):
            nodes += 1
            mask = 0
            for v in subset:
                mask |= 1 << v
            if all(r & mask for r in reqs):
                return _finish(inst, subset, True, nodes, t0)
    raise CapExceededError(f"no cover of size <= {cap}")


def _dense_rank(col: np.ndarray) -> np.ndarray:
    return np.unique(col, return_inverse=True)[1].reshape(-1).astype(np.int64)


def _pairs_left(keys: np.ndarray) -> np.ndarray:
    """Per column of ``keys``: number of unordered row pairs sharing a key."""
    n = keys.shape[0]
    if n < 2:
        return np.zeros(keys.shape[1], dtype=np.int64)
    s = np.sort(keys, axis=0)
    idx = np.arange(n, dtype=np.int64)[:, None]
    new_run = np.ones_like(s, dtype=bool)
    new_run[1:] = s[1:] != s[:-1]
    run_start = np.maximum.accumulate(np.where(new_run, idx, 0), axis=0)
    # sum over rows of (position within run) == sum over runs of C(len, 2)
    return (idx - run_start).sum(axis=0)


def greedy_cover(inst: CoverInstance) -> SolveResult:
    """Classic greedy: take the vertex that distinguishes the most still-equal pairs.

    Works on the partition of objects into classes of equal signature
    rather than on explicit bitsets: the number of universe pairs a vertex
    newly covers equals the drop in within-class pairs when the partition is
    refined by that vertex's distance column. Never materializes the universe.
    """
    t0 = time.perf_counter()
    _check_feasible(inst)
    c = inst.n_candidates
    ranks = np.stack([_dense_rank(inst.table[:, v]) for v in range(c)], axis=1) if c else None
    labels = np.zeros(inst.n_objects, dtype=np.int64)
    alive = np.arange(inst.n_objects)
    chosen: list[int] = []
    nodes = 0
    remaining = inst.universe_size
    while remaining > 0:
        lab = labels[alive]
        keys = lab[:, None] * (inst.n_objects + 1) + ranks[alive]
        left = _pairs_left(keys)
        left[chosen] = remaining
        nodes += c - len(chosen)
        best = int(np.argmin(left))  # argmin returns the lowest index on ties
        if left[best] >= remaining:
            raise InfeasibleError(inst.infeasible_pairs)
        chosen.append(best)
        remaining = int(left[best])
        labels[alive] = _dense_rank(keys[:, best])
        # drop objects that are now alone in their class
        counts = np.bincount(labels[alive])
        alive = alive[counts[labels[alive]] > 1]
    return _finish(inst, chosen, False, nodes, t0)


def branch_and_bound(inst: CoverInstance) -> SolveResult:
    """Exact minimum hitting set by depth-first branch and bound.

    * requirements: inclusion-minimal distinct candidate masks of universe pairs;
    * branching: the unhit requirement with the fewest allowed candidates; its
      candidates are tried in decreasing coverage of unhit requirements, each
      branch excluding the candidates tried before it;
    * bound: number of chosen vertices plus a greedily built family of
      pairwise-disjoint unhit requirements;
    * incumbent: the greedy cover.
    """
    t0 = time.perf_counter()
    _check_feasible(inst)
    reqs = inst.requirements()
    if not reqs:
        return _finish(inst, (), True, 1, t0)

    incumbent = greedy_cover(inst)
    best_size = incumbent.size
    best_mask = sum(1 << v for v in incumbent.witness)
    nodes = 0

    def search(chosen: int, excluded: int, count: int) -> None:
        nonlocal best_size, best_mask, nodes
        nodes += 1
        unhit = [r & ~excluded for r in reqs if not r & chosen]
        if not unhit:
            if count < best_size:
                best_size, best_mask = count, chosen
            return
        if count + 1 >= best_size:
            return
        unhit.sort(key=lambda a: (a.bit_count(), a))
        if unhit[0] == 0:
            return
        used = 0
        family = 0
        for a in unhit:
            if not a & used:
                family += 1
                used |= a
        if count + family >= best_size:
            return
        cands = _bits(unhit[0])
        cands.sort(key=lambda v: (-sum((a >> v) & 1 for a in unhit), v))
        excl = excluded
        for v in cands:
            search(chosen | (1 << v), excl, count + 1)
            excl |= 1 << v

    search(0, 0, 0)
    return _finish(inst, _bits(best_mask), True, nodes, t0)


SOLVERS = {
    Method.BRUTE: brute_force_minimum,
    Method.BNB: branch_and_bound,
    Method.GREEDY: greedy_cover,
}


def solve(inst: CoverInstance, method: Method | str = Method.BNB, cap: int | None = None) -> SolveResult:
    method = Method(method)
    if method is Method.BRUTE:
        return brute_force_minimum(inst, cap)
    res = SOLVERS[method](inst)
    if cap is not None and res.size > cap:
        raise CapExceededError(f"minimum cover has size {res.size} > cap {cap}")
    return res


def _dimension(g: Graph, mode: Mode, method, cap) -> SolveResult:
    dm = all_pairs_distances(g)
    inst = build_cover_instance(dm, g, mode)
    res = solve(inst, method, cap)
    ok = is_generating_set(dm, res.witness) if mode is Mode.VERTEX else is_edge_generating_set(dm, res.witness, g)
    if not ok:
        raise EdimlabError(f"internal error: witness {res.witness} failed re-verification")
    return res


def metric_dimension(g: Graph, method: Method | str = Method.BNB, cap: int | None = None) -> SolveResult:
    return _dimension(g, Mode.VERTEX, method, cap)


def edge_metric_dimension(g: Graph, method: Method | str = Method.BNB, cap: int | None = None) -> SolveResult:
    return _dimension(g, Mode.EDGE, method, cap)

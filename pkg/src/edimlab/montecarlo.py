"""Seeded Monte Carlo estimators for the G(n, p) probabilities behind edim asymptotics.

Every trial ``i`` draws from its own stream ``substream(seed, i)``, so the
result is a pure function of ``(target, n, p, trials, seed)`` whatever the
worker count.

Two sampling protocols exist for the edge-pair estimators:

``"local"`` (default)
    Fix the named vertices (v, then the edge endpoints) as labels
    ``0..k-1`` (labels of G(n, p) are exchangeable), force the required
    edges present, and draw only the pairs touching a named vertex. That is
    enough to decide whether each distance from v is 1, 2 or larger; in the
    rare last case the rest of the graph is drawn and v's distances come
    from a full BFS. This is G(n, p) conditioned on the required edges.
``"full"``
    Draw the whole graph, rejection-sample the edge configuration from its
    edge list, pick v uniformly outside it and BFS. Slower by a factor of
    about n; used to cross-check ``"local"``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from itertools import product

import numpy as np

from . import config
from .errors import DegenerateSamplingError
from .graph_core import UNREACHABLE, Graph, _graph_from_sorted_arrays, diameter, distances_from, er_from_rng, substream
from .resolving import rows_distinct

PROTOCOLS = ("local", "full")
OTHER = 0  # profile bin for distances outside {1, 2}


@dataclass(frozen=True)
class McEstimate:
    target: str
    trials: int
    successes: int
    seed: int
    n: int
    p: float
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def p_hat(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    @property
    def stderr(self) -> float:
        if not self.trials:
            return float("nan")
        ph = self.p_hat
        return math.sqrt(ph * (1.0 - ph) / self.trials)

    def tolerance(self, slack: float, mult: float = config.MC_STDERR_MULT) -> float:
        return mult * self.stderr + slack

    def agrees_with(self, expected: float, slack: float, mult: float = config.MC_STDERR_MULT) -> bool:
        return abs(self.p_hat - expected) <= self.tolerance(slack, mult)

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "successes": self.successes,
            "p_hat": self.p_hat,
            "stderr": self.stderr,
            "seed": self.seed,
            "extra": self.extra,
        }


# --- trial execution ---------------------------------------------------------


def _chunk_rows(fn, seed: int, lo: int, hi: int) -> list:
    return [fn(substream(seed, i)) for i in range(lo, hi)]


def run_trials(fn, trials: int, seed: int, workers: int = 1) -> list:
    """``[fn(substream(seed, i)) for i in range(trials)]``, optionally across processes.

    ``fn`` must be picklable when ``workers > 1``. Output order is trial order.
    """
    if trials < 0:
        raise ValueError("trials must be non-negative")
    workers = max(1, int(workers))
    if workers == 1 or trials < 2 * workers:
        return _chunk_rows(fn, seed, 0, trials)
    bounds = np.linspace(0, trials, workers * 4 + 1).astype(int)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_chunk_rows, [fn] * len(spans), [seed] * len(spans), *zip(*spans))
        return [row for part in parts for row in part]


def default_workers() -> int:
    """Worker count from ``EDIMLAB_THREADS`` (0 or unset = all CPUs)."""
    raw = os.environ.get("EDIMLAB_THREADS", "0").strip() or "0"
    k = int(raw)
    return k if k > 0 else (os.cpu_count() or 1)


# --- samplers ----------------------------------------------------------------


def _local_distances(n: int, p: float, k: int, forced, rng: np.random.Generator) -> np.ndarray:
    """Distances from vertex 0 to named vertices ``1..k-1`` in G(n, p) with ``forced`` edges.

    Draw order: named pairs (lexicographic), then named x rest (row-major),
    then, only if some distance exceeds 2, the rest x rest pairs.
    """
    iu, ju = np.triu_indices(k, 1)
    named = np.zeros((k, k), dtype=bool)
    hit = rng.random(iu.size) < p
    named[iu[hit], ju[hit]] = True
    for a, b in forced:
        named[a, b] = True
    named |= named.T
    cross = rng.random((k, n - k)) < p

    out = np.full(k, 3, dtype=np.int64)
    via_named = named[0].astype(np.int64) @ named.astype(np.int64)
    via_rest = cross.astype(np.int64) @ cross[0].astype(np.int64)
    out[(via_named + via_rest) > 0] = 2
    out[named[0]] = 1
    out[0] = 0
    if (out[1:] <= 2).all():
        return out[1:]
    # some distance > 2: draw the remaining pairs and BFS for the exact value
    adj = np.zeros((n, n), dtype=bool)
    adj[:k, :k] = named
    adj[:k, k:] = cross
    adj[k:, :k] = cross.T
    ri, rj = np.triu_indices(n - k, 1)
    rest = rng.random(ri.size) < p
    adj[ri[rest] + k, rj[rest] + k] = True
    eu, ev = np.nonzero(np.triu(adj | adj.T, 1))
    g = _graph_from_sorted_arrays(n, eu.astype(np.int64), ev.astype(np.int64))
    return distances_from(g, [0])[0, 1:k].astype(np.int64)


def _type2_local(n: int, p: float, rng: np.random.Generator):
    # labels: v=0, x=1, y=2, z=3, t=4
    return _local_distances(n, p, 5, [(1, 2), (3, 4)], rng), 0


def _disjoint_pairs(g: Graph) -> int:
    deg = g.degrees().astype(np.int64)
    return g.m * (g.m - 1) // 2 - int((deg * (deg - 1) // 2).sum())


def _pick_outside(rng: np.random.Generator, n: int, named) -> int:
    while True:
        v = int(rng.integers(n))
        if v not in named:
            return v


def _type2_full(n: int, p: float, rng: np.random.Generator):
    """Returns (distances to x, y, z, t), failures) where failures counts rejection trouble."""
    failures = 0
    while True:
        g = er_from_rng(n, p, rng)
        if _disjoint_pairs(g) > 0:
            break
        failures += 1
    e = g.edge_array
    for _ in range(config.REJECTION_BUDGET):
        i, j = rng.integers(g.m, size=2)
        if i == j:
            continue
        x, y = e[i]
        z, t = e[j]
        if len({x, y, z, t}) == 4:
            break
    else:  # pragma: no cover - needs an adversarially sparse graph
        return None, failures + 1
    v = _pick_outside(rng, n, {x, y, z, t})
    d = distances_from(g, [v])[0]
    return np.array([d[x], d[y], d[z], d[t]], dtype=np.int64), failures


def _sp_local(n: int, p: float, rng: np.random.Generator):
    # labels: v=0, x1=1, y1=2, z1=3, t1=4, y2=5, z2=6, t2=7
    return _local_distances(n, p, 8, [(1, 2), (3, 4), (1, 5), (6, 7)], rng), 0


def _sp_full(n: int, p: float, rng: np.random.Generator):
    g = er_from_rng(n, p, rng)
    a = g.adjacency_matrix
    for _ in range(config.REJECTION_BUDGET):
        x1, y1, z1, t1, y2, z2, t2 = rng.choice(n, 7, replace=False)
        if a[x1, y1] and a[z1, t1] and a[x1, y2] and a[z2, t2]:
            break
    else:
        return None, 1
    named = (x1, y1, z1, t1, y2, z2, t2)
    v = _pick_outside(rng, n, set(int(u) for u in named))
    d = distances_from(g, [v])[0]
    return np.array([d[u] for u in named], dtype=np.int64), 0


_SAMPLERS = {
    ("type2", "local"): _type2_local,
    ("type2", "full"): _type2_full,
    ("sp", "local"): _sp_local,
    ("sp", "full"): _sp_full,
}


def _check_common(n: int, p: float, trials: int, min_n: int, protocol: str) -> None:
    if n < min_n:
        raise ValueError(f"n must be >= {min_n}, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if protocol not in PROTOCOLS:
        raise ValueError(f"protocol must be one of {PROTOCOLS}")


def _collect(kind: str, n: int, p: float, trials: int, seed: int, protocol: str, workers: int) -> np.ndarray:
    fn = partial(_SAMPLERS[kind, protocol], n, p)
    rows = run_trials(fn, trials, seed, workers)
    failed = sum(1 for _, f in rows if f)
    if failed > config.DEGENERATE_FRACTION * trials:
        raise DegenerateSamplingError(
            f"rejection sampling failed in {failed}/{trials} trials at n={n}, p={p}"
        )
    good = [d for d, _ in rows if d is not None]
    width = 4 if kind == "type2" else 7
    return np.array(good, dtype=np.int64).reshape(-1, width)


def _edge_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.minimum(a, b)


# --- q and the distance-profile table -----------------------------------------


def type2_profile_samples(
    n: int, p: float, trials: int, seed: int, protocol: str = "local", workers: int = 1
) -> np.ndarray:
    """``(trials, 4)`` distances from v to x, y, z, t for a random disjoint edge pair xy, zt."""
    _check_common(n, p, trials, 20, protocol)
    return _collect("type2", n, p, trials, seed, protocol, workers)


def _nondistinguish_from(d: np.ndarray, n, p, seed, protocol) -> McEstimate:
    same = _edge_dist(d[:, 0], d[:, 1]) == _edge_dist(d[:, 2], d[:, 3])
    return McEstimate("q", int(len(d)), int(same.sum()), seed, n, p, {"protocol": protocol})


def estimate_nondistinguish(
    n: int, p: float, trials: int, seed: int, protocol: str = "local", workers: int = 1
) -> McEstimate:
    """Estimate q: probability a vertex outside a random disjoint edge pair is equidistant to both."""
    d = type2_profile_samples(n, p, trials, seed, protocol, workers)
    return _nondistinguish_from(d, n, p, seed, protocol)


def distinguishing_profiles(p: float) -> dict[tuple[int, int, int, int], float]:
    """The six {1,2}^4 profiles of (d(v,x), d(v,y), d(v,z), d(v,t)) that separate xy from zt.

    Values are their probabilities when distances are 1 w.p. p and 2 otherwise.
    """
    a = p * p * (1 - p) ** 2
    b = p * (1 - p) ** 3
    return {
        (1, 1, 2, 2): a,
        (1, 2, 2, 2): b,
        (2, 1, 2, 2): b,
        (2, 2, 1, 1): a,
        (2, 2, 1, 2): b,
        (2, 2, 2, 1): b,
    }


@dataclass(frozen=True)
class ProfileTable:
    n: int
    p: float
    trials: int
    seed: int
    counts: dict  # {1,2}^4 profile -> count
    other: int  # trials with some distance outside {1, 2}
    q_successes: int  # trials where v is equidistant to both edges (any distances)

    def estimate(self, profile) -> McEstimate:
        return McEstimate(f"profile{tuple(profile)}", self.trials, self.counts[tuple(profile)], self.seed, self.n, self.p)

    @property
    def binned_fraction(self) -> float:
        return sum(self.counts.values()) / self.trials

    @property
    def other_fraction(self) -> float:
        return self.other / self.trials

    @property
    def other_flagged(self) -> bool:
        return self.other_fraction > config.OTHER_BIN_FLAG

    def distinguishing_aggregate(self) -> McEstimate:
        hits = sum(self.counts[k] for k in distinguishing_profiles(self.p))
        return McEstimate("distinguishing_aggregate", self.trials, hits, self.seed, self.n, self.p)

    def nondistinguish(self) -> McEstimate:
        return McEstimate("q", self.trials, self.q_successes, self.seed, self.n, self.p)

    def to_json_dict(self) -> dict:
        return {
            "target": "profile",
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "counts": {"".join(map(str, k)): v for k, v in sorted(self.counts.items())},
            "other": self.other,
            "other_flagged": self.other_flagged,
            "distinguishing_aggregate": self.distinguishing_aggregate().p_hat,
            "q_hat": self.nondistinguish().p_hat,
        }


def estimate_profile_table(
    n: int, p: float, trials: int, seed: int, protocol: str = "local", workers: int = 1
) -> ProfileTable:
    """Frequencies of every {1,2}^4 distance profile; distances >= 3 go to OTHER.

    Uses the same samples as :func:`estimate_nondistinguish` for equal arguments.
    """
    d = type2_profile_samples(n, p, trials, seed, protocol, workers)
    binned = np.where((d == 1) | (d == 2), d, OTHER)
    clean = (binned != OTHER).all(axis=1)
    counts = {prof: 0 for prof in product((1, 2), repeat=4)}
    keys, freq = np.unique(binned[clean], axis=0, return_counts=True)
    for k, c in zip(keys, freq):
        counts[tuple(int(x) for x in k)] = int(c)
    q_hat = _nondistinguish_from(d, n, p, seed, protocol)
    return ProfileTable(n, p, int(len(d)), seed, counts, int((~clean).sum()), q_hat.successes)


# --- s_p ----------------------------------------------------------------------


def estimate_joint_fail(
    n: int, p: float, trials: int, seed: int, protocol: str = "local", workers: int = 1
) -> McEstimate:
    """Estimate s_p: v fails on both (x1y1, z1t1) and (x1y2, z2t2), which share only x1.

    ``extra`` holds the conditional counts for d(v, x1) = 1 ("case1") and
    d(v, x1) = 2 ("case2").
    """
    _check_common(n, p, trials, 30, protocol)
    d = _collect("sp", n, p, trials, seed, protocol, workers)
    x1, y1, z1, t1, y2, z2, t2 = d.T
    first = _edge_dist(x1, y1) == _edge_dist(z1, t1)
    second = _edge_dist(x1, y2) == _edge_dist(z2, t2)
    ok = first & second
    extra = {"protocol": protocol}
    for name, mask in (("case1", x1 == 1), ("case2", x1 == 2)):
        extra[name] = {"trials": int(mask.sum()), "successes": int((ok & mask).sum())}
    return McEstimate("s_p", int(len(d)), int(ok.sum()), seed, n, p, extra)


def conditional(est: McEstimate, case: str) -> McEstimate:
    c = est.extra[case]
    return McEstimate(f"{est.target}|{case}", c["trials"], c["successes"], est.seed, est.n, est.p)


# --- whole-graph estimators -----------------------------------------------------


def _diameter_row(n: int, p: float, rng: np.random.Generator) -> int:
    return diameter(er_from_rng(n, p, rng))


def estimate_diameter2(n: int, p: float, graphs: int, seed: int, workers: int = 1) -> McEstimate:
    """Fraction of sampled G(n, p) with diameter exactly 2."""
    _check_common(n, p, graphs, 20, "local")
    diams = run_trials(partial(_diameter_row, n, p), graphs, seed, workers)
    hist: dict[str, int] = {}
    for dval in diams:
        key = "disconnected" if dval == UNREACHABLE else str(dval)
        hist[key] = hist.get(key, 0) + 1
    return McEstimate(
        "diameter2", graphs, sum(1 for x in diams if x == 2), seed, n, p, {"histogram": dict(sorted(hist.items()))}
    )


@dataclass(frozen=True)
class TypePairCounts:
    n: int
    p: float
    graphs: int
    seed: int
    mean_type1: float
    mean_type2: float
    se_type1: float
    se_type2: float

    @property
    def expected_type1(self) -> float:
        return self.n * math.comb(self.n - 1, 2) * self.p**2

    @property
    def expected_type2(self) -> float:
        return 3 * math.comb(self.n, 4) * self.p**2

    @property
    def ratio(self) -> float:
        return self.mean_type1 / self.mean_type2 if self.mean_type2 else float("inf")

    def to_json_dict(self) -> dict:
        return {
            "target": "type_pairs",
            "n": self.n,
            "p": self.p,
            "graphs": self.graphs,
            "seed": self.seed,
            "mean_type1": self.mean_type1,
            "mean_type2": self.mean_type2,
            "se_type1": self.se_type1,
            "se_type2": self.se_type2,
            "expected_type1": self.expected_type1,
            "expected_type2": self.expected_type2,
        }


def _type_counts_row(n: int, p: float, rng: np.random.Generator) -> tuple[int, int]:
    g = er_from_rng(n, p, rng)
    deg = g.degrees().astype(np.int64)
    t1 = int((deg * (deg - 1) // 2).sum())
    return t1, g.m * (g.m - 1) // 2 - t1


def estimate_type_pair_counts(n: int, p: float, graphs: int, seed: int, workers: int = 1) -> TypePairCounts:
    """Mean numbers of shared-endpoint (type 1) and disjoint (type 2) edge pairs."""
    _check_common(n, p, graphs, 10, "local")
    rows = np.array(run_trials(partial(_type_counts_row, n, p), graphs, seed, workers), dtype=np.float64)
    means = rows.mean(axis=0)
    ses = rows.std(axis=0, ddof=1) / math.sqrt(graphs) if graphs > 1 else np.full(2, float("nan"))
    return TypePairCounts(n, p, graphs, seed, float(means[0]), float(means[1]), float(ses[0]), float(ses[1]))


def _random_set_row(n: int, p: float, w: int, rng: np.random.Generator) -> bool:
    g = er_from_rng(n, p, rng)
    landmarks = np.sort(rng.choice(n, size=w, replace=False))
    e = g.edge_array
    if e.shape[0] <= 1:
        return True
    if w == 0:
        return False
    rows = distances_from(g, landmarks)
    table = np.minimum(rows[:, e[:, 0]], rows[:, e[:, 1]]).T
    return rows_distinct(table)


def random_set_trial(n: int, p: float, w: int, graphs: int, seed: int, workers: int = 1) -> McEstimate:
    """Fraction of sampled graphs where a fresh uniform w-subset is an edge generating set."""
    if not 0 <= w <= n:
        raise ValueError(f"w must lie in [0, n], got {w}")
    _check_common(n, p, graphs, 1, "local")
    rows = run_trials(partial(_random_set_row, n, p, w), graphs, seed, workers)
    return McEstimate("random_set", graphs, sum(rows), seed, n, p, {"w": w})

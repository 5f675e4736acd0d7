"""Independent reference implementations used only by the tests.

Nothing here imports edimlab's distance, signature or solver code: distances
come from Floyd-Warshall over plain lists and (edge) metric dimension from
exhaustive search with direct pairwise signature comparison.
"""

from itertools import combinations

INF = float("inf")


def floyd_warshall(n, edges):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in edges:
        d[u][v] = d[v][u] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def _vertex_sig(d, v, R):
    return tuple(d[v][r] for r in R)


def _edge_sig(d, e, R):
    x, y = e
    return tuple(min(d[x][r], d[y][r]) for r in R)


def pairwise_distinct(sigs):
    for i in range(len(sigs)):
        for j in range(i + 1, len(sigs)):
            if sigs[i] == sigs[j]:
                return False
    return True


def resolves(d, n, edges, R, mode):
    if mode == "vertex":
        return pairwise_distinct([_vertex_sig(d, v, R) for v in range(n)])
    return pairwise_distinct([_edge_sig(d, e, R) for e in edges])


def min_resolving_size(n, edges, mode):
    """Smallest |R| such that R resolves all vertices ("vertex") or edges ("edge")."""
    d = floyd_warshall(n, edges)
    for k in range(n + 1):
        for R in combinations(range(n), k):
            if resolves(d, n, edges, R, mode):
                return k
    return None


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def cycle_edges(n):
    return [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]


def complete_edges(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]

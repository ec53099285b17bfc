"""Brute-force reference implementations used only by the tests."""

from itertools import product

import numpy as np

from enginearch.subsystems import CODES


def all_simple_paths(adj, s, t):
    out = []

    def walk(v, path):
        if v == t:
            out.append(list(path))
            return
        for w in adj.get(v, ()):
            if w not in path:
                path.append(w)
                walk(w, path)
                path.pop()

    walk(s, [s])
    return out


def brute_betweenness(nodes, edges):
    """Sum over ordered pairs of the share of shortest paths through each node."""
    adj = {v: sorted({b for a, b in edges if a == v and b != v}) for v in nodes}
    bc = dict.fromkeys(nodes, 0.0)
    for s, t in product(nodes, nodes):
        if s == t:
            continue
        paths = all_simple_paths(adj, s, t)
        if not paths:
            continue
        shortest = min(len(p) for p in paths)
        best = [p for p in paths if len(p) == shortest]
        for v in nodes:
            if v in (s, t):
                continue
            bc[v] += sum(v in p for p in best) / len(best)
    return bc


def brute_in_degree(nodes, edges):
    return {v: len({a for a, b in edges if b == v and a != v}) for v in nodes}


def brute_heatmap(graphs):
    counts = np.zeros((len(CODES), len(CODES)), dtype=np.int64)
    for i, a in enumerate(CODES):
        for j, b in enumerate(CODES):
            counts[i, j] = sum(1 for g in graphs if (a, b) in g.edges)
    return counts


def brute_pairs(counts, threshold, centrality):
    rows = []
    for i, a in enumerate(CODES):
        for j, b in enumerate(CODES):
            if i != j and counts[i, j] >= threshold:
                rows.append((a, b, int(counts[i, j]), centrality.get(a, 0.0) + centrality.get(b, 0.0), i, j))
    # bubble sort keeps the comparison rule explicit
    def before(x, y):
        if x[2] != y[2]:
            return x[2] > y[2]
        if x[3] != y[3]:
            return x[3] > y[3]
        return (x[4], x[5]) < (y[4], y[5])

    for n in range(len(rows)):
        for k in range(len(rows) - 1 - n):
            if before(rows[k + 1], rows[k]):
                rows[k], rows[k + 1] = rows[k + 1], rows[k]
    return [(a, b, c, s) for a, b, c, s, _, _ in rows]

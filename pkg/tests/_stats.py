"""Shared statistical helpers for the test suite."""

from collections import Counter
from itertools import combinations, permutations

import numpy as np
from scipy.stats import chi2 as chi2_dist

import cascadescope as cs


def _connected(n, edges):
    adj = {i: [] for i in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == n


def connected_graph_classes(max_n=5):
    """All connected graphs on 2..max_n vertices, one per isomorphism class."""
    out = []
    seen_canon = set()
    for n in range(2, max_n + 1):
        pairs = list(combinations(range(n), 2))
        for mask in range(1, 1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            if not _connected(n, edges):
                continue
            canon = min(
                tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges))
                for p in permutations(range(n)))
            if (n, canon) in seen_canon:
                continue
            seen_canon.add((n, canon))
            out.append((n, edges))
    return out


def infection_order_counts(g, simulate, samples, seed_path):
    """Histogram of post-source infection orders over repeated cascades."""
    counts = Counter()
    for i in range(samples):
        trace = simulate(g, 0, 1.0, cs.child_seed(*seed_path, i))
        counts[tuple(trace.vertices[1:].tolist())] += 1
    return counts


def two_sample_chi2_pvalue(counts_a, counts_b):
    """Two-sample chi-square homogeneity test over categorical counts.

    Cells with pooled expectation below 5 are merged into one bucket.
    """
    keys = sorted(set(counts_a) | set(counts_b))
    a = np.array([counts_a.get(k, 0) for k in keys], dtype=float)
    b = np.array([counts_b.get(k, 0) for k in keys], dtype=float)
    na, nb = a.sum(), b.sum()
    pooled = a + b
    rare = pooled * min(na, nb) / (na + nb) < 5
    if rare.all():
        return 1.0
    if rare.any():
        a = np.append(a[~rare], a[rare].sum())
        b = np.append(b[~rare], b[rare].sum())
    pooled = a + b
    ea = pooled * na / (na + nb)
    eb = pooled * nb / (na + nb)
    stat = float(((a - ea) ** 2 / ea).sum() + ((b - eb) ** 2 / eb).sum())
    dof = len(a) - 1
    if dof <= 0:
        return 1.0
    return float(chi2_dist.sf(stat, dof))

"""Graph structure, degree-class validation, and deterministic generators.

Vertices are dense integers 0..n-1. Generators number vertices in BFS order
(root = 0) so every construction is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

# Guard against accidentally huge generator parameters.
MAX_VERTICES = 8_000_000


class Graph:
    """Immutable undirected simple graph in CSR form.

    ``indptr``/``indices`` hold sorted per-vertex neighbor lists.
    ``edge_u``/``edge_v`` list every undirected edge exactly once with
    edge_u[i] < edge_v[i], sorted lexicographically. ``slot_edge`` maps
    each CSR slot back to its undirected edge index, which lets callers
    attach one weight per edge and expand it to both directions.
    """

    __slots__ = ("n", "indptr", "indices", "edge_u", "edge_v", "slot_edge")

    def __init__(self, n, indptr, indices, edge_u, edge_v, slot_edge):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.edge_u = edge_u
        self.edge_v = edge_v
        self.slot_edge = slot_edge
        for arr in (indptr, indices, edge_u, edge_v, slot_edge):
            arr.flags.writeable = False

    @property
    def edge_count(self) -> int:
        return int(self.edge_u.shape[0])

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def adjacency_matrix(self, data: np.ndarray | None = None) -> csr_matrix:
        """CSR adjacency; ``data`` is per-undirected-edge, expanded to both slots."""
        if data is None:
            vals = np.ones(self.indices.shape[0], dtype=np.float64)
        else:
            vals = np.asarray(data, dtype=np.float64)[self.slot_edge]
        return csr_matrix((vals, self.indices, self.indptr), shape=(self.n, self.n))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def _from_canonical_edges(n: int, eu: np.ndarray, ev: np.ndarray) -> Graph:
    """Assemble CSR from deduplicated edges with eu < ev."""
    m = eu.shape[0]
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2) if m else np.empty(0, dtype=np.int64)
    order = np.lexsort((dst, src))
    indices = dst[order]
    slot_edge = eid[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return Graph(n, indptr, indices, eu, ev, slot_edge)


def build_graph(edge_list, n: int) -> Graph:
    """Build a canonical Graph from an iterable of (u, v) pairs.

    Duplicate edges (in either orientation) collapse to one. Self-loops and
    out-of-range ids are rejected.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    edges = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray) else edge_list,
                       dtype=np.int64)
    if edges.size == 0:
        edges = edges.reshape(0, 2)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise ValueError("edge list must be pairs of vertex ids")
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        bad = edges[(edges < 0).any(axis=1) | (edges >= n).any(axis=1)][0]
        raise ValueError(f"edge {tuple(bad)} out of range for n={n}")
    loops = edges[:, 0] == edges[:, 1]
    if loops.any():
        v = int(edges[loops][0, 0])
        raise ValueError(f"self-loop at vertex {v} not allowed")
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    if lo.size:
        canon = np.unique(np.stack([lo, hi], axis=1), axis=0)
        eu, ev = canon[:, 0].copy(), canon[:, 1].copy()
    else:
        eu = ev = np.empty(0, dtype=np.int64)
    return _from_canonical_edges(n, eu, ev)


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    if g.edge_count == 0:
        return False
    ncomp, _ = connected_components(g.adjacency_matrix(), directed=False)
    return int(ncomp) == 1


@dataclass(frozen=True)
class ClassReport:
    """Membership report for the degree class with parameters (m, d, D).

    A graph belongs to the class when it is connected, at most m vertices
    have degree >= D, and every other vertex has degree <= d.
    """

    is_member: bool
    highdeg_set: frozenset
    max_lowdeg: int
    violations: tuple


def validate_class(g: Graph, m: int, d: int, D: int) -> ClassReport:
    """Check membership in the class of graphs with <= m vertices of degree >= D
    and all remaining degrees <= d. Violations are reported, never raised."""
    if not d < D:
        raise ValueError(f"need d < D, got d={d}, D={D}")
    deg = g.degrees()
    high = deg >= D
    highdeg_set = frozenset(int(v) for v in np.flatnonzero(high))
    low_deg = deg[~high]
    max_lowdeg = int(low_deg.max()) if low_deg.size else 0
    bad = np.flatnonzero(~high & (deg > d))
    violations = tuple((int(v), int(deg[v])) for v in bad)
    member = is_connected(g) and len(highdeg_set) <= m and not violations
    return ClassReport(member, highdeg_set, max_lowdeg, violations)


def _complete_kary_edges(n: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    # Heap numbering: parent of vertex i is (i-1)//b, which is BFS order.
    child = np.arange(1, n, dtype=np.int64)
    return (child - 1) // b, child


def complete_kary_tree(n: int, branching: int) -> Graph:
    """Complete ``branching``-ary tree on exactly n vertices, BFS numbered."""
    if n < 1 or n > MAX_VERTICES:
        raise ValueError(f"vertex count {n} outside [1, {MAX_VERTICES}]")
    if branching < 2:
        raise ValueError("branching must be >= 2")
    eu, ev = _complete_kary_edges(n, branching)
    return _from_canonical_edges(n, eu, ev)


def tree_size(branching: int, height: int) -> int:
    return (branching ** (height + 1) - 1) // (branching - 1)


def gen_balanced_tree(branching: int, height: int) -> Graph:
    """Balanced tree: every internal vertex has ``branching`` children,
    all leaves at depth ``height``. n = (b^(h+1)-1)/(b-1)."""
    if branching < 2 or height < 1:
        raise ValueError("need branching >= 2 and height >= 1")
    n = tree_size(branching, height)
    if n > MAX_VERTICES:
        raise ValueError(f"tree would have {n} vertices, exceeding {MAX_VERTICES}")
    return complete_kary_tree(n, branching)


def layer_start(branching: int, layer: int) -> int:
    """Id of the first BFS vertex in the given layer (root = layer 0)."""
    return (branching**layer - 1) // (branching - 1)


def gen_planted_star_tree(branching: int, height: int, layer: int,
                          planted_degree: int) -> tuple[Graph, int]:
    """Balanced tree plus fresh leaves attached to the first vertex of
    ``layer`` so that its total degree is exactly ``planted_degree``.

    Returns (graph, planted vertex id).
    """
    if not 1 <= layer <= height:
        raise ValueError(f"layer must be in [1, {height}], got {layer}")
    if planted_degree <= branching + 1:
        raise ValueError("planted_degree must exceed branching + 1")
    n0 = tree_size(branching, height)
    planted = layer_start(branching, layer)
    base_deg = branching + 1 if layer < height else 1
    extra = planted_degree - base_deg
    n = n0 + extra
    if n > MAX_VERTICES:
        raise ValueError(f"graph would have {n} vertices, exceeding {MAX_VERTICES}")
    pu, pv = _complete_kary_edges(n0, branching)
    eu = np.concatenate([pu, np.full(extra, planted, dtype=np.int64)])
    ev = np.concatenate([pv, np.arange(n0, n, dtype=np.int64)])
    order = np.lexsort((ev, eu))
    return _from_canonical_edges(n, eu[order], ev[order]), int(planted)


class Scaffold(NamedTuple):
    """Binary core tree with one disjoint pendant path per core vertex.

    ``core`` are ids 0..N-1; ``leaves[i]`` is the far endpoint of the path
    attached to core vertex i, at distance ``path_len`` from it;
    ``anchors[i]`` is that core vertex (= i under the fixed numbering).
    """

    graph: Graph
    core: np.ndarray
    leaves: np.ndarray
    anchors: np.ndarray


def gen_scaffold(core_size: int, path_len: int) -> Scaffold:
    """Low-diameter binary tree on ``core_size`` vertices, with a fresh path
    of ``path_len`` vertices hung off every core vertex.

    Total vertices: core_size * (path_len + 1). Path vertices of core u are
    core_size + u*path_len .. core_size + (u+1)*path_len - 1, chained outward.
    """
    N, L = int(core_size), int(path_len)
    if N < 2 or L < 1:
        raise ValueError("need core_size >= 2 and path_len >= 1")
    n = N * (L + 1)
    if n > MAX_VERTICES:
        raise ValueError(f"scaffold would have {n} vertices, exceeding {MAX_VERTICES}")
    cu, cv = _complete_kary_edges(N, 2)
    u_ids = np.arange(N, dtype=np.int64)
    first = N + u_ids * L
    hook_u, hook_v = u_ids, first
    if L > 1:
        along = np.arange(L - 1, dtype=np.int64)
        chain_u = (first[:, None] + along[None, :]).ravel()
        chain_v = chain_u + 1
    else:
        chain_u = chain_v = np.empty(0, dtype=np.int64)
    eu = np.concatenate([cu, hook_u, chain_u])
    ev = np.concatenate([cv, hook_v, chain_v])
    order = np.lexsort((ev, eu))
    graph = _from_canonical_edges(n, eu[order], ev[order])
    leaves = first + (L - 1)
    return Scaffold(graph, u_ids, leaves, u_ids.copy())


def write_graph(g: Graph, path) -> None:
    """Plain-text format: first line "n m_edges", then one "u v" line per edge."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            fh.write(f"{u} {v}\n")


def read_graph(path) -> Graph:
    with open(path, "r") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: bad header, expected 'n m_edges'")
        n, m = int(header[0]), int(header[1])
        edges = np.loadtxt(fh, dtype=np.int64, ndmin=2) if m else np.empty((0, 2), np.int64)
    if edges.shape[0] != m:
        raise ValueError(f"{path}: header promises {m} edges, found {edges.shape[0]}")
    return build_graph(edges, n)


_GEN_PARAMS = {
    "balanced_tree": ({"branching", "height"}, set()),
    "planted_star_tree": ({"branching", "height", "layer", "planted_degree"}, set()),
    "h_scaffold": ({"core_size", "path_len"}, set()),
    "edge_list": ({"n", "edges"}, set()),
}


@dataclass
class GenSpec:
    """Declarative graph-generator request, as used in config files."""

    kind: str
    params: dict

    def __post_init__(self):
        if self.kind not in _GEN_PARAMS:
            raise ValueError(f"unknown generator kind {self.kind!r}; "
                             f"expected one of {sorted(_GEN_PARAMS)}")
        required, optional = _GEN_PARAMS[self.kind]
        keys = set(self.params)
        missing = required - keys
        unknown = keys - required - optional
        if missing:
            raise ValueError(f"{self.kind}: missing parameters {sorted(missing)}")
        if unknown:
            raise ValueError(f"{self.kind}: unknown parameters {sorted(unknown)}")
        for key in required - {"edges"}:
            val = self.params[key]
            if not isinstance(val, int) or isinstance(val, bool) or val <= 0:
                raise ValueError(f"{self.kind}: parameter {key} must be a positive integer")

    def build(self) -> tuple[Graph, dict]:
        """Materialize the graph; returns (graph, metadata dict)."""
        p = self.params
        if self.kind == "balanced_tree":
            g = gen_balanced_tree(p["branching"], p["height"])
            return g, {}
        if self.kind == "planted_star_tree":
            g, planted = gen_planted_star_tree(p["branching"], p["height"],
                                               p["layer"], p["planted_degree"])
            return g, {"planted_vertex": planted}
        if self.kind == "h_scaffold":
            sc = gen_scaffold(p["core_size"], p["path_len"])
            return sc.graph, {"core_size": p["core_size"], "path_len": p["path_len"]}
        g = build_graph(p["edges"], p["n"])
        return g, {}

"""Continuous-time SI cascade simulation and trace-level queries.

Two independent samplers of the same process:

* ``simulate_fpp``: the infection time of v equals the weighted shortest-path
  distance from the source when every edge carries an independent Exp(lambda)
  weight. One weight is drawn per undirected edge and Dijkstra does the rest.
* ``simulate_gillespie``: event-driven race over the current boundary edges.
  Each step draws the waiting time Exp(lambda * #boundary) and a uniform
  boundary edge; the infected set grows one vertex at a time.

Both return byte-identical traces when re-run with the same seed. They share
no sampling code, so agreement between them is a meaningful cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .graphs import Graph
from .rng import derive_rng, seed_record

# Smallest positive double; an exact 0.0 exponential draw would look like a
# missing entry to the sparse shortest-path routine.
_TINY = 5e-324


class CascadeTrace:
    """One full cascade: every vertex with its infection time.

    ``vertices``/``times`` are parallel arrays sorted by time ascending,
    starting with (source, 0.0). Exact float ties are ordered by vertex id.
    """

    __slots__ = ("source", "lam", "vertices", "times", "seed", "_time_of")

    def __init__(self, source, lam, vertices, times, seed=None):
        self.source = int(source)
        self.lam = float(lam)
        self.vertices = vertices
        self.times = times
        self.seed = seed
        vertices.flags.writeable = False
        times.flags.writeable = False
        self._time_of = None

    @property
    def n(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def events(self) -> list:
        return list(zip(self.vertices.tolist(), self.times.tolist()))

    @property
    def total_time(self) -> float:
        return float(self.times[-1])

    def time_of_all(self) -> np.ndarray:
        """times indexed by vertex id (cached)."""
        if self._time_of is None:
            out = np.empty(self.n, dtype=np.float64)
            out[self.vertices] = self.times
            out.flags.writeable = False
            self._time_of = out
        return self._time_of

    def time_of(self, v: int) -> float:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} not in trace over {self.n} vertices")
        return float(self.time_of_all()[v])

    def __repr__(self) -> str:
        return (f"CascadeTrace(source={self.source}, lam={self.lam}, "
                f"n={self.n}, total_time={self.total_time:.4g})")


@dataclass(frozen=True)
class IntervalCount:
    """Number of infections with a <= time <= b (closed on both ends)."""

    a: float
    b: float
    count: int


@dataclass(frozen=True)
class SimStats:
    """Trace summary around the exposure bound.

    ``exposure_ok`` says every vertex had at most 2*d*sqrt(n)*ln(n)^2 infected
    neighbors at the instant it became infected; ``max_front_degree`` is the
    largest such neighbor count seen.
    """

    total_time: float
    exposure_ok: bool
    max_front_degree: int


def _order_trace(dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(dist, kind="stable").astype(np.int64)
    return order, dist[order]


def simulate_fpp(g: Graph, source: int, lam: float, seed) -> CascadeTrace:
    """Sample a cascade through its shortest-path representation.

    Draws one Exp(lam) weight per undirected edge, then runs Dijkstra from
    the source; T(v) is the resulting distance.
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    rng = derive_rng(seed)
    if g.n == 1:
        return CascadeTrace(source, lam, np.zeros(1, np.int64), np.zeros(1),
                            seed_record(seed))
    weights = rng.exponential(1.0 / lam, size=g.edge_count)
    np.maximum(weights, _TINY, out=weights)
    dist = dijkstra(g.adjacency_matrix(weights), directed=True, indices=source)
    unreached = np.isinf(dist)
    if unreached.any():
        raise ValueError(f"{int(unreached.sum())} vertices unreachable from "
                         f"source {source}; cascade requires a connected graph")
    order, times = _order_trace(dist)
    return CascadeTrace(source, lam, order, times, seed_record(seed))


def simulate_gillespie(g: Graph, source: int, lam: float, seed) -> CascadeTrace:
    """Sample a cascade by the exponential race over boundary edges.

    Keeps the susceptible endpoints of infected-susceptible edges in a
    swap-remove list; each event advances the clock by Exp(lam * boundary
    size) and infects the susceptible end of a uniformly chosen edge.
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    rng = derive_rng(seed)
    n = g.n
    indptr = g.indptr
    indices = g.indices

    infected = np.zeros(n, dtype=bool)
    out_vertices = np.empty(n, dtype=np.int64)
    out_times = np.empty(n, dtype=np.float64)

    boundary: list[tuple[int, int]] = []   # (infected u, susceptible v)
    pos: dict[tuple[int, int], int] = {}

    def infect(v: int, t: float, step: int) -> None:
        infected[v] = True
        out_vertices[step] = v
        out_times[step] = t
        for u in indices[indptr[v]:indptr[v + 1]].tolist():
            if infected[u]:
                key = (u, v)
                if key in pos:
                    i = pos.pop(key)
                    last = boundary.pop()
                    if i < len(boundary):
                        boundary[i] = last
                        pos[last] = i
            else:
                pos[(v, u)] = len(boundary)
                boundary.append((v, u))

    infect(source, 0.0, 0)
    t = 0.0
    for step in range(1, n):
        b = len(boundary)
        if b == 0:
            raise ValueError(f"{n - step} vertices unreachable from source "
                             f"{source}; cascade requires a connected graph")
        t += rng.exponential(1.0 / (lam * b))
        _, v = boundary[int(rng.integers(b))]
        infect(v, t, step)

    order = np.lexsort((out_vertices, out_times))
    return CascadeTrace(source, lam, out_vertices[order], out_times[order],
                        seed_record(seed))


def _count_closed(times: np.ndarray, a, b):
    """Events with a <= t <= b, via binary search; a, b may be arrays."""
    return (np.searchsorted(times, b, side="right")
            - np.searchsorted(times, a, side="left"))


def infection_count(trace: CascadeTrace, a: float, b: float) -> IntervalCount:
    """Count infections in the closed interval [a, b]."""
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    return IntervalCount(float(a), float(b), int(_count_closed(trace.times, a, b)))


def cut_size(g: Graph, trace: CascadeTrace, t: float) -> int:
    """Number of edges from the infected set to the rest at time t."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    tt = trace.time_of_all()
    left = tt[g.edge_u] <= t
    right = tt[g.edge_v] <= t
    return int(np.count_nonzero(left ^ right))


def rate_jump_exact(g: Graph, trace: CascadeTrace, v: int) -> float:
    """Exact jump of the expected infection rate when v becomes infected:
    lam * (deg(v) - 2 * #neighbors already infected)."""
    tt = trace.time_of_all()
    nb = g.neighbors(v)
    before = int(np.count_nonzero(tt[nb] < tt[v]))
    return trace.lam * (g.degree(v) - 2 * before)


def exposure_threshold(n: int, d: int) -> float:
    return 2.0 * d * math.sqrt(n) * math.log(n) ** 2


def check_exposure(g: Graph, trace: CascadeTrace, d: int) -> SimStats:
    """Evaluate the exposure bound: did any vertex have more than
    2*d*sqrt(n)*ln(n)^2 infected neighbors at its own infection time?"""
    tt = trace.time_of_all()
    earlier = (tt[g.edge_u] < tt[g.edge_v])
    counts = np.zeros(g.n, dtype=np.int64)
    # For each edge, the later endpoint saw the earlier one infected.
    np.add.at(counts, g.edge_v[earlier], 1)
    np.add.at(counts, g.edge_u[~earlier], 1)
    worst = int(counts.max()) if g.n else 0
    ok = worst <= exposure_threshold(g.n, d)
    return SimStats(trace.total_time, bool(ok), worst)


def write_trace(trace: CascadeTrace, path) -> None:
    """CSV "vertex_id,time", rows sorted by time, 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write("vertex_id,time\n")
        for v, t in zip(trace.vertices.tolist(), trace.times.tolist()):
            fh.write(f"{v},{t:.17g}\n")


def read_trace(path) -> CascadeTrace:
    """Read a trace CSV back. The rate is not stored in the file, so the
    returned trace carries lam=nan; queries that need it must come from a
    simulated trace."""
    with open(path, "r") as fh:
        header = fh.readline().strip()
        if header != "vertex_id,time":
            raise ValueError(f"{path}: bad header {header!r}")
        vs, ts = [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                vtxt, ttxt = line.split(",")
                vs.append(int(vtxt))
                ts.append(float(ttxt))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed row {line!r}") from None
    vertices = np.asarray(vs, dtype=np.int64)
    times = np.asarray(ts, dtype=np.float64)
    if times.size == 0:
        raise ValueError(f"{path}: empty trace")
    if (np.diff(times) < 0).any():
        raise ValueError(f"{path}: rows not sorted by time")
    if times[0] != 0.0:
        raise ValueError(f"{path}: first event must be at time 0")
    seen = np.zeros(times.size, dtype=bool)
    if vertices.min() < 0 or vertices.max() >= times.size:
        raise ValueError(f"{path}: vertex ids must cover 0..{times.size - 1}")
    seen[vertices] = True
    if not seen.all():
        raise ValueError(f"{path}: some vertices missing from trace")
    return CascadeTrace(int(vertices[0]), float("nan"), vertices, times)

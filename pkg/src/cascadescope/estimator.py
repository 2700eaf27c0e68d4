"""High-degree vertex estimation from cascade traces.

The estimate for vertex v in one trace is the discrete second derivative of
the infection curve at its own infection time,

    deg_hat(v) = (I[T(v), T(v)+delta] - I[T(v)-delta, T(v)]) / delta,

which concentrates near lam * deg(v) when windows are short and the front is
thin. A vertex is reported as high degree when its estimate clears the
threshold tau in every one of the K traces. The procedure needs no knowledge
of lam or of how many high-degree vertices exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .simulate import CascadeTrace, _count_closed


@dataclass(frozen=True)
class EstimatorConfig:
    """Window width delta, threshold tau (rate units), trace count K."""

    delta: float
    tau: float
    num_traces: int

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.num_traces < 1:
            raise ValueError(f"need at least one trace, got {self.num_traces}")


@dataclass(frozen=True)
class DegreeEstimate:
    """Per-vertex view of the diagnostics table."""

    vertex: int
    per_trace: tuple
    passed_all: bool


class DegreeTable:
    """Dense (n x K) matrix of deg_hat values plus the threshold used."""

    __slots__ = ("values", "tau")

    def __init__(self, values: np.ndarray, tau: float):
        self.values = values
        self.tau = float(tau)
        values.flags.writeable = False

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def num_traces(self) -> int:
        return self.values.shape[1]

    def passed_all(self) -> np.ndarray:
        return (self.values >= self.tau).all(axis=1)

    def estimate(self, v: int) -> DegreeEstimate:
        row = self.values[v]
        return DegreeEstimate(int(v), tuple(float(x) for x in row),
                              bool((row >= self.tau).all()))


def deg_hat(trace: CascadeTrace, v: int, delta: float) -> float:
    """Second-derivative degree estimate for one vertex in one trace."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    t = trace.time_of(v)
    after = _count_closed(trace.times, t, t + delta)
    before = _count_closed(trace.times, t - delta, t)
    return float(after - before) / delta


def deg_hat_all(trace: CascadeTrace, delta: float) -> np.ndarray:
    """deg_hat for every vertex of one trace, vectorized."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    t = trace.time_of_all()
    after = _count_closed(trace.times, t, t + delta)
    before = _count_closed(trace.times, t - delta, t)
    return (after - before).astype(np.float64) / delta


def default_config(n: int, alpha: float, natural_log: bool = True) -> EstimatorConfig:
    """Parameters for target degree n^alpha:
    delta = n^-(alpha - 1/4), tau = n^alpha / log n, and the smallest trace
    count strictly greater than 1/(alpha - 3/4).

    alpha is read as the decimal literally written (0.76 means 76/100), so the
    strict inequality in the trace count is honored at the values users type.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 0.75 < alpha < 1.0:
        raise ValueError(
            f"alpha={alpha} outside (3/4, 1): the threshold separates high "
            "degrees from window noise only in that range")
    delta = float(n) ** -(alpha - 0.25)
    log_n = math.log(n) if natural_log else math.log10(n)
    tau = float(n) ** alpha / log_n
    exact = Fraction(str(alpha)) - Fraction(3, 4)
    num_traces = math.floor(1 / exact) + 1
    return EstimatorConfig(delta=delta, tau=tau, num_traces=num_traces)


def estimate_high_degree(traces, config: EstimatorConfig):
    """Vertices whose deg_hat clears tau in every trace.

    Returns (frozenset of vertex ids, DegreeTable). All traces must cover the
    same vertex set and their count must equal config.num_traces.
    """
    traces = list(traces)
    if len(traces) != config.num_traces:
        raise ValueError(f"got {len(traces)} traces for num_traces="
                         f"{config.num_traces}")
    sizes = {tr.n for tr in traces}
    if len(sizes) != 1:
        raise ValueError(f"traces disagree on vertex count: {sorted(sizes)}")
    n = sizes.pop()
    values = np.empty((n, len(traces)), dtype=np.float64)
    for k, tr in enumerate(traces):
        values[:, k] = deg_hat_all(tr, config.delta)
    table = DegreeTable(values, config.tau)
    found = frozenset(int(v) for v in np.flatnonzero(table.passed_all()))
    return found, table


def derivative_series(trace: CascadeTrace, delta: float, grid_step: float,
                      t_max: float | None = None):
    """Infection-curve derivatives on a uniform grid.

    first(t) = I[t, t+delta] / delta;
    second(t) = (I[t, t+delta] - I[t-delta, t]) / delta.
    Returns (grid, first, second) arrays; grid covers [0, t_max].
    """
    if not grid_step > 0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    if t_max is None:
        t_max = trace.total_time
    steps = int(math.floor(t_max / grid_step + 1e-9))
    grid = np.arange(steps + 1, dtype=np.float64) * grid_step
    after = _count_closed(trace.times, grid, grid + delta)
    before = _count_closed(trace.times, grid - delta, grid)
    first = after.astype(np.float64) / delta
    second = (after - before).astype(np.float64) / delta
    return grid, first, second


def write_derivative_series(path, grid, first, second) -> None:
    """CSV "time,first_derivative,second_derivative" with exact floats."""
    with open(path, "w", newline="\n") as fh:
        fh.write("time,first_derivative,second_derivative\n")
        for t, f1, f2 in zip(grid.tolist(), first.tolist(), second.tolist()):
            fh.write(f"{t:.17g},{f1:.17g},{f2:.17g}\n")

"""Indistinguishable attachment ensembles on a scaffold graph.

Setting: a scaffold from ``gen_scaffold`` (binary core, one pendant path per
core vertex, the far path endpoints form the leaf set) plus one attachment
vertex per leaf slot. Under the null model each attachment wires to a uniform
random leaf; under the planted model it wires to a designated leaf v with
probability D/N instead. Because attachments are degree-1 pendants, their
infection times given the leaf times are i.i.d. draws from closed-form
densities, which makes likelihood ratios, chi-square divergence, and total
variation directly computable. Time is measured in units of 1/lambda, so the
rate is fixed to 1 throughout this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .graphs import Graph, Scaffold, build_graph, gen_scaffold
from .rng import child_seed, derive_rng
from .simulate import simulate_fpp

_CHUNK_FLOATS = 4_000_000


@dataclass(frozen=True)
class HardEnsembleSpec:
    """Parameters of the attachment ensemble.

    core_size N, path_len L, planted degree target D (the planted leaf must
    reach degree >= D/2), and a cap on every leaf's degree. The default cap is
    ceil(ln^2 of the total vertex count), loose enough that rejection is rare.
    """

    core_size: int
    path_len: int
    planted_degree: float
    lam: float = 1.0
    deg_cap: int | None = None

    def __post_init__(self):
        if self.core_size < 2:
            raise ValueError("core_size must be >= 2")
        if self.path_len < 1:
            raise ValueError("path_len must be >= 1")
        if not 2 <= self.planted_degree <= self.core_size:
            raise ValueError(
                f"planted_degree must lie in [2, core_size], got {self.planted_degree}")
        if self.lam != 1.0:
            raise ValueError("rate is fixed to 1 here; rescale time units instead")
        if self.deg_cap is None:
            cap = math.ceil(math.log(self.total_vertices) ** 2)
            object.__setattr__(self, "deg_cap", cap)
        elif self.deg_cap < 1:
            raise ValueError("deg_cap must be >= 1")

    @property
    def total_vertices(self) -> int:
        # scaffold plus one attachment per leaf slot
        return self.core_size * (self.path_len + 2)

    @property
    def mixture_weight(self) -> float:
        return self.planted_degree / self.core_size


@dataclass(frozen=True)
class LeafTraceMatrix:
    """Leaf and core infection times across traces.

    ``leaf_times`` is (N x K): row i holds the times of the leaf anchored at
    core vertex i. ``core_times`` is (N x K) for the core vertices themselves.
    """

    leaf_times: np.ndarray
    core_times: np.ndarray

    @property
    def num_leaves(self) -> int:
        return self.leaf_times.shape[0]

    @property
    def num_traces(self) -> int:
        return self.leaf_times.shape[1]


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int


@dataclass(frozen=True)
class DetectionReport:
    """Detection statistics for one ensemble configuration.

    ``lr_sup`` is the largest pointwise likelihood-ratio bound over leaves;
    ``event_E_freq`` is the fraction of leaves satisfying the timing event E
    (see check_event_E).
    """

    chi2_single: float
    tv_bound: float
    tv_mc: float
    lr_sup: float
    event_E_freq: float

    def to_dict(self) -> dict:
        return {"chi2_single": self.chi2_single, "tv_bound": self.tv_bound,
                "tv_mc": self.tv_mc, "lr_sup": self.lr_sup,
                "event_E_freq": self.event_E_freq}


def _attachment_targets(spec: HardEnsembleSpec, planted_idx, rng) -> np.ndarray:
    """Leaf index each attachment wires to, before any conditioning."""
    N = spec.core_size
    targets = rng.integers(0, N, size=N)
    if planted_idx is not None:
        coins = rng.random(N)
        targets[coins < spec.mixture_weight] = planted_idx
    return targets


def sample_attachment_graph(spec: HardEnsembleSpec, planted_idx, seed,
                            scaffold: Scaffold | None = None,
                            max_attempts: int = 1000):
    """Draw a scaffold-plus-attachments graph from the (conditioned) ensemble.

    ``planted_idx`` is a leaf index (row of the scaffold's leaf array) or None
    for the null model. Resamples until every leaf degree is within the cap
    and, in the planted case, the planted leaf reaches degree >= D/2.

    Returns (graph, attempts). Attachment vertex j has id n_scaffold + j.
    """
    if scaffold is None:
        scaffold = gen_scaffold(spec.core_size, spec.path_len)
    N = spec.core_size
    if planted_idx is not None and not 0 <= planted_idx < N:
        raise ValueError(f"planted leaf index {planted_idx} out of range")
    rng = derive_rng(seed)
    n_sc = scaffold.graph.n
    base_u = scaffold.graph.edge_u
    base_v = scaffold.graph.edge_v
    for attempt in range(1, max_attempts + 1):
        targets = _attachment_targets(spec, planted_idx, rng)
        attach_counts = np.bincount(targets, minlength=N)
        # every leaf already has one path edge
        if (attach_counts + 1 > spec.deg_cap).any():
            continue
        if planted_idx is not None and attach_counts[planted_idx] + 1 < spec.planted_degree / 2:
            continue
        eu = np.concatenate([base_u, scaffold.leaves[targets]])
        ev = np.concatenate([base_v, np.arange(n_sc, n_sc + N, dtype=np.int64)])
        return build_graph(np.stack([eu, ev], axis=1), n_sc + N), attempt
    raise RuntimeError(
        f"no admissible sample in {max_attempts} attempts "
        f"(acceptance rate < {1.0 / max_attempts:.2e}); the degree cap "
        f"{spec.deg_cap} or planted floor {spec.planted_degree / 2} is too tight")


def sample_leaf_times(scaffold: Scaffold, num_traces: int, seed,
                      source: int = 0) -> LeafTraceMatrix:
    """Run ``num_traces`` cascades on the scaffold (rate 1) and collect the
    leaf and core infection times."""
    N = scaffold.core.shape[0]
    T_leaf = np.empty((N, num_traces), dtype=np.float64)
    T_core = np.empty((N, num_traces), dtype=np.float64)
    for i in range(num_traces):
        trace = simulate_fpp(scaffold.graph, source, 1.0, child_seed(seed, i))
        tt = trace.time_of_all()
        T_leaf[:, i] = tt[scaffold.leaves]
        T_core[:, i] = tt[scaffold.core]
    return LeafTraceMatrix(T_leaf, T_core)


def leaf_logpdf(leaf_times, t) -> float:
    """Log density of one attachment's time vector given it wired to a leaf
    with times ``leaf_times``: each coordinate is leaf time plus Exp(1)."""
    leaf_times = np.asarray(leaf_times, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if (t < leaf_times).any():
        return -math.inf
    return float(-(t - leaf_times).sum())


def _leaf_logpdf_many(leaf_times: np.ndarray, ts: np.ndarray) -> np.ndarray:
    gaps = ts - leaf_times[None, :]
    out = -gaps.sum(axis=1)
    out[(gaps < 0).any(axis=1)] = -np.inf
    return out


def mixture_logpdf(leaf_matrix, t) -> float:
    """Log density of the uniform-leaf mixture at time vector t."""
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return float(_mixture_logpdf_many(T_L, t[None, :])[0])


def _mixture_logpdf_many(T_L: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Mixture log density for many time vectors, chunked for memory."""
    N, K = T_L.shape
    sums = T_L.sum(axis=1)
    out = np.empty(ts.shape[0], dtype=np.float64)
    chunk = max(1, _CHUNK_FLOATS // (N * K))
    for lo in range(0, ts.shape[0], chunk):
        part = ts[lo:lo + chunk]
        valid = (part[:, None, :] >= T_L[None, :, :]).all(axis=2)
        terms = np.where(valid, sums[None, :], -np.inf)
        with np.errstate(divide="ignore"):
            out[lo:lo + chunk] = logsumexp(terms, axis=1) - part.sum(axis=1) - math.log(N)
    return out


def likelihood_ratio_sup_bound(leaf_matrix, leaf_times_v) -> float:
    """Time-free upper bound on sup_t f_v(t)/f_mixture(t):
    the reciprocal of the mixture's mass at the planted corner."""
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    T_v = np.asarray(leaf_times_v, dtype=np.float64)
    valid = (T_v[None, :] >= T_L).all(axis=1)
    if not valid.any():
        return math.inf
    s = np.exp(T_L[valid].sum(axis=1) - T_v.sum()).sum()
    return float(T_L.shape[0] / s)


def likelihood_ratio_sup_bound_all(leaf_matrix) -> np.ndarray:
    """The sup bound with every leaf in turn playing the planted role."""
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    N = T_L.shape[0]
    valid = (T_L[:, None, :] >= T_L[None, :, :]).all(axis=2)
    sums = T_L.sum(axis=1)
    ratios = np.exp(sums[None, :] - sums[:, None])
    mass = (ratios * valid).sum(axis=1)
    out = np.full(N, math.inf)
    nz = mass > 0
    out[nz] = N / mass[nz]
    return out


def chi2_mc(leaf_matrix, leaf_times_v, planted_degree: float, num_leaves: int,
            samples: int, seed, exact: bool = False) -> MCEstimate:
    """Monte Carlo chi-square divergence between planted and null models.

    Default form: (D/N)^2 * E[f_v/f_mixture] under t ~ f_v, an upper bound on
    the divergence of the eps-mixture. With exact=True, estimates the mixture
    divergence itself, (D/N)^2 * E[(ratio - 1)^2] under t ~ f_mixture.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    T_v = np.asarray(leaf_times_v, dtype=np.float64)
    N, K = T_L.shape
    if N != num_leaves:
        raise ValueError(f"num_leaves={num_leaves} but matrix has {N} rows")
    eps = planted_degree / num_leaves
    rng = derive_rng(seed)
    if N == 1:
        return MCEstimate(0.0, 0.0, samples)
    if exact:
        w_idx = rng.integers(0, N, size=samples)
        ts = T_L[w_idx] + rng.exponential(size=(samples, K))
        ratio = np.exp(_leaf_logpdf_many(T_v, ts) - _mixture_logpdf_many(T_L, ts))
        vals = eps * eps * (ratio - 1.0) ** 2
    else:
        ts = T_v[None, :] + rng.exponential(size=(samples, K))
        ratio = np.exp(_leaf_logpdf_many(T_v, ts) - _mixture_logpdf_many(T_L, ts))
        vals = eps * eps * ratio
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return MCEstimate(float(vals.mean()), se, samples)


def tensorized_tv_bound(chi2_single: float, num_leaves: int) -> float:
    """Total-variation bound for the N-fold product: 2*sqrt(exp(N*chi2) - 1)."""
    if chi2_single < 0:
        raise ValueError("chi2 must be >= 0")
    x = num_leaves * chi2_single
    if x > 700.0:
        return math.inf
    return 2.0 * math.sqrt(math.expm1(x))


def tv_mc(leaf_matrix, leaf_times_v, planted_degree: float, num_leaves: int,
          samples: int, seed) -> MCEstimate:
    """Direct Monte Carlo total variation between the eps-mixture and the
    null for a single attachment: E[max(0, 1 - P/Q)] under t ~ Q."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    T_v = np.asarray(leaf_times_v, dtype=np.float64)
    N, K = T_L.shape
    if N != num_leaves:
        raise ValueError(f"num_leaves={num_leaves} but matrix has {N} rows")
    eps = planted_degree / num_leaves
    if planted_degree == 0 or N == 1:
        return MCEstimate(0.0, 0.0, samples)
    rng = derive_rng(seed)
    w_idx = rng.integers(0, N, size=samples)
    ts = T_L[w_idx] + rng.exponential(size=(samples, K))
    ratio = np.exp(_leaf_logpdf_many(T_v, ts) - _mixture_logpdf_many(T_L, ts))
    vals = eps * np.maximum(0.0, 1.0 - ratio)
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return MCEstimate(float(vals.mean()), se, samples)


def shortcut_attachment_times(leaf_matrix, count: int, seed,
                              planted_idx=None, mixture_weight: float = 0.0) -> np.ndarray:
    """Sample attachment time vectors without simulating the full graph:
    pick a leaf (planted with probability mixture_weight), add Exp(1) per
    coordinate. Distributionally matches attachments in a simulated cascade."""
    T_L = leaf_matrix.leaf_times if isinstance(leaf_matrix, LeafTraceMatrix) else np.asarray(leaf_matrix, dtype=np.float64)
    N, K = T_L.shape
    rng = derive_rng(seed)
    idx = rng.integers(0, N, size=count)
    if planted_idx is not None:
        coins = rng.random(count)
        idx[coins < mixture_weight] = planted_idx
    return T_L[idx] + rng.exponential(size=(count, K))


@dataclass(frozen=True)
class TimingEventReport:
    """Outcome of the timing event E for one leaf.

    E holds when (1) every core vertex is infected by path_len^(2/5),
    (2) the leaf's own time is at least (2/3)*path_len in every trace, and
    (3) the squared deviations of its path passage times from path_len sum
    to at most 2*K*path_len.
    """

    ok: bool
    core_ok: bool
    leaf_late_ok: bool
    passage_ok: bool
    max_core_time: float
    min_leaf_time: float
    passage_sq_dev: float


def check_event_E(ltm: LeafTraceMatrix, leaf_idx: int, spec: HardEnsembleSpec,
                  core_threshold: float | None = None) -> TimingEventReport:
    """Evaluate the timing event E for the leaf anchored at core ``leaf_idx``."""
    L = spec.path_len
    K = ltm.num_traces
    if core_threshold is None:
        core_threshold = float(L) ** 0.4
    max_core = float(ltm.core_times.max())
    leaf_t = ltm.leaf_times[leaf_idx]
    passage = leaf_t - ltm.core_times[leaf_idx]
    sq_dev = float(((passage - L) ** 2).sum())
    core_ok = max_core <= core_threshold
    leaf_late_ok = bool((leaf_t >= (2.0 / 3.0) * L).all())
    passage_ok = sq_dev <= 2.0 * K * L
    return TimingEventReport(core_ok and leaf_late_ok and passage_ok,
                             core_ok, leaf_late_ok, passage_ok,
                             max_core, float(leaf_t.min()), sq_dev)


def event_E_frequency(ltm: LeafTraceMatrix, spec: HardEnsembleSpec,
                      core_threshold: float | None = None) -> float:
    """Fraction of leaves whose timing event E holds, vectorized."""
    L = spec.path_len
    K = ltm.num_traces
    if core_threshold is None:
        core_threshold = float(L) ** 0.4
    if ltm.core_times.max() > core_threshold:
        return 0.0
    leaf_late = (ltm.leaf_times >= (2.0 / 3.0) * L).all(axis=1)
    passage = ltm.leaf_times - ltm.core_times
    sq_dev = ((passage - L) ** 2).sum(axis=1)
    return float(np.mean(leaf_late & (sq_dev <= 2.0 * K * L)))

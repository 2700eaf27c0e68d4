import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import expon, kstest, poisson

import cascadescope as cs
from cascadescope.simulate import _count_closed, _order_trace
from _stats import (connected_graph_classes, infection_order_counts,
                    two_sample_chi2_pvalue)

PATH4 = cs.build_graph([(0, 1), (1, 2), (2, 3)], 4)
TRIANGLE = cs.build_graph([(0, 1), (1, 2), (0, 2)], 3)


@st.composite
def small_connected_graph(draw):
    n = draw(st.integers(2, 7))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                          max_size=8))
    edges = [(i, i + 1) for i in range(n - 1)]  # spanning path
    edges += [e for e in extra if e[0] != e[1]]
    return cs.build_graph(edges, n)


# --- determinism and trace shape -------------------------------------------


@pytest.mark.parametrize("sim", [cs.simulate_fpp, cs.simulate_gillespie])
def test_same_seed_same_trace(sim):
    a = sim(PATH4, 1, 0.7, 123)
    b = sim(PATH4, 1, 0.7, 123)
    assert a.vertices.tolist() == b.vertices.tolist()
    assert a.times.tolist() == b.times.tolist()
    c = sim(PATH4, 1, 0.7, 124)
    assert a.times.tolist() != c.times.tolist()


@given(g=small_connected_graph(), seed=st.integers(0, 2**32 - 1),
       engine=st.booleans())
@settings(max_examples=60, deadline=None)
def test_trace_invariants(g, seed, engine):
    sim = cs.simulate_fpp if engine else cs.simulate_gillespie
    trace = sim(g, 0, 1.0, seed)
    assert trace.n == g.n
    assert trace.vertices[0] == 0
    assert trace.times[0] == 0.0
    assert (np.diff(trace.times) >= 0).all()
    assert sorted(trace.vertices.tolist()) == list(range(g.n))
    assert trace.total_time == trace.times[-1]


def test_single_vertex_graph():
    g = cs.build_graph([], 1)
    for sim in (cs.simulate_fpp, cs.simulate_gillespie):
        trace = sim(g, 0, 1.0, 0)
        assert trace.events == [(0, 0.0)]


def test_unreachable_vertices_raise():
    g = cs.build_graph([(0, 1)], 3)
    with pytest.raises(ValueError, match="unreachable"):
        cs.simulate_fpp(g, 0, 1.0, 0)
    with pytest.raises(ValueError, match="unreachable"):
        cs.simulate_gillespie(g, 0, 1.0, 0)


def test_bad_arguments():
    for sim in (cs.simulate_fpp, cs.simulate_gillespie):
        with pytest.raises(ValueError):
            sim(PATH4, 9, 1.0, 0)
        with pytest.raises(ValueError):
            sim(PATH4, 0, 0.0, 0)
        with pytest.raises(ValueError):
            sim(PATH4, 0, -2.0, 0)


def test_time_of():
    trace = cs.simulate_fpp(PATH4, 0, 1.0, 5)
    for v, t in trace.events:
        assert trace.time_of(v) == t
    with pytest.raises(ValueError):
        trace.time_of(17)


def test_tie_break_prefers_smaller_id():
    order, times = _order_trace(np.array([0.0, 2.0, 1.0, 2.0]))
    assert order.tolist() == [0, 2, 1, 3]
    assert times.tolist() == [0.0, 1.0, 2.0, 2.0]


# --- distributional equivalence of the two engines --------------------------


def test_engine_equivalence_all_small_graphs():
    """Infection-order distributions of the two samplers agree on every
    connected graph with at most 5 vertices (chi-square, 1e4 each)."""
    classes = connected_graph_classes(5)
    assert len(classes) == 30
    pvals = []
    for gi, (n, edges) in enumerate(classes):
        g = cs.build_graph(edges, n)
        ca = infection_order_counts(g, cs.simulate_fpp, 10_000, (2024, gi, 0))
        cb = infection_order_counts(g, cs.simulate_gillespie, 10_000,
                                    (2024, gi, 1))
        pvals.append(two_sample_chi2_pvalue(ca, cb))
    assert min(pvals) > 0.01, f"min p-value {min(pvals):.4g}"


# --- analytic laws -----------------------------------------------------------


def test_leaf_waiting_times_are_exponential():
    """Star with hub source: every leaf's time is an independent Exp(lam)
    race on its own edge, so the empirical law must match exactly."""
    n_leaves = 1500
    lam = 1.3
    g = cs.build_graph([(0, i) for i in range(1, n_leaves + 1)], n_leaves + 1)
    trace = cs.simulate_fpp(g, 0, lam, 2024)
    leaf_times = trace.time_of_all()[1:]
    p = kstest(leaf_times, expon(scale=1 / lam).cdf).pvalue
    assert p > 0.01, f"KS p-value {p:.4g}"


def test_path_passage_time_is_gamma():
    # k-edge path passage time is a sum of k Exp(1) draws
    k = 3
    g = cs.build_graph([(i, i + 1) for i in range(k)], k + 1)
    ends = [cs.simulate_gillespie(g, 0, 1.0, cs.child_seed(77, i)).total_time
            for i in range(2000)]
    mean = float(np.mean(ends))
    se = float(np.std(ends) / math.sqrt(len(ends)))
    assert abs(mean - k) < 5 * se


def test_poisson_domination_of_window_counts():
    """Interval counts are stochastically dominated by a Poisson whose rate
    uses the crude bound lam * m * n * d * window on the cut size."""
    g, planted = cs.gen_planted_star_tree(3, 4, 2, 12)
    n = g.n
    lam, width = 1.0, 0.05
    m, d = 1, 4
    runs = 200
    grid = [0.2, 0.5, 1.0, 1.5]
    counts = np.empty((runs, len(grid)), dtype=np.int64)
    for r in range(runs):
        trace = cs.simulate_fpp(g, 0, lam, cs.child_seed(303, r))
        for j, t in enumerate(grid):
            counts[r, j] = cs.infection_count(trace, t, t + width).count
    bound_rate = lam * m * n * d * width
    for k in range(1, 11):
        emp = (counts >= k).mean(axis=0)
        sigma = np.sqrt(emp * (1 - emp) / runs)
        cap = poisson.sf(k - 1, bound_rate) + 3 * sigma
        assert (emp <= cap).all(), f"k={k}: {emp} vs {cap}"


def test_temporal_separation_decays_with_k():
    """Frequency of some low-degree vertex landing within delta of the
    planted vertex in all of the first K traces is nonincreasing in K."""
    g, planted = cs.gen_planted_star_tree(3, 6, 3, 269)
    delta = g.n ** -0.55
    low = np.ones(g.n, dtype=bool)
    low[planted] = False
    runs, K = 30, 4
    hits = np.zeros((runs, K), dtype=bool)
    for r in range(runs):
        tt = np.stack([cs.simulate_fpp(g, 0, 1.0, cs.child_seed(404, r, i)).time_of_all()
                       for i in range(K)], axis=1)
        close = np.abs(tt - tt[planted][None, :]) <= delta
        prefix = np.logical_and.accumulate(close, axis=1)
        hits[r] = prefix[low].any(axis=0)
    freq = hits.mean(axis=0)
    assert (np.diff(freq) <= 0).all(), f"frequencies {freq}"


# --- interval counting -------------------------------------------------------


def test_infection_count_examples():
    trace = cs.simulate_fpp(PATH4, 0, 1.0, 9)
    assert cs.infection_count(trace, -1.0, 0.0).count == 1
    assert cs.infection_count(trace, trace.total_time, math.inf).count == 1
    assert cs.infection_count(trace, 0.0, math.inf).count == 4
    with pytest.raises(ValueError):
        cs.infection_count(trace, 2.0, 1.0)


@given(seed=st.integers(0, 10**6), a=st.floats(-1, 6), width=st.floats(0, 6))
@settings(max_examples=80, deadline=None)
def test_infection_count_matches_linear_scan(seed, a, width):
    trace = cs.simulate_gillespie(TRIANGLE, 0, 1.0, seed)
    b = a + width
    brute = sum(1 for t in trace.times.tolist() if a <= t <= b)
    assert cs.infection_count(trace, a, b).count == brute


def test_count_closed_includes_both_endpoints():
    times = np.array([0.0, 0.5, 0.5, 1.0])
    assert _count_closed(times, 0.5, 0.5) == 2
    assert _count_closed(times, 0.0, 1.0) == 4
    assert _count_closed(times, 0.6, 0.9) == 0


# --- cut size ----------------------------------------------------------------


def test_cut_size_examples():
    trace = cs.simulate_fpp(PATH4, 0, 1.0, 11)
    assert cs.cut_size(PATH4, trace, 0.0) == 1  # deg(source)
    assert cs.cut_size(PATH4, trace, trace.total_time) == 0
    tri_trace = cs.simulate_fpp(TRIANGLE, 0, 1.0, 11)
    assert cs.cut_size(TRIANGLE, tri_trace, 0.0) == 2
    with pytest.raises(ValueError):
        cs.cut_size(PATH4, trace, -0.5)


@given(g=small_connected_graph(), seed=st.integers(0, 10**6),
       t=st.floats(0, 8))
@settings(max_examples=60, deadline=None)
def test_cut_size_matches_edge_scan(g, seed, t):
    trace = cs.simulate_fpp(g, 0, 1.0, seed)
    tt = trace.time_of_all()
    brute = 0
    for e in range(g.edge_count):
        u, v = int(g.edge_u[e]), int(g.edge_v[e])
        brute += (tt[u] <= t) != (tt[v] <= t)
    assert cs.cut_size(g, trace, t) == brute


# --- exact rate jumps --------------------------------------------------------


def test_rate_jump_examples():
    two = cs.build_graph([(0, 1)], 2)
    trace = cs.simulate_fpp(two, 0, 1.0, 3)
    assert cs.rate_jump_exact(two, trace, 1) == -1.0  # 1*(1 - 2*1)
    star = cs.build_graph([(0, i) for i in range(1, 6)], 6)
    st_trace = cs.simulate_fpp(star, 0, 1.0, 3)
    assert cs.rate_jump_exact(star, st_trace, 0) == 5.0  # hub as source


@given(g=small_connected_graph(), seed=st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_rate_jump_equals_cut_difference(g, seed):
    trace = cs.simulate_gillespie(g, 0, 1.0, seed)
    for step, (v, t) in enumerate(trace.events):
        after = cs.cut_size(g, trace, t)
        before = cs.cut_size(g, trace, trace.times[step - 1]) if step else 0
        assert cs.rate_jump_exact(g, trace, int(v)) == pytest.approx(after - before)


# --- exposure statistic ------------------------------------------------------


def test_exposure_path_example():
    trace = cs.simulate_fpp(PATH4, 0, 1.0, 21)
    stats = cs.check_exposure(PATH4, trace, 1)
    assert stats.max_front_degree == 1
    assert stats.exposure_ok
    assert stats.total_time == trace.total_time


def test_exposure_counts_earlier_neighbors():
    trace = cs.simulate_gillespie(TRIANGLE, 0, 1.0, 2)
    stats = cs.check_exposure(TRIANGLE, trace, 1)
    # last vertex of the triangle always sees both others infected
    assert stats.max_front_degree == 2


def test_exposure_threshold_formula():
    assert cs.exposure_threshold(100, 2) == pytest.approx(
        2 * 2 * 10 * math.log(100) ** 2)


# --- file round trip ---------------------------------------------------------


def test_trace_round_trip_exact(tmp_path):
    trace = cs.simulate_fpp(PATH4, 2, 0.9, 88)
    path = tmp_path / "t.csv"
    cs.write_trace(trace, path)
    back = cs.read_trace(path)
    assert back.vertices.tolist() == trace.vertices.tolist()
    assert back.times.tolist() == trace.times.tolist()
    assert back.source == trace.source
    assert math.isnan(back.lam)


def test_read_trace_rejects_bad_header(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("vertex,time\n0,0\n")
    with pytest.raises(ValueError, match="header"):
        cs.read_trace(p)


def test_read_trace_reports_row_number(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("vertex_id,time\n0,0\n1,bogus\n")
    with pytest.raises(ValueError, match=":3"):
        cs.read_trace(p)


def test_read_trace_rejects_unsorted(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("vertex_id,time\n0,0\n2,0.9\n1,0.5\n")
    with pytest.raises(ValueError, match="sorted"):
        cs.read_trace(p)


def test_read_trace_requires_zero_start(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("vertex_id,time\n0,0.5\n1,0.9\n")
    with pytest.raises(ValueError, match="time 0"):
        cs.read_trace(p)


def test_read_trace_requires_full_coverage(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("vertex_id,time\n0,0\n0,0.5\n")
    with pytest.raises(ValueError, match="missing"):
        cs.read_trace(p)

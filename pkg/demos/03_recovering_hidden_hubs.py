"""Recovering hidden hubs.

Build a sparse random-tree-like graph, splice in two hubs of enormous
degree, and try to name them from cascade traces alone: threshold the
second-difference degree estimate in every trace and keep the vertices
that clear it each time.

The interesting part is what goes wrong. With the trace count K derived
from the graph size, each single trace admits a crowd of false positives
born from pure window noise near the infection burst, and the intersection
across K traces does not always thin them out fast enough. Doubling K
squares the thinning factor and the estimate snaps to the planted pair.

Run: python3 demos/03_recovering_hidden_hubs.py  (about half a minute)
"""

import numpy as np

import cascadescope as cs


def run_once(g, hubs, config, master, run):
    traces = []
    for k in range(config.num_traces):
        src = int(cs.derive_rng(master, run, k, 0).integers(g.n))
        traces.append(cs.simulate_fpp(g, src, 1.0,
                                      cs.child_seed(master, run, k, 1)))
    found, _ = cs.estimate_high_degree(traces, config)
    return found


def describe(found, hubs):
    extra = len(found - hubs)
    missed = len(hubs - found)
    tag = "exact" if found == hubs else f"{extra} extra, {missed} missed"
    return f"{len(found):4d} flagged ({tag})"


def main():
    g, hubs, D, _ = cs.build_recovery_instance(20_000, 0.9, 2, 3)
    base = cs.default_config(g.n, 0.9)
    print(f"{g.n} vertices, planted hubs {sorted(hubs)} of degree {D}")
    print(f"window delta = {base.delta:.2e}, threshold tau = {base.tau:.1f}, "
          f"derived trace count K = {base.num_traces}\n")

    doubled = cs.EstimatorConfig(base.delta, base.tau, 2 * base.num_traces)
    for run in range(3):
        at_k = run_once(g, hubs, base, 303, run)
        at_2k = run_once(g, hubs, doubled, 404, run)
        print(f"run {run}:  K={base.num_traces}: {describe(at_k, hubs)}   "
              f"K={doubled.num_traces}: {describe(at_2k, hubs)}")

    print("\nAt the derived K the hubs always clear the threshold; the fight")
    print("is purely against the noise floor, and doubling K usually wins it.")
    print("But each extra trace is also one more chance for a hub to fall")
    print("mid-burst, while the other hub's star ignites, where the backward")
    print("window outweighs the forward one and even a true hub's estimate")
    print("dips below the bar. Robust recovery is a budget negotiation.")


if __name__ == "__main__":
    main()

"""Continuous-time cascade simulation on graphs, high-degree vertex
estimation from infection traces, and detection-limit experiments for
planted attachment ensembles."""

from .graphs import (ClassReport, GenSpec, Graph, Scaffold, build_graph,
                     complete_kary_tree, gen_balanced_tree,
                     gen_planted_star_tree, gen_scaffold, is_connected,
                     layer_start,
                     read_graph, tree_size, validate_class, write_graph)
from .rng import as_seed_sequence, child_seed, derive_rng, seed_record
from .simulate import (CascadeTrace, IntervalCount, SimStats, check_exposure,
                       cut_size, exposure_threshold, infection_count,
                       rate_jump_exact, read_trace, simulate_fpp,
                       simulate_gillespie, write_trace)
from .estimator import (DegreeEstimate, DegreeTable, EstimatorConfig,
                        default_config, deg_hat, deg_hat_all,
                        derivative_series, estimate_high_degree,
                        write_derivative_series)
from .hardness import (DetectionReport, HardEnsembleSpec, LeafTraceMatrix,
                       MCEstimate, TimingEventReport, check_event_E, chi2_mc,
                       event_E_frequency, leaf_logpdf,
                       likelihood_ratio_sup_bound,
                       likelihood_ratio_sup_bound_all, mixture_logpdf,
                       sample_attachment_graph, sample_leaf_times,
                       shortcut_attachment_times, tensorized_tv_bound, tv_mc)
from .experiments import (ConfigError, ExperimentConfig, ExperimentReport,
                          build_recovery_instance, load_config, pool_size,
                          run_estimate, run_figure3, run_gen_graph,
                          run_hardness_sweep, run_recovery_sweep,
                          run_simulate, validate_config)

__version__ = "0.1.0"

__all__ = [
    "Graph", "ClassReport", "GenSpec", "Scaffold", "build_graph",
    "complete_kary_tree", "gen_balanced_tree", "gen_planted_star_tree",
    "gen_scaffold", "is_connected", "layer_start", "read_graph", "tree_size",
    "validate_class", "write_graph",
    "as_seed_sequence", "child_seed", "derive_rng", "seed_record",
    "CascadeTrace", "IntervalCount", "SimStats", "check_exposure", "cut_size",
    "exposure_threshold", "infection_count", "rate_jump_exact", "read_trace",
    "simulate_fpp", "simulate_gillespie", "write_trace",
    "DegreeEstimate", "DegreeTable", "EstimatorConfig", "default_config",
    "deg_hat", "deg_hat_all", "derivative_series", "estimate_high_degree",
    "write_derivative_series",
    "DetectionReport", "HardEnsembleSpec", "LeafTraceMatrix", "MCEstimate",
    "TimingEventReport", "check_event_E", "chi2_mc", "event_E_frequency",
    "leaf_logpdf", "likelihood_ratio_sup_bound",
    "likelihood_ratio_sup_bound_all", "mixture_logpdf",
    "sample_attachment_graph", "sample_leaf_times",
    "shortcut_attachment_times", "tensorized_tv_bound", "tv_mc",
    "ConfigError", "ExperimentConfig", "ExperimentReport",
    "build_recovery_instance", "load_config", "pool_size", "run_estimate",
    "run_figure3", "run_gen_graph", "run_hardness_sweep",
    "run_recovery_sweep", "run_simulate", "validate_config",
    "__version__",
]

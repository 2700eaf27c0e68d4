"""Experiment drivers: build instances, run cascades, write reports.

Every output file is byte-deterministic for a fixed config and master seed:
JSON reports use sorted keys, CSVs use %.17g floats, and each random stream
is derived from the master seed by a fixed integer path, independent of
thread scheduling. Wall-clock timings go to the log on stderr, never into
output files.
"""

from __future__ import annotations

import json
import logging
import math
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .estimator import (EstimatorConfig, deg_hat_all, default_config,
                        derivative_series, estimate_high_degree,
                        write_derivative_series)
from .graphs import (GenSpec, Graph, build_graph, complete_kary_tree,
                     gen_planted_star_tree, gen_scaffold, read_graph,
                     validate_class, write_graph)
from .hardness import (DetectionReport, HardEnsembleSpec, chi2_mc,
                       event_E_frequency, likelihood_ratio_sup_bound_all,
                       sample_attachment_graph, sample_leaf_times,
                       tensorized_tv_bound, tv_mc)
from .rng import child_seed, derive_rng
from .simulate import simulate_fpp, write_trace, read_trace

_LOG = logging.getLogger("cascadescope")

SCHEMA_VERSION = 1

THREADS_ENV = "CASCADE_SCOPE_THREADS"

HARDNESS_CSV_HEADER = "K,N,L,D,chi2,tv_bound,tv_mc,lr_sup_p99"
RECOVERY_CSV_HEADER = "K,successes,runs,success_rate"

# single-cascade wall-time budget for the derivative experiment, seconds
CASCADE_BUDGET_S = 60.0


class ConfigError(ValueError):
    """Invalid configuration: file contents, flags, or environment."""


def pool_size() -> int:
    """Worker count for independent runs; CASCADE_SCOPE_THREADS overrides."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            k = int(raw)
        except ValueError:
            raise ConfigError(
                f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if k < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1, got {k}")
        return k
    return min(4, os.cpu_count() or 1)


def _map_ordered(fn, items):
    """Apply fn to items, preserving order; threads only add wall-time overlap,
    results and seeds never depend on scheduling."""
    items = list(items)
    workers = pool_size()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    master_seed: int
    runs: int
    output_dir: str | None
    options: dict


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    config: dict
    results: dict

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": self.kind,
                "config": self.config, "results": self.results}


_COMMON_KEYS = ("schema_version", "kind", "master_seed", "runs", "output_dir")

_KIND_OPTION_KEYS = {
    "gen_graph": ("gen",),
    "simulate": ("gen", "graph_file", "lambda", "source", "traces_per_run"),
    "estimate": ("traces_dir", "alpha", "delta", "tau", "num_traces"),
    "figure3": ("branching", "height", "layer", "planted_degree", "lambda",
                "delta", "grid_step", "source"),
    "recovery_sweep": ("n", "alpha", "num_hubs", "branching", "lambda"),
    "hardness_sweep": ("core_size", "path_len", "degree_exponent",
                       "planted_degree", "k_grid", "mc_samples", "deg_cap",
                       "source"),
}

_DEFAULT_RUNS = {"gen_graph": 1, "simulate": 1, "estimate": 1, "figure3": 20,
                 "recovery_sweep": 20, "hardness_sweep": 1}


def _as_int(val, name, minimum=None, maximum=None) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{name} must be an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {val}")
    if maximum is not None and val > maximum:
        raise ConfigError(f"{name} must be <= {maximum}, got {val}")
    return val


def _as_float(val, name, positive=False) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{name} must be a number, got {val!r}")
    val = float(val)
    if not math.isfinite(val):
        raise ConfigError(f"{name} must be finite, got {val}")
    if positive and val <= 0:
        raise ConfigError(f"{name} must be > 0, got {val}")
    return val


def _as_source(val, name) -> int | str:
    if val == "random":
        return "random"
    return _as_int(val, name, minimum=0)


def load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return obj


def validate_config(obj: dict, kind: str, *, from_file: bool = False) -> ExperimentConfig:
    """Normalize a raw config dict for the given experiment kind.

    Unknown keys, wrong types, and out-of-range values all raise ConfigError.
    Defaults are filled in so the echoed config fully determines the run.
    """
    if kind not in _KIND_OPTION_KEYS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    allowed = set(_COMMON_KEYS) | set(_KIND_OPTION_KEYS[kind])
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys for {kind}: {', '.join(unknown)}")
    if from_file:
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(
                f"config schema_version must be {SCHEMA_VERSION}, "
                f"got {obj.get('schema_version')!r}")
    if "kind" in obj and obj["kind"] != kind:
        raise ConfigError(
            f"config kind {obj['kind']!r} does not match requested {kind!r}")
    master_seed = _as_int(obj.get("master_seed", 0), "master_seed", minimum=0)
    runs = _as_int(obj.get("runs", _DEFAULT_RUNS[kind]), "runs", minimum=1)
    output_dir = obj.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ConfigError("output_dir must be a string path")
    opts = {k: obj[k] for k in _KIND_OPTION_KEYS[kind] if k in obj}
    opts = _VALIDATORS[kind](opts)
    return ExperimentConfig(kind, master_seed, runs, output_dir, opts)


def _validate_gen_dict(gen, name) -> dict:
    if not isinstance(gen, dict):
        raise ConfigError(f"{name} must be an object with kind/params")
    try:
        GenSpec(gen.get("kind"), {k: v for k, v in gen.items() if k != "kind"})
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{name}: {exc}") from None
    return gen


def _check_gen_graph(opts: dict) -> dict:
    if "gen" not in opts:
        raise ConfigError("gen_graph requires a 'gen' object")
    return {"gen": _validate_gen_dict(opts["gen"], "gen")}


def _check_simulate(opts: dict) -> dict:
    has_gen = "gen" in opts
    has_file = "graph_file" in opts
    if has_gen == has_file:
        raise ConfigError("simulate requires exactly one of 'gen' or 'graph_file'")
    out = {"gen": None, "graph_file": None}
    if has_gen:
        out["gen"] = _validate_gen_dict(opts["gen"], "gen")
    else:
        if not isinstance(opts["graph_file"], str):
            raise ConfigError("graph_file must be a string path")
        out["graph_file"] = opts["graph_file"]
    out["lambda"] = _as_float(opts.get("lambda", 1.0), "lambda", positive=True)
    out["source"] = _as_source(opts.get("source", "random"), "source")
    out["traces_per_run"] = _as_int(opts.get("traces_per_run", 1),
                                    "traces_per_run", minimum=1)
    return out


def _check_estimate(opts: dict) -> dict:
    if "traces_dir" not in opts or not isinstance(opts["traces_dir"], str):
        raise ConfigError("estimate requires a string 'traces_dir'")
    has_alpha = "alpha" in opts
    has_pair = "delta" in opts or "tau" in opts
    if has_alpha == has_pair:
        raise ConfigError("estimate requires exactly one of 'alpha' or "
                          "('delta' and 'tau')")
    out = {"traces_dir": opts["traces_dir"], "alpha": None, "delta": None,
           "tau": None, "num_traces": None}
    if has_alpha:
        alpha = _as_float(opts["alpha"], "alpha")
        if not 0.75 < alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0.75, 1), got {alpha}")
        out["alpha"] = alpha
    else:
        if "delta" not in opts or "tau" not in opts:
            raise ConfigError("estimate needs both 'delta' and 'tau' when "
                              "alpha is not given")
        out["delta"] = _as_float(opts["delta"], "delta", positive=True)
        out["tau"] = _as_float(opts["tau"], "tau", positive=True)
    if "num_traces" in opts:
        out["num_traces"] = _as_int(opts["num_traces"], "num_traces", minimum=1)
    return out


def _check_figure3(opts: dict) -> dict:
    out = {
        "branching": _as_int(opts.get("branching", 5), "branching", minimum=2),
        "height": _as_int(opts.get("height", 8), "height", minimum=1),
        "layer": _as_int(opts.get("layer", 6), "layer", minimum=0),
        "planted_degree": _as_int(opts.get("planted_degree", 7500),
                                  "planted_degree", minimum=1),
        "lambda": _as_float(opts.get("lambda", 1.0), "lambda", positive=True),
        "delta": _as_float(opts.get("delta", 0.075), "delta", positive=True),
        "grid_step": _as_float(opts.get("grid_step", 0.01), "grid_step",
                               positive=True),
        "source": _as_source(opts.get("source", "random"), "source"),
    }
    if not 1 <= out["layer"] <= out["height"]:
        raise ConfigError(
            f"layer must lie in [1, height={out['height']}], got {out['layer']}")
    if out["planted_degree"] <= out["branching"] + 1:
        raise ConfigError(
            f"planted_degree {out['planted_degree']} must exceed "
            f"branching + 1 = {out['branching'] + 1}")
    return out


def _check_recovery(opts: dict) -> dict:
    out = {
        "n": _as_int(opts.get("n", 100_000), "n", minimum=100),
        "alpha": _as_float(opts.get("alpha", 0.9), "alpha"),
        "num_hubs": _as_int(opts.get("num_hubs", 2), "num_hubs", minimum=0),
        "branching": _as_int(opts.get("branching", 3), "branching", minimum=2),
        "lambda": _as_float(opts.get("lambda", 1.0), "lambda", positive=True),
    }
    if not 0.75 < out["alpha"] < 1.0:
        raise ConfigError(f"alpha must lie in (0.75, 1), got {out['alpha']}")
    planted_deg = math.ceil(out["n"] ** out["alpha"])
    base_n = out["n"] - out["num_hubs"] * (planted_deg - (out["branching"] + 1))
    if out["num_hubs"] > 0 and planted_deg <= out["branching"] + 1:
        raise ConfigError("planted degree does not exceed the tree degree")
    if base_n < (out["num_hubs"] + 1) * out["branching"] + 2:
        raise ConfigError(
            f"n={out['n']} too small for {out['num_hubs']} hubs of degree "
            f"{planted_deg}: backbone would have {base_n} vertices")
    return out


def _check_hardness(opts: dict) -> dict:
    out = {
        "core_size": _as_int(opts.get("core_size", 2000), "core_size", minimum=2),
        "path_len": _as_int(opts.get("path_len", 50), "path_len", minimum=1),
        "degree_exponent": None,
        "planted_degree": None,
        "mc_samples": _as_int(opts.get("mc_samples", 4000), "mc_samples", minimum=2),
        "deg_cap": None,
        "source": _as_int(opts.get("source", 0), "source", minimum=0),
    }
    if "planted_degree" in opts and opts["planted_degree"] is not None:
        out["planted_degree"] = _as_float(opts["planted_degree"],
                                          "planted_degree", positive=True)
    else:
        expo = _as_float(opts.get("degree_exponent", 0.3), "degree_exponent")
        if not 0.0 < expo < 1.0:
            raise ConfigError(f"degree_exponent must lie in (0, 1), got {expo}")
        out["degree_exponent"] = expo
        out["planted_degree"] = float(out["core_size"]) ** expo
    if not 2.0 <= out["planted_degree"] <= out["core_size"]:
        raise ConfigError(
            f"planted_degree {out['planted_degree']:g} must lie in "
            f"[2, core_size={out['core_size']}]")
    if "deg_cap" in opts and opts["deg_cap"] is not None:
        out["deg_cap"] = _as_int(opts["deg_cap"], "deg_cap", minimum=1)
    k_grid = opts.get("k_grid", [1, 2, 3])
    if not isinstance(k_grid, list) or not k_grid:
        raise ConfigError("k_grid must be a non-empty list of integers")
    out["k_grid"] = [_as_int(k, "k_grid entry", minimum=1) for k in k_grid]
    return out


_VALIDATORS = {
    "gen_graph": _check_gen_graph,
    "simulate": _check_simulate,
    "estimate": _check_estimate,
    "figure3": _check_figure3,
    "recovery_sweep": _check_recovery,
    "hardness_sweep": _check_hardness,
}


# ---------------------------------------------------------------------------
# report and file helpers


def write_json_report(path, report: ExperimentReport) -> None:
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _append_csv(path, header: str, rows) -> None:
    """Append data rows, creating the file with its header when absent."""
    path = Path(path)
    fresh = not path.exists()
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        if fresh:
            fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


_TRACE_FILE_RE = re.compile(r"trace_(\d+)_(\d+)\.csv$")


def _trace_sort_key(path: Path):
    m = _TRACE_FILE_RE.search(path.name)
    if m:
        return (0, int(m.group(1)), int(m.group(2)), path.name)
    return (1, 0, 0, path.name)


def _pick_source(option, n: int, seed, *path) -> int:
    if option == "random":
        return int(derive_rng(seed, *path).integers(n))
    if option >= n:
        raise ValueError(f"source {option} out of range for {n} vertices")
    return int(option)


def _ensure_dir(out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config_echo(cfg: ExperimentConfig) -> dict:
    return {"kind": cfg.kind, "master_seed": cfg.master_seed, "runs": cfg.runs,
            **cfg.options}


# ---------------------------------------------------------------------------
# experiment runners


def run_gen_graph(cfg: ExperimentConfig, out_path) -> ExperimentReport:
    gen = GenSpec(cfg.options["gen"]["kind"],
                  {k: v for k, v in cfg.options["gen"].items() if k != "kind"})
    g, meta = gen.build()
    out = Path(out_path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    write_graph(g, out)
    results = {"n": g.n, "edges": g.edge_count, "path": str(out), **meta}
    return ExperimentReport("gen_graph", _config_echo(cfg), results)


def _build_sim_graph(options: dict):
    if options["gen"] is not None:
        gen = GenSpec(options["gen"]["kind"],
                      {k: v for k, v in options["gen"].items() if k != "kind"})
        return gen.build()
    g = read_graph(options["graph_file"])
    return g, {"graph_file": options["graph_file"]}


def run_simulate(cfg: ExperimentConfig, out_dir) -> ExperimentReport:
    g, meta = _build_sim_graph(cfg.options)
    out = _ensure_dir(out_dir)
    lam = cfg.options["lambda"]
    per_run = cfg.options["traces_per_run"]

    def one(run: int):
        rows = []
        for k in range(per_run):
            source = _pick_source(cfg.options["source"], g.n,
                                  cfg.master_seed, run, k, 0)
            t0 = time.perf_counter()
            trace = simulate_fpp(g, source, lam,
                                 child_seed(cfg.master_seed, run, k, 1))
            _LOG.info("simulate run %d trace %d: %.3f s", run, k,
                      time.perf_counter() - t0)
            write_trace(trace, out / f"trace_{run}_{k}.csv")
            rows.append({"run": run, "trace": k, "source": source,
                         "events": trace.n, "total_time": trace.total_time})
        return rows

    nested = _map_ordered(one, range(cfg.runs))
    traces = [row for rows in nested for row in rows]
    results = {"graph": {"n": g.n, "edges": g.edge_count, **meta},
               "seed_rule": "source stream (master_seed, run, trace, 0); "
                            "cascade stream (master_seed, run, trace, 1)",
               "traces": traces}
    report = ExperimentReport("simulate", _config_echo(cfg), results)
    write_json_report(out / "report.json", report)
    return report


def run_estimate(cfg: ExperimentConfig, out_dir) -> ExperimentReport:
    traces_dir = Path(cfg.options["traces_dir"])
    files = sorted(traces_dir.glob("trace_*.csv"), key=_trace_sort_key)
    if not files:
        raise RuntimeError(f"no trace_*.csv files found in {traces_dir}")
    want = cfg.options["num_traces"]
    if want is not None:
        if len(files) < want:
            raise RuntimeError(
                f"need {want} traces but found only {len(files)} in {traces_dir}")
        files = files[:want]
    traces = [read_trace(f) for f in files]
    n = traces[0].n
    if cfg.options["alpha"] is not None:
        base = default_config(n, cfg.options["alpha"])
        econf = EstimatorConfig(base.delta, base.tau, len(traces))
    else:
        econf = EstimatorConfig(cfg.options["delta"], cfg.options["tau"],
                                len(traces))
    estimated, table = estimate_high_degree(traces, econf)
    out = _ensure_dir(out_dir)
    est_sorted = sorted(estimated)
    results = {
        "num_vertices": n,
        "num_traces": len(traces),
        "delta": econf.delta,
        "tau": econf.tau,
        "trace_files": [f.name for f in files],
        "estimated": est_sorted,
        "estimates": {str(v): [float(x) for x in table.values[v]]
                      for v in est_sorted},
    }
    report = ExperimentReport("estimate", _config_echo(cfg), results)
    write_json_report(out / "report.json", report)
    return report


def run_figure3(cfg: ExperimentConfig, out_dir) -> ExperimentReport:
    opts = cfg.options
    g, planted = gen_planted_star_tree(opts["branching"], opts["height"],
                                       opts["layer"], opts["planted_degree"])
    out = _ensure_dir(out_dir)
    delta = opts["delta"]

    def one(run: int):
        source = _pick_source(opts["source"], g.n, cfg.master_seed, run, 0)
        t0 = time.perf_counter()
        trace = simulate_fpp(g, source, opts["lambda"],
                             child_seed(cfg.master_seed, run, 1))
        dt = time.perf_counter() - t0
        _LOG.info("figure3 run %d: cascade %.3f s", run, dt)
        if dt > CASCADE_BUDGET_S:
            raise RuntimeError(
                f"single cascade took {dt:.1f} s, over the "
                f"{CASCADE_BUDGET_S:.0f} s budget (n={g.n}, "
                f"edges={g.edge_count}); shrink branching/height or "
                f"planted_degree, or raise lambda to compress time")
        grid, first, second = derivative_series(trace, delta,
                                                opts["grid_step"])
        write_derivative_series(out / f"derivatives_{run}.csv", grid, first,
                                second)
        t_planted = trace.time_of(planted)
        argmax_t = float(grid[int(np.argmax(second))])
        dh = deg_hat_all(trace, delta)
        top = int(np.argmax(dh))
        return {"run": run, "source": source, "t_planted": t_planted,
                "argmax_time": argmax_t,
                "argmax_within_delta": bool(abs(argmax_t - t_planted) <= delta + 1e-12),
                "deg_hat_planted": float(dh[planted]),
                "deg_hat_top_vertex": top,
                "planted_is_top": bool(top == planted)}

    rows = _map_ordered(one, range(cfg.runs))
    hits = sum(r["argmax_within_delta"] for r in rows)
    results = {"n": g.n, "planted_vertex": planted,
               "planted_degree": int(g.degree(planted)),
               "seed_rule": "source stream (master_seed, run, 0); "
                            "cascade stream (master_seed, run, 1)",
               "runs": rows, "argmax_hits": hits,
               "argmax_hit_rate": hits / cfg.runs,
               "top_vertex_hits": sum(r["planted_is_top"] for r in rows)}
    report = ExperimentReport("figure3", _config_echo(cfg), results)
    write_json_report(out / "report.json", report)
    return report


def build_recovery_instance(n: int, alpha: float, num_hubs: int,
                            branching: int):
    """Tree-plus-hubs instance with exactly n vertices.

    A complete branching-ary tree backbone, with vertices 1..num_hubs
    promoted to degree ceil(n^alpha) by pendant leaves. Returns
    (graph, hub frozenset, planted_degree, max_lowdeg).
    """
    d = branching + 1
    planted_deg = math.ceil(n ** alpha)
    extra = planted_deg - d
    base_n = n - num_hubs * extra
    if base_n < (num_hubs + 1) * branching + 2:
        raise ValueError(f"n={n} too small for {num_hubs} hubs of degree {planted_deg}")
    base = complete_kary_tree(base_n, branching)
    if num_hubs == 0:
        return base, frozenset(), planted_deg, d
    eu = [base.edge_u]
    ev = [base.edge_v]
    for j in range(num_hubs):
        lo = base_n + j * extra
        eu.append(np.full(extra, 1 + j, dtype=np.int64))
        ev.append(np.arange(lo, lo + extra, dtype=np.int64))
    g = build_graph(np.stack([np.concatenate(eu), np.concatenate(ev)], axis=1), n)
    return g, frozenset(range(1, num_hubs + 1)), planted_deg, d


def run_recovery_sweep(cfg: ExperimentConfig, out_dir) -> ExperimentReport:
    opts = cfg.options
    g, hubs, planted_deg, d = build_recovery_instance(
        opts["n"], opts["alpha"], opts["num_hubs"], opts["branching"])
    cls = validate_class(g, opts["num_hubs"], d, planted_deg)
    if not cls.is_member:
        raise RuntimeError(
            f"instance failed class check: {len(cls.violations)} violations")
    econf = default_config(g.n, opts["alpha"])
    K = econf.num_traces

    def one(run: int):
        t0 = time.perf_counter()
        traces = []
        sources = []
        for k in range(K):
            source = _pick_source("random", g.n, cfg.master_seed, run, k, 0)
            sources.append(source)
            traces.append(simulate_fpp(g, source, opts["lambda"],
                                       child_seed(cfg.master_seed, run, k, 1)))
        estimated, table = estimate_high_degree(traces, econf)
        # prefix intersections give the trace-budget ablation for free
        passed = table.values >= econf.tau
        prefix = np.logical_and.accumulate(passed, axis=1)
        per_k = [bool(frozenset(np.flatnonzero(prefix[:, j]).tolist()) == hubs)
                 for j in range(K)]
        _LOG.info("recovery run %d: %.3f s", run, time.perf_counter() - t0)
        return {"run": run, "sources": sources,
                "estimated": sorted(estimated),
                "exact": bool(frozenset(estimated) == hubs),
                "per_k_exact": per_k}

    rows = _map_ordered(one, range(cfg.runs))
    per_k_succ = [sum(r["per_k_exact"][j] for r in rows) for j in range(K)]
    out = _ensure_dir(out_dir)
    _append_csv(out / "recovery_rate.csv", RECOVERY_CSV_HEADER,
                [(j + 1, per_k_succ[j], cfg.runs,
                  float(per_k_succ[j] / cfg.runs)) for j in range(K)])
    results = {"n": g.n, "hubs": sorted(hubs), "planted_degree": planted_deg,
               "max_lowdeg": d, "num_traces": K, "delta": econf.delta,
               "tau": econf.tau,
               "seed_rule": "source stream (master_seed, run, trace, 0); "
                            "cascade stream (master_seed, run, trace, 1)",
               "runs": rows,
               "successes": per_k_succ[K - 1],
               "success_rate": per_k_succ[K - 1] / cfg.runs,
               "per_k_successes": per_k_succ}
    report = ExperimentReport("recovery_sweep", _config_echo(cfg), results)
    write_json_report(out / "report.json", report)
    return report


def run_hardness_sweep(cfg: ExperimentConfig, out_dir) -> ExperimentReport:
    opts = cfg.options
    spec = HardEnsembleSpec(opts["core_size"], opts["path_len"],
                            opts["planted_degree"], deg_cap=opts["deg_cap"])
    scaffold = gen_scaffold(spec.core_size, spec.path_len)
    if not 0 <= opts["source"] < scaffold.graph.n:
        raise RuntimeError(f"source {opts['source']} outside scaffold "
                           f"({scaffold.graph.n} vertices)")
    N = spec.core_size
    rows_json = []
    rows_csv = []
    for rep in range(cfg.runs):
        for K in opts["k_grid"]:
            t0 = time.perf_counter()
            ltm = sample_leaf_times(scaffold, K,
                                    child_seed(cfg.master_seed, rep, K, 0),
                                    source=opts["source"])
            v_idx = int(derive_rng(cfg.master_seed, rep, K, 1).integers(N))
            t_v = ltm.leaf_times[v_idx]
            chi2 = chi2_mc(ltm, t_v, spec.planted_degree, N,
                           opts["mc_samples"],
                           child_seed(cfg.master_seed, rep, K, 2))
            tvb = tensorized_tv_bound(chi2.value, N)
            tvm = tv_mc(ltm, t_v, spec.planted_degree, N, opts["mc_samples"],
                        child_seed(cfg.master_seed, rep, K, 3))
            lr_all = likelihood_ratio_sup_bound_all(ltm)
            p99 = float(np.percentile(lr_all, 99))
            freq = event_E_frequency(ltm, spec)
            det = DetectionReport(chi2.value, tvb, tvm.value,
                                  float(lr_all.max()), freq)
            row = {"rep": rep, "K": K, "planted_leaf": v_idx,
                   "detection": det.to_dict(), "chi2_stderr": chi2.stderr,
                   "tv_mc_stderr": tvm.stderr, "lr_sup_p99": p99,
                   "mc_samples": opts["mc_samples"]}
            for label, planted in (("null", None), ("planted", v_idx)):
                try:
                    _, attempts = sample_attachment_graph(
                        spec, planted,
                        child_seed(cfg.master_seed, rep, K,
                                   4 if planted is None else 5),
                        scaffold=scaffold)
                    row[f"mu_attempts_{label}"] = attempts
                except RuntimeError as exc:
                    row[f"mu_error_{label}"] = str(exc)
                    _LOG.warning("rep %d K %d: %s sample rejected: %s",
                                 rep, K, label, exc)
            rows_json.append(row)
            rows_csv.append((K, N, spec.path_len, spec.planted_degree,
                             chi2.value, tvb, tvm.value, p99))
            _LOG.info("hardness rep %d K %d: %.3f s", rep, K,
                      time.perf_counter() - t0)
    out = _ensure_dir(out_dir)
    _append_csv(out / "hardness.csv", HARDNESS_CSV_HEADER, rows_csv)
    results = {"core_size": N, "path_len": spec.path_len,
               "planted_degree": spec.planted_degree, "deg_cap": spec.deg_cap,
               "seed_rule": "streams (master_seed, rep, K, i): i=0 scaffold "
                            "traces, 1 planted leaf, 2 chi2, 3 tv, "
                            "4 null sample, 5 planted sample",
               "rows": rows_json}
    report = ExperimentReport("hardness_sweep", _config_echo(cfg), results)
    write_json_report(out / "report.json", report)
    return report


RUNNERS = {
    "gen_graph": run_gen_graph,
    "simulate": run_simulate,
    "estimate": run_estimate,
    "figure3": run_figure3,
    "recovery_sweep": run_recovery_sweep,
    "hardness_sweep": run_hardness_sweep,
}

"""Ensemble experiment runner and report generators.

run_ensemble drives a list of ansatz configurations over a graph
ensemble: graphs are generated (or loaded from a directory of edge
lists), each (graph, ansatz) pair is optimized with a seed derived
from the master seed, and every result is persisted as its own JSON
file before the aggregate CSV is written. Jobs whose result file
already exists are skipped, so an interrupted run resumes where it
stopped and a finished run is idempotent. All randomness flows from
the master seed through fixed derivation paths (graph index, ansatz
code), so any table row can be re-run on its own and the aggregate
CSV is reproducible byte for byte apart from the wall-clock column.

Reports reduce persisted records to the summary tables: the mean-AR
gap between two ansatz configurations, the share of graphs reaching
an approximation-ratio threshold, mean best-so-far convergence
curves, and the noise/measurement-cost grid.
"""

from __future__ import annotations

import csv
import json
import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import (
    EXHAUSTIVE_LIMIT,
    Graph,
    graph_metadata,
    maxcut_bruteforce,
    maxcut_local_search,
    parse_edge_list,
    random_gnp_connected,
    random_gnp_triangle_stripped,
    random_regular_triangle_free,
    star_graph,
    triangle_count,
    write_edge_list,
)
from .noise import measurement_ratio_grid
from .optimize import OptimizerConfig, optimize_ma_qaoa, optimize_qaoa

AGGREGATE_COLUMNS = ("graph_id", "ansatz", "value", "c_max", "ar",
                     "zero_beta", "zero_gamma", "iterations", "seconds")

# seed-derivation namespaces: SeedSequence([master, NS, ...])
_NS_GRAPH = 0
_NS_CMAX = 1
_NS_OPT = 2


@dataclass
class ExperimentSpec:
    """One ensemble run: where graphs come from, what to optimize.

    ``graphs`` is either a directory of ``*.edges`` files or a
    generator spec string like "regular:n=50,degree=3,count=100"
    (kinds: star, regular, er, gnp). The optimizer config applies to
    every ansatz in the list; runs with per-ansatz seed counts just
    call run_ensemble once per ansatz with the same out_dir, which
    composes through the per-job result files.
    """

    graphs: str
    ansatzes: tuple = ("qaoa:1", "ma")
    backend: str = "statevector"
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    out_dir: str = "runs"
    master_seed: int = 0
    threads: int = 1


@dataclass
class RunRecord:
    spec_hash: str
    version: str
    records: list
    aggregates: list
    seconds: float


def parse_ansatz(label: str) -> tuple[str, int]:
    """"qaoa:2" -> ("qaoa", 2); bare names default to p=1."""
    name, _, ptxt = label.partition(":")
    if name not in ("qaoa", "ma"):
        raise ValueError(f"unknown ansatz {label!r}; use qaoa[:p] or ma[:p]")
    p = int(ptxt) if ptxt else 1
    if p < 1:
        raise ValueError(f"ansatz {label!r}: p must be >= 1")
    return name, p


def _ansatz_code(label: str) -> int:
    name, p = parse_ansatz(label)
    return p if name == "qaoa" else 100 + p


def parse_generator_spec(text: str) -> tuple[str, dict]:
    """Parse "kind:key=value,..." ensemble descriptors.

    Kinds and their parameters:
      star:n=5[,count=1]           stars (count produces identical copies)
      regular:n=50,degree=3,count=100   connected triangle-free regular
      er:n=50,p=0.08,count=100     G(n,p) with triangles stripped
      gnp:n=8,p=0.5,count=100      connected G(n,p), triangles kept
    """
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"{text!r} is neither a directory nor a generator spec")
    raw = {}
    for part in rest.split(","):
        if not part:
            continue
        key, eq, val = part.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {part!r} in {text!r}")
        raw[key] = val
    schemas = {
        "star": {"n": int, "count": int},
        "regular": {"n": int, "degree": int, "count": int},
        "er": {"n": int, "p": float, "count": int},
        "gnp": {"n": int, "p": float, "count": int},
    }
    if kind not in schemas:
        raise ValueError(f"unknown generator kind {kind!r}")
    params = {"count": 1}
    for key, val in raw.items():
        conv = schemas[kind].get(key)
        if conv is None:
            raise ValueError(f"generator {kind!r} does not take {key!r}")
        params[key] = conv(val)
    missing = [k for k in schemas[kind] if k != "count" and k not in params]
    if missing:
        raise ValueError(f"generator {kind!r} missing {missing}")
    return kind, params


def _generate_one(kind: str, params: dict, seed) -> Graph:
    if kind == "star":
        return star_graph(params["n"])
    if kind == "regular":
        return random_regular_triangle_free(params["n"], params["degree"], seed)
    if kind == "er":
        return random_gnp_triangle_stripped(params["n"], params["p"], seed)
    return random_gnp_connected(params["n"], params["p"], seed)


def generate_ensemble(spec_text: str, master_seed: int) -> list[tuple[str, Graph]]:
    """Deterministic (graph_id, Graph) list for a generator spec string."""
    kind, params = parse_generator_spec(spec_text)
    out = []
    for idx in range(params["count"]):
        seed = np.random.SeedSequence([master_seed, _NS_GRAPH, idx])
        g = _generate_one(kind, params, seed)
        out.append((f"{kind}{params['n']}-{idx:04d}", g))
    return out


def load_graph_dir(path: str) -> list[tuple[str, Graph]]:
    """Read every *.edges file in a directory, sorted by filename."""
    names = sorted(f for f in os.listdir(path) if f.endswith(".edges"))
    out = []
    for name in names:
        full = os.path.join(path, name)
        try:
            with open(full) as fh:
                g = parse_edge_list(fh.read())
        except ValueError as err:
            raise ValueError(f"{full}: {err}") from err
        out.append((name[:-len(".edges")], g))
    return out


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _spec_hash(spec: ExperimentSpec) -> str:
    payload = {
        "graphs": spec.graphs,
        "ansatzes": list(spec.ansatzes),
        "backend": spec.backend,
        "optimizer": asdict(spec.optimizer),
        "master_seed": spec.master_seed,
    }
    blob = json.dumps(payload, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _tool_version() -> str:
    from maqaoa import __version__
    return __version__


def _result_path(out_dir: str, graph_id: str, label: str) -> str:
    return os.path.join(out_dir, "results",
                        f"{graph_id}__{label.replace(':', '-')}.json")


def _run_job(payload: dict) -> dict:
    """Optimize one (graph, ansatz) pair and persist its JSON record."""
    g: Graph = payload["graph"]
    label = payload["ansatz"]
    name, p = parse_ansatz(label)
    cfg: OptimizerConfig = payload["cfg"]
    seed_path = [payload["master_seed"], _NS_OPT, payload["graph_idx"],
                 _ansatz_code(label)]
    seed = np.random.SeedSequence(seed_path)
    if name == "ma":
        result = optimize_ma_qaoa(g, cfg, backend=payload["backend"], p=p,
                                  c_max=payload["c_max"], seed=seed)
    else:
        result = optimize_qaoa(g, p, cfg, backend=payload["backend"],
                               c_max=payload["c_max"], seed=seed)
    record = {
        "graph_id": payload["graph_id"],
        "n": g.n,
        "m": g.m,
        "ansatz": label,
        "p": p,
        "backend": payload["backend"],
        "best_value": float(result.best_value),
        "c_max": int(result.c_max),
        "c_max_method": payload["c_max_method"],
        "ar": float(result.approximation_ratio),
        "zero_beta": int(result.zero_beta),
        "zero_gamma": int(result.zero_gamma),
        "seeds": cfg.seeds,
        "best_seed": int(result.best_seed),
        "iterations": int(result.iterations),
        "aborted": int(result.aborted),
        "seconds": float(result.seconds),
        "optimizer_seed": seed_path,
        "angles": {
            "beta": result.best_angles.beta.tolist(),
            "gamma": result.best_angles.gamma.tolist(),
        },
        "traces": (None if result.traces is None
                   else [np.asarray(t).tolist() for t in result.traces]),
    }
    _atomic_write(payload["path"], json.dumps(record))
    return record


def _resolve_graphs(spec: ExperimentSpec) -> list[tuple[str, Graph]]:
    if os.path.isdir(spec.graphs):
        return load_graph_dir(spec.graphs)
    graphs_dir = os.path.join(spec.out_dir, "graphs")
    kind, params = parse_generator_spec(spec.graphs)   # validate early
    if os.path.isdir(graphs_dir) and len(os.listdir(graphs_dir)) >= params["count"]:
        loaded = load_graph_dir(graphs_dir)
        if len(loaded) == params["count"]:
            return loaded
    pairs = generate_ensemble(spec.graphs, spec.master_seed)
    os.makedirs(graphs_dir, exist_ok=True)
    for idx, (gid, g) in enumerate(pairs):
        _atomic_write(os.path.join(graphs_dir, gid + ".edges"), write_edge_list(g))
        meta = graph_metadata(g, seed=[spec.master_seed, _NS_GRAPH, idx],
                              generator=spec.graphs)
        _atomic_write(os.path.join(graphs_dir, gid + ".json"), json.dumps(meta))
    return pairs


def run_ensemble(spec: ExperimentSpec) -> RunRecord:
    """Run every requested ansatz on every ensemble graph; see module doc."""
    t0 = time.perf_counter()
    labels = list(spec.ansatzes)
    for label in labels:
        _, p = parse_ansatz(label)
        if spec.backend == "analytic" and p != 1:
            raise ValueError(f"analytic backend covers p=1 only, got {label!r}")
    pairs = _resolve_graphs(spec)
    if spec.backend == "analytic" and any(parse_ansatz(l)[0] == "ma" for l in labels):
        for gid, g in pairs:
            if triangle_count(g) != 0:
                raise ValueError(
                    f"graph {gid} has triangles; the analytic multi-angle "
                    "backend needs triangle-free graphs"
                )
    os.makedirs(os.path.join(spec.out_dir, "results"), exist_ok=True)

    todo = []
    cmax_cache: dict[int, tuple[int, str]] = {}
    for graph_idx, (gid, g) in enumerate(pairs):
        missing = [l for l in labels
                   if not os.path.exists(_result_path(spec.out_dir, gid, l))]
        if not missing:
            continue
        if graph_idx not in cmax_cache:
            if g.n <= EXHAUSTIVE_LIMIT:
                cmax_cache[graph_idx] = (maxcut_bruteforce(g), "exhaustive")
            else:
                seed = np.random.SeedSequence(
                    [spec.master_seed, _NS_CMAX, graph_idx])
                cmax_cache[graph_idx] = (maxcut_local_search(g, seed=seed),
                                         "local-search")
        c_max, method = cmax_cache[graph_idx]
        for label in missing:
            todo.append({
                "graph_id": gid,
                "graph_idx": graph_idx,
                "graph": g,
                "ansatz": label,
                "backend": spec.backend,
                "cfg": spec.optimizer,
                "master_seed": spec.master_seed,
                "c_max": c_max,
                "c_max_method": method,
                "path": _result_path(spec.out_dir, gid, label),
            })

    if spec.threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            list(pool.map(_run_job, todo))
    else:
        for payload in todo:
            _run_job(payload)

    records = []
    for gid, g in pairs:
        for label in labels:
            path = _result_path(spec.out_dir, gid, label)
            try:
                with open(path) as fh:
                    records.append(json.load(fh))
            except OSError as err:
                raise RuntimeError(f"missing result file {path}: {err}") from err
    aggregates = aggregate_records(records)
    write_aggregate_csv(os.path.join(spec.out_dir, "aggregate.csv"), records)
    run_info = {
        "spec_hash": _spec_hash(spec),
        "version": _tool_version(),
        "graphs": len(pairs),
        "aggregates": aggregates,
    }
    _atomic_write(os.path.join(spec.out_dir, "run.json"),
                  json.dumps(run_info, indent=2))
    return RunRecord(
        spec_hash=run_info["spec_hash"],
        version=run_info["version"],
        records=records,
        aggregates=aggregates,
        seconds=time.perf_counter() - t0,
    )


def aggregate_records(records: list[dict]) -> list[dict]:
    """Per-ansatz mean/std/min/max summary rows (population std)."""
    order = []
    groups: dict[str, list[dict]] = {}
    for r in records:
        if r["ansatz"] not in groups:
            order.append(r["ansatz"])
            groups[r["ansatz"]] = []
        groups[r["ansatz"]].append(r)
    out = []
    for label in order:
        rs = groups[label]
        ars = np.array([r["ar"] for r in rs])
        out.append({
            "ansatz": label,
            "graphs": len(rs),
            "mean_value": float(np.mean([r["best_value"] for r in rs])),
            "mean_ar": float(ars.mean()),
            "std_ar": float(ars.std()),
            "min_ar": float(ars.min()),
            "max_ar": float(ars.max()),
            "mean_zero_beta": float(np.mean([r["zero_beta"] for r in rs])),
            "mean_zero_gamma": float(np.mean([r["zero_gamma"] for r in rs])),
            "mean_iterations": float(np.mean([r["iterations"] for r in rs])),
            "mean_seconds": float(np.mean([r["seconds"] for r in rs])),
        })
    return out


def write_aggregate_csv(path: str, records: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATE_COLUMNS)
        for r in records:
            writer.writerow([r["graph_id"], r["ansatz"], r["best_value"],
                             r["c_max"], r["ar"], r["zero_beta"],
                             r["zero_gamma"], r["iterations"], r["seconds"]])


def write_rows_csv(path: str, rows: list[dict], fieldnames=None) -> None:
    """Generic one-dict-per-row CSV emitter for the report tables."""
    if fieldnames is None:
        if not rows:
            raise ValueError("cannot infer CSV columns from zero rows")
        fieldnames = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


# ---------------------------------------------------------------------------
# report tables
# ---------------------------------------------------------------------------


def report_gap_table(records: list[dict], baseline: str = "qaoa:1",
                     improved: str = "ma") -> dict:
    """Mean ARs of two ansatz configurations and the optimality-gap change.

    The headline number is how much of the remaining gap the improved
    ansatz closes: [(1 - AR_base) - (1 - AR_impr)] / (1 - AR_base),
    reported as a percentage of the baseline gap.
    """
    base = {r["graph_id"]: r for r in records if r["ansatz"] == baseline}
    impr = {r["graph_id"]: r for r in records if r["ansatz"] == improved}
    if not base or not impr:
        raise ValueError(f"need records for both {baseline!r} and {improved!r}")
    if set(base) != set(impr):
        odd = sorted(set(base) ^ set(impr))
        raise ValueError(f"unpaired graph ids between ansatzes: {odd[:5]}")
    mean_b = float(np.mean([r["ar"] for r in base.values()]))
    mean_i = float(np.mean([r["ar"] for r in impr.values()]))
    denom = 1.0 - mean_b
    gap = 0.0 if denom == 0.0 else ((1.0 - mean_b) - (1.0 - mean_i)) / denom * 100.0
    return {
        "baseline": baseline,
        "improved": improved,
        "graphs": len(base),
        "mean_ar_baseline": mean_b,
        "mean_ar_improved": mean_i,
        "delta_ar": mean_i - mean_b,
        "gap_change_percent": gap,
    }


def report_ar_distribution(records: list[dict], thresholds) -> list[dict]:
    """Fraction of graphs with AR >= x, per ansatz, for each threshold x."""
    if not records:
        raise ValueError("no records to summarize")
    order = []
    groups: dict[str, list[float]] = {}
    for r in records:
        if r["ansatz"] not in groups:
            order.append(r["ansatz"])
            groups[r["ansatz"]] = []
        groups[r["ansatz"]].append(r["ar"])
    rows = []
    for label in order:
        ars = np.array(groups[label])
        for x in thresholds:
            rows.append({
                "ansatz": label,
                "threshold": float(x),
                "fraction": float(np.mean(ars >= x)),
            })
    return rows


def report_convergence(records: list[dict]) -> list[dict]:
    """Mean best-so-far AR per optimizer iteration, per ansatz.

    best-so-far because a multi-start run's usable answer after k
    iterations is the best restart so far. Every restart's curve is
    extended by holding its final value, averaged over restarts and
    graphs, and cut at the mean final iteration so the tail is not
    dominated by a few long runs.
    """
    order = []
    groups: dict[str, list] = {}
    for r in records:
        if r.get("traces") is None:
            raise ValueError(
                "records carry no optimizer traces; rerun the ensemble with "
                "trace retention enabled (--traces)"
            )
        if r["ansatz"] not in groups:
            order.append(r["ansatz"])
            groups[r["ansatz"]] = []
        for trace in r["traces"]:
            groups[r["ansatz"]].append(np.maximum.accumulate(trace) / r["c_max"])
    rows = []
    for label in order:
        curves = groups[label]
        finals = [len(c) - 1 for c in curves]
        width = max(finals) + 1
        total = np.zeros(width)
        for c in curves:
            total[:len(c)] += c
            total[len(c):] += c[-1]
        mean_curve = total / len(curves)
        stop = int(round(np.mean(finals)))
        for it in range(stop + 1):
            rows.append({
                "ansatz": label,
                "iteration": it,
                "mean_best_ar": float(mean_curve[it]),
            })
    return rows


def report_fidelity_table(families=None, noise_models=None, depths=None) -> list[dict]:
    """Measurement-cost ratio grid rows (see noise.measurement_ratio_grid)."""
    kwargs = {}
    if families is not None:
        kwargs["families"] = families
    if noise_models is not None:
        kwargs["noise_models"] = noise_models
    if depths is not None:
        kwargs["depths"] = depths
    return measurement_ratio_grid(**kwargs)

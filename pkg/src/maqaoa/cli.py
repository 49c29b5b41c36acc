"""Command-line front end.

Verbs:
  generate   write a graph ensemble to disk
  optimize   optimize one graph, print the result record as JSON
  sweep      run an ensemble experiment (resumable, parallel)
  report     reduce persisted sweep results to summary tables
  fidelity   emit the measurement-cost ratio grid
  validate   cross-check closed forms against the simulator

The output directory for verbs that write files is --out, overridden
by the MAQAOA_OUT environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .analytic import ma_total_expectation_tf, qaoa1_total_expectation
from .angles import random_assignment, shared_assignment
from .graph import (
    EXHAUSTIVE_LIMIT,
    graph_metadata,
    maxcut_bruteforce,
    maxcut_local_search,
    parse_edge_list,
    random_gnp_connected,
    random_gnp_triangle_stripped,
    write_edge_list,
)
from .harness import (
    ExperimentSpec,
    generate_ensemble,
    parse_ansatz,
    report_ar_distribution,
    report_convergence,
    report_fidelity_table,
    report_gap_table,
    run_ensemble,
    write_rows_csv,
)
from .noise import write_ratio_csv
from .optimize import OptimizerConfig, optimize_ma_qaoa, optimize_qaoa
from .statevector import expectation_cut, prepare_state, write_state_dump


def _out_dir(args) -> str:
    return os.environ.get("MAQAOA_OUT") or args.out


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(
        seeds=args.seeds,
        grad_tol=args.grad_tol,
        value_tol=args.value_tol,
        max_iterations=args.max_iterations,
        keep_traces=getattr(args, "traces", False),
    )


def _add_optimizer_flags(sp) -> None:
    sp.add_argument("--seeds", type=int, default=50,
                    help="optimizer restarts per graph (default 50)")
    sp.add_argument("--backend", choices=("analytic", "statevector"),
                    default="statevector")
    sp.add_argument("--master-seed", type=int, default=0)
    sp.add_argument("--grad-tol", type=float, default=1e-6)
    sp.add_argument("--value-tol", type=float, default=1e-10)
    sp.add_argument("--max-iterations", type=int, default=500)
    sp.add_argument("--traces", action="store_true",
                    help="retain per-restart objective traces")


def _cmd_generate(args) -> int:
    out = _out_dir(args)
    graphs_dir = os.path.join(out, "graphs")
    os.makedirs(graphs_dir, exist_ok=True)
    pairs = generate_ensemble(args.graphs, args.master_seed)
    for idx, (gid, g) in enumerate(pairs):
        with open(os.path.join(graphs_dir, gid + ".edges"), "w") as fh:
            fh.write(write_edge_list(g))
        meta = graph_metadata(g, seed=[args.master_seed, 0, idx],
                              generator=args.graphs)
        with open(os.path.join(graphs_dir, gid + ".json"), "w") as fh:
            json.dump(meta, fh)
    print(f"wrote {len(pairs)} graphs to {graphs_dir}")
    return 0


def _cmd_optimize(args) -> int:
    with open(args.graphs) as fh:
        g = parse_edge_list(fh.read())
    name, p = parse_ansatz(args.ansatz)
    cfg = _optimizer_config(args)
    if g.n <= EXHAUSTIVE_LIMIT:
        c_max = maxcut_bruteforce(g)
    else:
        c_max = maxcut_local_search(g, seed=np.random.SeedSequence(
            [args.master_seed, 1]))
    if name == "ma":
        result = optimize_ma_qaoa(g, cfg, backend=args.backend, p=p,
                                  c_max=c_max, seed=args.master_seed)
    else:
        result = optimize_qaoa(g, p, cfg, backend=args.backend,
                               c_max=c_max, seed=args.master_seed)
    record = {
        "graph": args.graphs,
        "n": g.n,
        "m": g.m,
        "ansatz": args.ansatz,
        "best_value": result.best_value,
        "c_max": result.c_max,
        "ar": result.approximation_ratio,
        "zero_beta": result.zero_beta,
        "zero_gamma": result.zero_gamma,
        "seeds": result.seeds,
        "best_seed": result.best_seed,
        "iterations": result.iterations,
        "aborted": result.aborted,
        "seconds": result.seconds,
        "angles": {
            "beta": result.best_angles.beta.tolist(),
            "gamma": result.best_angles.gamma.tolist(),
        },
    }
    if args.dump_state:
        state = prepare_state(g, result.best_angles)
        write_state_dump(args.dump_state, state)
        record["state_dump"] = args.dump_state
        record["state_expectation"] = expectation_cut(state, g)
    print(json.dumps(record, indent=2))
    return 0


def _cmd_sweep(args) -> int:
    spec = ExperimentSpec(
        graphs=args.graphs,
        ansatzes=tuple(args.ansatz or ("qaoa:1", "ma")),
        backend=args.backend,
        optimizer=_optimizer_config(args),
        out_dir=_out_dir(args),
        master_seed=args.master_seed,
        threads=args.threads,
    )
    record = run_ensemble(spec)
    print(f"spec {record.spec_hash}: {len(record.records)} records "
          f"in {record.seconds:.1f}s -> {spec.out_dir}")
    for row in record.aggregates:
        print(f"  {row['ansatz']:8s} graphs={row['graphs']:<4d} "
              f"mean AR={row['mean_ar']:.4f} (std {row['std_ar']:.4f}, "
              f"min {row['min_ar']:.4f}, max {row['max_ar']:.4f})")
    return 0


def _load_records(out_dir: str) -> list[dict]:
    results_dir = os.path.join(out_dir, "results")
    if not os.path.isdir(results_dir):
        raise ValueError(f"no results directory under {out_dir}")
    records = []
    for name in sorted(os.listdir(results_dir)):
        if name.endswith(".json"):
            with open(os.path.join(results_dir, name)) as fh:
                records.append(json.load(fh))
    if not records:
        raise ValueError(f"no result records under {results_dir}")
    return records


def _cmd_report(args) -> int:
    out = _out_dir(args)
    records = _load_records(out)
    if args.table == "gap":
        row = report_gap_table(records, args.baseline, args.improved)
        write_rows_csv(os.path.join(out, "gap.csv"), [row])
        print(json.dumps(row, indent=2))
    elif args.table == "distribution":
        thresholds = [float(t) for t in args.thresholds.split(",")]
        rows = report_ar_distribution(records, thresholds)
        write_rows_csv(os.path.join(out, "distribution.csv"), rows)
        print(f"wrote {len(rows)} rows to {os.path.join(out, 'distribution.csv')}")
    else:
        rows = report_convergence(records)
        write_rows_csv(os.path.join(out, "convergence.csv"), rows)
        print(f"wrote {len(rows)} rows to {os.path.join(out, 'convergence.csv')}")
    return 0


def _cmd_fidelity(args) -> int:
    out = _out_dir(args)
    os.makedirs(out, exist_ok=True)
    rows = report_fidelity_table()
    path = os.path.join(out, "fidelity.csv")
    write_ratio_csv(path, rows)
    for row in rows:
        print(f"  {row['label']:22s} p={row['p']} eps=({row['eps_n']}, "
              f"{row['eps_m']}): ratio {row['ratio']:.6g}")
    print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    rng = np.random.default_rng(args.master_seed)
    worst_tf = worst_p1 = 0.0
    for trial in range(args.trials):
        n = int(rng.integers(4, 9))
        tf = random_gnp_triangle_stripped(n, 0.5, rng)
        general = random_gnp_connected(n, 0.5, rng)
        for _ in range(4):
            a = random_assignment(tf, 1, rng)
            got = ma_total_expectation_tf(tf, a)
            ref = expectation_cut(prepare_state(tf, a), tf)
            worst_tf = max(worst_tf, abs(got - ref))
            gamma, beta = rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi, np.pi)
            got = qaoa1_total_expectation(general, gamma, beta)
            shared = shared_assignment(general, [gamma], [beta])
            ref = expectation_cut(prepare_state(general, shared), general)
            worst_p1 = max(worst_p1, abs(got - ref))
    print(f"multi-angle closed form vs simulator (triangle-free): "
          f"max |diff| = {worst_tf:.3e}")
    print(f"single-layer closed form vs simulator (any graph):    "
          f"max |diff| = {worst_p1:.3e}")
    if max(worst_tf, worst_p1) > 1e-10:
        print("VALIDATION FAILED (tolerance 1e-10)", file=sys.stderr)
        return 1
    print("validation passed (tolerance 1e-10)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maqaoa",
        description="MaxCut QAOA / multi-angle QAOA toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="write a graph ensemble to disk")
    sp.add_argument("--graphs", required=True,
                    help='generator spec, e.g. "regular:n=50,degree=3,count=100"')
    sp.add_argument("--out", default="runs")
    sp.add_argument("--master-seed", type=int, default=0)
    sp.set_defaults(func=_cmd_generate)

    sp = sub.add_parser("optimize", help="optimize one edge-list file")
    sp.add_argument("--graphs", required=True, metavar="FILE",
                    help="edge-list file (one 'u v' pair per line)")
    sp.add_argument("--ansatz", default="ma", help="qaoa[:p] or ma (default ma)")
    sp.add_argument("--dump-state", metavar="FILE",
                    help="write the optimized statevector as raw complex128")
    _add_optimizer_flags(sp)
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("sweep", help="run an ensemble experiment")
    sp.add_argument("--graphs", required=True,
                    help="directory of *.edges files or a generator spec")
    sp.add_argument("--ansatz", action="append",
                    help="repeatable; default qaoa:1 and ma")
    sp.add_argument("--out", default="runs")
    sp.add_argument("--threads", type=int, default=1)
    _add_optimizer_flags(sp)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("report", help="summarize persisted sweep results")
    sp.add_argument("--out", default="runs",
                    help="directory holding results/ from a sweep")
    sp.add_argument("--table", choices=("gap", "distribution", "convergence"),
                    default="gap")
    sp.add_argument("--baseline", default="qaoa:1")
    sp.add_argument("--improved", default="ma")
    sp.add_argument("--thresholds", default="0.5,0.6,0.7,0.8,0.9,0.95,0.99,1.0")
    sp.set_defaults(func=_cmd_report)

    sp = sub.add_parser("fidelity", help="emit the measurement-cost ratio grid")
    sp.add_argument("--out", default="runs")
    sp.set_defaults(func=_cmd_fidelity)

    sp = sub.add_parser("validate",
                        help="cross-check closed forms against the simulator")
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--master-seed", type=int, default=0)
    sp.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: solve columns, run sweeps, generate graphs."""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import gen, graphio, metrics, oracle, plots, solvers
from .graph import CscGraph, laplacian_column_from_exp_column, normalize_to_stochastic

REFERENCE_EPS = 1e-10  # gexpmq tolerance standing in for the oracle on big graphs


def _thread_count() -> int:
    env = os.environ.get("EXPGRAPH_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _load_stochastic(path: str) -> tuple[CscGraph, CscGraph]:
    raw = graphio.read_graph(path)
    return raw, normalize_to_stochastic(raw)


def _run_algorithm(p: CscGraph, alg: str, c: int, args) -> solvers.SolveReport:
    if alg == "gexpm":
        return solvers.gexpm(p, c, args.eps, check_stochastic=False)
    if alg == "gexpmq":
        return solvers.gexpmq(p, c, args.eps, check_stochastic=False)
    if alg == "expmimv":
        return solvers.expmimv(p, c, args.N, args.z)
    raise ValueError(f"unknown algorithm {alg!r}")


def cmd_solve(args) -> int:
    raw, p = _load_stochastic(args.graph)
    if args.alg == "expmimv":
        if args.z is None or args.N is None:
            raise ValueError("expmimv requires --z and --N")
        param = f"z={args.z}"
    else:
        if args.eps is None:
            raise ValueError(f"{args.alg} requires --eps")
        param = f"eps={args.eps:g}"
    report = _run_algorithm(p, args.alg, args.col, args)
    x = report.x
    if args.laplacian:
        x = laplacian_column_from_exp_column(x, raw.out_degree, args.col)
    meta = {
        "graph": Path(args.graph).name,
        "algorithm": report.algorithm,
        "param": param,
        "degree": str(report.taylor_degree),
        "seed-node": str(args.col),
        "laplacian": str(bool(args.laplacian)).lower(),
    }
    graphio.write_solution(x, meta, args.out)
    print(
        f"{report.algorithm} {param} N={report.taylor_degree} "
        f"steps={report.steps} edge_touches={report.edge_touches} "
        f"effective_matvecs={report.effective_matvecs:.4g} "
        f"wallclock={report.wallclock:.4g}s final_tracker={report.final_tracker:.4g}"
    )
    return 0


def _truth_for(p: CscGraph, c: int) -> metrics.VectorLike:
    if p.n <= oracle.NODE_CAP:
        return oracle.dense_taylor_oracle(p, c)
    return solvers.gexpmq(p, c, REFERENCE_EPS, check_stochastic=False).x


def sweep_rows(
    p: CscGraph,
    graph_id: str,
    algs: list[str],
    params: list[tuple[str, float]],
    seeds: list[int],
    k_list: list[int],
    imv_degree: int,
    threads: int,
) -> list[list]:
    """Run the (seed, algorithm, parameter) grid and return CSV rows.

    Trials execute concurrently over the shared read-only graph; rows come
    back merged in deterministic trial order.
    """
    trials = [
        (seed, alg, kind, value)
        for seed in seeds
        for alg in algs
        for kind, value in params
        if (alg == "expmimv") == (kind == "z")
    ]

    truths: dict[int, metrics.VectorLike] = {}

    def run(trial):
        seed, alg, kind, value = trial
        if alg == "gexpm":
            report = solvers.gexpm(p, seed, value, check_stochastic=False)
        elif alg == "gexpmq":
            report = solvers.gexpmq(p, seed, value, check_stochastic=False)
        else:
            report = solvers.expmimv(p, seed, imv_degree, int(value))
        truth = truths[seed]
        rows = [
            [graph_id, seed, alg, value, "one_norm_error",
             metrics.one_norm_error(report.x, truth)],
            [graph_id, seed, alg, value, "effective_matvecs", report.effective_matvecs],
            [graph_id, seed, alg, value, "steps", report.steps],
            [graph_id, seed, alg, value, "wallclock", report.wallclock],
            [graph_id, seed, alg, value, "final_tracker", report.final_tracker],
        ]
        for k in k_list:
            pr = metrics.precision_at_k(
                report.x, truth, k, exclude="seed+neighbors", g=p, c=seed
            )
            rows.append([graph_id, seed, alg, value, f"precision_at_{k}", pr.precision])
        return rows

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for seed, truth in zip(seeds, pool.map(lambda s: _truth_for(p, s), seeds)):
            truths[seed] = truth
        results = list(pool.map(run, trials))
    return [row for rows in results for row in rows]


def cmd_sweep(args) -> int:
    _, p = _load_stochastic(args.graph)
    algs = args.algs.split(",")
    params: list[tuple[str, float]] = []
    if args.eps_list:
        params += [("eps", float(t)) for t in args.eps_list.split(",")]
    if args.z_list:
        params += [("z", float(t)) for t in args.z_list.split(",")]
    if not params:
        raise ValueError("provide --eps-list and/or --z-list")
    for alg in algs:
        if alg not in ("gexpm", "gexpmq", "expmimv"):
            raise ValueError(f"unknown algorithm {alg!r}")
    rng = np.random.default_rng(args.rng)
    seeds = [int(s) for s in rng.choice(p.n, size=min(args.seeds, p.n), replace=False)]
    k_list = [int(t) for t in args.k_list.split(",")] if args.k_list else [100]
    rows = sweep_rows(
        p,
        Path(args.graph).stem,
        algs,
        params,
        seeds,
        k_list,
        args.N,
        _thread_count(),
    )
    metrics.write_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    if args.plot_dir:
        for fig in plots.render_sweep_report(args.out, args.plot_dir):
            print(f"wrote {fig}")
    return 0


def cmd_gen(args) -> int:
    g = gen.forest_fire(gen.ForestFireConfig(args.n, args.p, args.rng))
    graphio.write_smat(g, args.out)
    fit = gen.power_law_check(g)
    print(
        f"n={g.n} nnz={g.nnz} d_max={fit.d_max} d_min={fit.d_min} "
        f"power_law_exponent={fit.exponent:.3f}"
    )
    return 0


def cmd_oracle(args) -> int:
    _, p = _load_stochastic(args.graph)
    truth = oracle.dense_taylor_oracle(p, args.col, args.N)
    x = {int(i): float(truth[i]) for i in np.flatnonzero(truth)}
    meta = {
        "graph": Path(args.graph).name,
        "algorithm": "dense_taylor_oracle",
        "param": f"N={args.N}",
        "seed-node": str(args.col),
    }
    graphio.write_solution(x, meta, args.out)
    print(f"oracle column written to {args.out} ({len(x)} nonzeros)")
    return 0


def cmd_report(args) -> int:
    for fig in plots.render_sweep_report(args.csv, args.out_dir):
        print(f"wrote {fig}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expgraph",
        description="Local estimation of matrix-exponential columns on graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute one column with one algorithm")
    p_solve.add_argument("--graph", required=True)
    p_solve.add_argument("--col", type=int, required=True)
    p_solve.add_argument("--alg", choices=["gexpm", "gexpmq", "expmimv"], required=True)
    p_solve.add_argument("--eps", type=float)
    p_solve.add_argument("--z", type=int)
    p_solve.add_argument("--N", type=int)
    p_solve.add_argument("--out", required=True)
    p_solve.add_argument("--laplacian", action="store_true",
                         help="rescale to the normalized-Laplacian exponential column")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a (seed, algorithm, parameter) grid")
    p_sweep.add_argument("--graph", required=True)
    p_sweep.add_argument("--algs", required=True, help="comma list of algorithms")
    p_sweep.add_argument("--eps-list")
    p_sweep.add_argument("--z-list")
    p_sweep.add_argument("--N", type=int, default=8, help="Taylor degree for expmimv")
    p_sweep.add_argument("--seeds", type=int, required=True)
    p_sweep.add_argument("--rng", type=int, default=0)
    p_sweep.add_argument("--k-list", default="100")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--plot-dir", help="also render figures into this directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("gen", help="generate a forest-fire graph as SMAT")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.add_argument("--rng", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_oracle = sub.add_parser("oracle", help="dense reference column")
    p_oracle.add_argument("--graph", required=True)
    p_oracle.add_argument("--col", type=int, required=True)
    p_oracle.add_argument("--N", type=int, default=oracle.ORACLE_DEGREE)
    p_oracle.add_argument("--out", required=True)
    p_oracle.set_defaults(func=cmd_oracle)

    p_report = sub.add_parser("report", help="render figures from a sweep CSV")
    p_report.add_argument("--csv", required=True)
    p_report.add_argument("--out-dir", required=True)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, IndexError, OSError, solvers.IterationCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``submod maximize|reduce|curvature|brute|imc-bench``.

Exit codes: 0 on success, 2 on configuration or input errors, 3 when a
solver breaks its contract or fails to terminate.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .baselines import modmod
from .brute import brute_force_max
from .combiners import COMBINERS, get_combiner
from .core import curvature
from .greedy import knapsack_psi_greedy, psi_greedy
from .harness import ConfigError, ExperimentConfig, emit_outputs, run_experiment, summarize
from .instances import load_instance
from .reductions import (
    SolverFault,
    brute_force_solver,
    difference_from_ratio,
    dinkelbach_ratio,
    greedy_solver,
    ratio_from_difference,
)

logger = logging.getLogger("submod")

EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=float)
    sys.stdout.write("\n")


def cmd_maximize(args) -> None:
    f, g = load_instance(args.instance)
    psi = get_combiner(args.psi)
    algo = args.algo or ("knapsack" if args.budget is not None else "greedy")
    out = {"algorithm": algo}
    if algo == "modmod":
        res = modmod(f, g, args.seed, args.max_iters)
        S = res.selected
        out["iterations"] = res.iterations
        out["converged"] = res.converged
        out["trace"] = res.to_dict()["objectives"]
        psi = get_combiner("diff")
    elif algo == "knapsack":
        if args.budget is None or args.eps is None:
            raise ConfigError("the knapsack variant needs --budget and --eps")
        if f.n > 40:
            logger.warning("knapsack greedy runs O(n^3) greedy completions per level; n = %d is slow", f.n)
        res = knapsack_psi_greedy(f, g, psi, args.budget, args.eps, lazy=args.lazy)
        S = res.selected
        out["trace"] = res.to_dict()
    else:
        S, trace = psi_greedy(f, g, psi, lazy=args.lazy)
        out["trace"] = trace.to_dict()
    fv, gv = f.peek(S), g.peek(S)
    out.update(
        selected=S.elements(),
        psi=psi(fv, gv),
        psi_name=psi.name,
        f=fv,
        g=gv,
        oracle_calls={"f": f.eval_count, "g": g.eval_count},
    )
    _emit(out)


def _inner_solver(name, kind, alpha, lazy):
    if name == "brute":
        return brute_force_solver(kind, alpha)
    if name == "greedy":
        return greedy_solver(kind, alpha, lazy)
    raise ConfigError(f"unknown inner solver {name!r}; choose brute or greedy")


def cmd_reduce(args) -> None:
    f, g = load_instance(args.instance)
    if (args.source, args.target) == ("ratio", "diff"):
        solver = _inner_solver(args.inner, "ratio", args.alpha, args.lazy)
        res = difference_from_ratio(solver, f, g, args.eps)
    elif (args.source, args.target) == ("diff", "ratio"):
        solver = _inner_solver(args.inner, "diff", args.alpha, args.lazy)
        if args.method == "dinkelbach":
            res = dinkelbach_ratio(solver, f, g, eps=args.eps)
        else:
            res = ratio_from_difference(solver, f, g, args.eps)
    else:
        raise ConfigError("--from and --to must be 'ratio' and 'diff' in some order")
    out = res.to_dict()
    out.update(inner=solver.name, alpha=solver.alpha, eps=args.eps)
    _emit(out)


def cmd_curvature(args) -> None:
    f, g = load_instance(args.instance)
    fn = f if args.which == "f" else g
    _emit({"function": args.which, "curvature": curvature(fn), "oracle_calls": fn.eval_count})


def cmd_brute(args) -> None:
    f, g = load_instance(args.instance)
    psi = get_combiner(args.psi)
    S, val = brute_force_max(f, g, psi, args.budget)
    _emit({"selected": S.elements(), "psi": val, "psi_name": psi.name, "f": f.peek(S), "g": g.peek(S)})


_BENCH_FLAGS = [
    ("edge_list", str, "edge-list file replacing the synthetic graph"),
    ("n", int, "synthetic graph size"),
    ("p", float, "synthetic edge probability"),
    ("weight_lo", float, "lower bound of edge weights"),
    ("weight_hi", float, "upper bound of edge weights"),
    ("T", int, "number of live-edge graphs"),
    ("cost_lo", float, "lower bound of vertex costs"),
    ("cost_hi", float, "upper bound of vertex costs"),
    ("lambdas", str, "comma-separated cost scales"),
    ("runs", int, "runs per lambda"),
    ("seed", int, "master seed (overrides SUBMOD_SEED)"),
    ("algorithms", str, "comma-separated subset of greedy,modmod"),
    ("max_iters", int, "ModMod iteration cap"),
    ("workers", int, "parallel worker processes"),
    ("output_dir", str, "directory for CSV/SVG outputs"),
]


def bench_config(args) -> ExperimentConfig:
    """Merge config file < SUBMOD_SEED < command-line flags."""
    values = ExperimentConfig.read_file(args.config) if args.config else {}
    env_seed = os.environ.get("SUBMOD_SEED")
    if env_seed is not None:
        values["seed"] = env_seed
    for name, _, _ in _BENCH_FLAGS:
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    if args.undirected:
        values["undirected"] = True
    if args.eager:
        values["lazy"] = False
    return ExperimentConfig.from_dict(values)


def cmd_imc_bench(args) -> None:
    config = bench_config(args)
    records = run_experiment(config)
    paths = emit_outputs(records, config.output_dir)
    pairs = {}
    for r in records:
        pairs.setdefault((r.lam, r.seed), {})[r.algorithm] = r.objective
    both = [c for c in pairs.values() if {"greedy", "modmod"} <= set(c)]
    out = {
        "records": len(records),
        "failures": sum(1 for r in records if r.error),
        "outputs": {k: str(v) for k, v in paths.items()},
        "summary": summarize(records),
    }
    if both:
        out["greedy_at_least_modmod"] = sum(c["greedy"] >= c["modmod"] for c in both) / len(both)
    _emit(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submod", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    psi_names = sorted(COMBINERS)

    p = sub.add_parser("maximize", help="maximise psi(f, g) on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--psi", choices=psi_names, default="diff")
    p.add_argument("--algo", choices=["greedy", "knapsack", "modmod"])
    p.add_argument("--lazy", action="store_true")
    p.add_argument("--budget", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iters", type=int, default=100)
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("reduce", help="bisection reductions between ratio and difference")
    p.add_argument("--instance", required=True)
    p.add_argument("--from", dest="source", choices=["ratio", "diff"], required=True)
    p.add_argument("--to", dest="target", choices=["ratio", "diff"], required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--inner", default="brute")
    p.add_argument("--method", choices=["bisection", "dinkelbach"], default="bisection")
    p.add_argument("--lazy", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("curvature", help="total curvature of f or g")
    p.add_argument("--instance", required=True)
    p.add_argument("--which", choices=["f", "g"], default="g")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("brute", help="exhaustive optimum (n <= 24)")
    p.add_argument("--instance", required=True)
    p.add_argument("--psi", choices=psi_names, default="diff")
    p.add_argument("--budget", type=float)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("imc-bench", help="Greedy vs ModMod on influence-with-costs instances")
    p.add_argument("--config", help="key = value config file (flags win)")
    for name, typ, help_ in _BENCH_FLAGS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, help=help_)
    p.add_argument("--undirected", action="store_true", help="treat edge-list edges as undirected")
    p.add_argument("--eager", action="store_true", help="disable lazy evaluations in greedy")
    p.set_defaults(func=cmd_imc_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except SolverFault as exc:
        print(f"submod: solver fault: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError) as exc:
        print(f"submod: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())

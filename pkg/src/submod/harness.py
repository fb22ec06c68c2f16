"""Seeded Greedy-vs-ModMod experiments on influence-with-costs instances."""

from __future__ import annotations

import csv
import dataclasses
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import modmod
from .greedy import psi_greedy
from .influence import CascadeInstance, erdos_renyi_digraph, load_edge_list

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunRecord",
    "ALGORITHMS",
    "run_seed",
    "build_instance",
    "run_experiment",
    "audit_records",
    "quartiles",
    "summarize",
    "emit_outputs",
]

logger = logging.getLogger(__name__)

ALGORITHMS = ("greedy", "modmod")


class ConfigError(ValueError):
    pass


def _parse_list(value, cast):
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    return tuple(cast(v) for v in value)


def _parse_bool(value):
    if isinstance(value, bool):
        return value
    s = str(value).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


@dataclass
class ExperimentConfig:
    """Experiment settings. Defaults follow the desk-scale synthetic setup."""

    edge_list: str | None = None
    undirected: bool = False
    n: int = 50
    p: float = 0.08
    weight_lo: float = 0.0
    weight_hi: float = 0.1
    T: int = 10
    cost_lo: float = 0.0
    cost_hi: float = 1.0
    lambdas: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)
    runs: int = 50
    seed: int = 0
    algorithms: tuple = ALGORITHMS
    lazy: bool = True
    max_iters: int = 100
    workers: int = 1
    output_dir: str = "results"

    _casts = {
        "edge_list": lambda v: None if v in (None, "", "none", "None") else str(v),
        "undirected": _parse_bool,
        "n": int,
        "p": float,
        "weight_lo": float,
        "weight_hi": float,
        "T": int,
        "cost_lo": float,
        "cost_hi": float,
        "lambdas": lambda v: _parse_list(v, float),
        "runs": int,
        "seed": int,
        "algorithms": lambda v: _parse_list(v, str),
        "lazy": _parse_bool,
        "max_iters": int,
        "workers": int,
        "output_dir": str,
    }

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if not 0 <= self.weight_lo <= self.weight_hi <= 1:
            raise ConfigError(f"weight range [{self.weight_lo}, {self.weight_hi}] must lie within [0, 1]")
        if not 0 <= self.cost_lo <= self.cost_hi:
            raise ConfigError("cost range must be non-negative and ordered")
        if self.T < 1:
            raise ConfigError("T must be at least 1")
        if self.edge_list is None and (self.n < 1 or not 0 <= self.p <= 1):
            raise ConfigError("synthetic graphs need n >= 1 and 0 <= p <= 1")
        if not self.lambdas or any(lam < 0 for lam in self.lambdas):
            raise ConfigError("lambdas must be a non-empty list of non-negative values")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if not self.algorithms or unknown:
            raise ConfigError(f"unknown algorithms {sorted(unknown)}; choose from {list(ALGORITHMS)}")
        if self.max_iters < 1 or self.workers < 1:
            raise ConfigError("max_iters and workers must be at least 1")

    @classmethod
    def fields(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambdas"] = list(self.lambdas)
        d["algorithms"] = list(self.algorithms)
        return d

    @classmethod
    def from_dict(cls, d) -> "ExperimentConfig":
        unknown = set(d) - set(cls.fields())
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            kwargs = {k: cls._casts[k](v) for k, v in d.items()}
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return cls(**kwargs)

    @staticmethod
    def read_file(path) -> dict:
        """Parse ``key = value`` lines (``#`` comments, lists comma-separated)."""
        out = {}
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for lineno, line in enumerate(lines, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip()] = value.strip()
        return out

    def write_file(self, path) -> None:
        lines = []
        for k, v in self.to_dict().items():
            if isinstance(v, list):
                v = ", ".join(str(x) for x in v)
            lines.append(f"{k} = {'' if v is None else v}")
        Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class RunRecord:
    lam: float
    run: int
    seed: int
    algorithm: str
    objective: float
    size: int
    oracle_calls: int
    wall_time: float
    selected: list[int] = field(default_factory=list)
    error: str = ""

    def sort_key(self):
        return (self.lam, self.seed, self.algorithm)


def run_seed(master: int, lambda_index: int, run: int) -> int:
    """Per-run seed mixed from the master seed and the run coordinates."""
    return int(np.random.SeedSequence([master, lambda_index, run]).generate_state(1, np.uint64)[0])


def _base_graph(config: ExperimentConfig):
    if config.edge_list is not None:
        try:
            graph, _ = load_edge_list(config.edge_list, config.undirected)
        except OSError as exc:
            raise ConfigError(f"cannot read edge list {config.edge_list}: {exc}") from exc
        return graph
    # one fixed graph per master seed, like a fixed social network
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 2**32 - 1]))
    return erdos_renyi_digraph(config.n, config.p, rng)


def build_instance(config: ExperimentConfig, lambda_index: int, run: int, graph=None) -> CascadeInstance:
    """Reconstruct the instance of one ``(lambda, run)`` cell."""
    graph = _base_graph(config) if graph is None else graph
    seed = run_seed(config.seed, lambda_index, run)
    rng = np.random.default_rng(seed)
    weights = rng.uniform(config.weight_lo, config.weight_hi, graph.n_edges)
    costs = rng.uniform(config.cost_lo, config.cost_hi, graph.n_vertices)
    live_seed = int(rng.integers(2**63))
    return CascadeInstance.generate(graph, weights, config.T, costs, config.lambdas[lambda_index], live_seed)


def _run_cell(args) -> list[RunRecord]:
    config, lambda_index, run, graph = args
    seed = run_seed(config.seed, lambda_index, run)
    inst = build_instance(config, lambda_index, run, graph)
    f = inst.spread_function()
    g = inst.cost_function()
    records = []
    for algo in config.algorithms:
        f.reset_count()
        g.reset_count()
        t0 = time.perf_counter()
        try:
            if algo == "greedy":
                S, _ = psi_greedy(f, g, "diff", lazy=config.lazy)
            else:
                S = modmod(f, g, np.random.default_rng([seed, 1]), config.max_iters).selected
            err = ""
        except Exception as exc:  # recorded, not fatal
            logger.warning("run lambda=%s seed=%s %s failed: %s", inst.lam, seed, algo, exc)
            S, err = None, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - t0
        calls = f.eval_count + g.eval_count
        if S is None:
            rec = RunRecord(inst.lam, run, seed, algo, math.nan, 0, calls, elapsed, [], err)
        else:
            obj = f.peek(S) - g.peek(S)
            rec = RunRecord(inst.lam, run, seed, algo, obj, len(S), calls, elapsed, S.elements())
        records.append(rec)
    return records


def run_experiment(config: ExperimentConfig) -> list[RunRecord]:
    """Run every configured algorithm on every ``(lambda, run)`` cell.

    Results are sorted by ``(lambda, seed, algorithm)`` whatever the worker
    count, and depend only on the config (wall times aside).
    """
    config.validate()
    graph = _base_graph(config)
    tasks = [(config, li, r, graph) for li in range(len(config.lambdas)) for r in range(config.runs)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=RunRecord.sort_key)
    return records


def audit_records(records, config: ExperimentConfig, tol: float = 1e-9) -> list[RunRecord]:
    """Records whose stored objective does not match a fresh re-evaluation."""
    graph = _base_graph(config)
    index = {lam: i for i, lam in enumerate(config.lambdas)}
    bad = []
    cache = {}
    for rec in records:
        if rec.error:
            continue
        key = (rec.lam, rec.run)
        if key not in cache:
            inst = build_instance(config, index[rec.lam], rec.run, graph)
            cache = {key: (inst.spread_function(), inst.cost_function())}
        f, g = cache[key]
        if abs(f(rec.selected) - g(rec.selected) - rec.objective) > tol:
            bad.append(rec)
    return bad


def quartiles(values) -> tuple[float, float, float]:
    """``(Q1, median, Q3)`` with piecewise-linear interpolation at ``(k - 0.5)/n``.

    For ``[1, 2, 3, 4]`` this gives ``(1.5, 2.5, 3.5)``.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no values")
    q1, med, q3 = np.quantile(values, [0.25, 0.5, 0.75], method="hazen")
    return float(q1), float(med), float(q3)


def summarize(records) -> list[dict]:
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        if not rec.error:
            groups.setdefault((rec.lam, rec.algorithm), []).append(rec)
    rows = []
    for (lam, algo), recs in sorted(groups.items()):
        obj = [r.objective for r in recs]
        tim = [r.wall_time for r in recs]
        oq = quartiles(obj)
        tq = quartiles(tim)
        rows.append(
            {
                "lambda": lam,
                "algorithm": algo,
                "count": len(recs),
                "objective_mean": float(np.mean(obj)),
                "objective_q1": oq[0],
                "objective_median": oq[1],
                "objective_q3": oq[2],
                "time_mean": float(np.mean(tim)),
                "time_q1": tq[0],
                "time_median": tq[1],
                "time_q3": tq[2],
            }
        )
    return rows


RECORD_FIELDS = ["lambda", "run", "seed", "algorithm", "objective", "size", "oracle_calls", "selected", "error"]


def emit_outputs(records, out_dir) -> dict[str, Path]:
    """Write ``records.csv``, ``timings.csv``, ``summary.csv`` and ``summary.svg``.

    ``records.csv`` holds no timing column, so identical configs produce
    byte-identical files; wall times go to ``timings.csv``.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    paths = {name: out / name for name in ("records.csv", "timings.csv", "summary.csv", "summary.svg")}

    with open(paths["records.csv"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        for r in records:
            sel = " ".join(map(str, r.selected))
            w.writerow([repr(r.lam), r.run, r.seed, r.algorithm, repr(r.objective), r.size, r.oracle_calls, sel, r.error])

    with open(paths["timings.csv"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "run", "seed", "algorithm", "wall_time"])
        for r in records:
            w.writerow([repr(r.lam), r.run, r.seed, r.algorithm, repr(r.wall_time)])

    rows = summarize(records)
    with open(paths["summary.csv"], "w", newline="") as fh:
        if rows:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)

    _plot_summary(records, paths["summary.svg"])
    return paths


def _plot_summary(records, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lams = sorted({r.lam for r in records})
    algos = sorted({r.algorithm for r in records})
    fig, (ax_obj, ax_time) = plt.subplots(1, 2, figsize=(10, 4))
    width = 0.8 / max(1, len(algos))
    for j, algo in enumerate(algos):
        data = [[r.objective for r in records if r.lam == lam and r.algorithm == algo and not r.error] for lam in lams]
        pos = [i + (j - (len(algos) - 1) / 2) * width for i in range(len(lams))]
        keep = [(p, d) for p, d in zip(pos, data) if d]
        if keep:
            bp = ax_obj.boxplot([d for _, d in keep], positions=[p for p, _ in keep], widths=width * 0.9,
                                showmeans=True, meanprops={"marker": "+"}, patch_artist=True)
            for box in bp["boxes"]:
                box.set_facecolor(f"C{j}")
            ax_obj.plot([], [], color=f"C{j}", label=algo)
    ax_obj.set_xticks(range(len(lams)), [f"{lam:g}" for lam in lams])
    ax_obj.set_xlabel("lambda")
    ax_obj.set_ylabel("f(S) - g(S)")
    ax_obj.legend()

    if {"greedy", "modmod"} <= set(algos):
        by_cell = {}
        for r in records:
            by_cell.setdefault((r.lam, r.seed), {})[r.algorithm] = r.wall_time
        diffs = [[c["greedy"] - c["modmod"] for (lam, _), c in by_cell.items() if lam == L and len(c) >= 2] for L in lams]
        ax_time.boxplot([d or [0.0] for d in diffs], positions=range(len(lams)), showmeans=True, meanprops={"marker": "+"})
        ax_time.set_xticks(range(len(lams)), [f"{lam:g}" for lam in lams])
        ax_time.set_ylabel("time greedy - time modmod (s)")
    else:
        ax_time.set_axis_off()
    ax_time.set_xlabel("lambda")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)

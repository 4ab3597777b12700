"""Seeded benchmark trials with median aggregation and scaling fits.

One trial = one (algorithm, graph, function, seed) solve. Seeds derive
from a base seed through sha256 so runs are reproducible and trials are
independent; the same derived seed is shared by every algorithm at a
given (size, trial) slot, so algorithms face identical functions and
the comparison is paired. Aggregates use medians, never means: single
unlucky restarts otherwise dominate small trial counts.
"""

from __future__ import annotations

import hashlib
import math
import statistics
import time
from concurrent import futures
from dataclasses import dataclass

from .graphs import GraphError, GraphFamily, Grid, grid, hypercube, line
from .clocked import hypercube_instance
from .gridwalks import grid_walk_integer
from .solvers import ALGORITHMS, SolverConfig, solve

CSV_COLUMNS = ("algo", "graph", "n", "d", "seed", "value_queries",
               "membership_queries", "charged_cost", "descent_len",
               "is_local_min", "wall_ms")

FN_KINDS = ("adversarial", "random", "constant", "ramp")

MIN_TRIALS_FOR_FIT = 5


def trial_seed(seed_base: int, idx: int) -> int:
    """Derived seed: the first 8 bytes of sha256("{base}:{idx}"),
    big-endian. Stable across platforms and process counts."""
    digest = hashlib.sha256(f"{seed_base}:{idx}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def build_graph(kind: str, n: int, d: int) -> GraphFamily:
    if kind == "line":
        if d != 1:
            raise GraphError(f"line graphs have d=1, got d={d}")
        return line(n)
    if kind == "grid":
        return grid(n, d)
    if kind == "hypercube":
        if n != 2:
            raise GraphError(f"hypercube trials use side 2, got n={n}")
        return hypercube(2, d)
    raise GraphError(f"unknown graph kind {kind!r}")


def parse_graph_spec(spec: str) -> tuple:
    """"grid:n=64,d=2", "line:n=1024", "hypercube:n=10" -> (kind, n, d).

    Bare positional numbers ("grid:64,2") work too. A hypercube's n
    names its dimension; the returned triple carries side 2 for it.
    """
    kind, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise GraphError(f"graph spec {spec!r} needs kind:params")
    named = {}
    positional = []
    for part in rest.split(","):
        key, eq, val = part.partition("=")
        try:
            if eq:
                named[key.strip()] = int(val)
            else:
                positional.append(int(part))
        except ValueError:
            raise GraphError(f"graph spec {spec!r} has a non-integer "
                             f"parameter {part!r}")
    if named and positional:
        raise GraphError(f"graph spec {spec!r} mixes named and positional "
                         f"parameters")

    def take(*keys):
        if named:
            if set(named) != set(keys):
                raise GraphError(f"graph spec {spec!r}: {kind} takes "
                                 f"parameters {', '.join(keys)}")
            return [named[k] for k in keys]
        if len(positional) != len(keys):
            raise GraphError(f"graph spec {spec!r}: {kind} takes "
                             f"{len(keys)} parameter(s)")
        return positional

    if kind == "line":
        (n,) = take("n")
        return ("line", n, 1)
    if kind == "grid":
        n, d = take("n", "d")
        return ("grid", n, d)
    if kind == "hypercube":
        (dim,) = take("n")
        return ("hypercube", 2, dim)
    raise GraphError(f"unknown graph kind {kind!r}; use line, grid, "
                     f"or hypercube")


def make_function(g: GraphFamily, fn_kind: str, seed: int):
    """Build the value function a trial solves.

    random: a seeded injective relabeling of the vertex ranks.
    adversarial: the clocked hard instance matching the family, when one
    exists (grids of dimension >= 2, hypercubes of dimension >= 4);
    lines and tiny cubes fall back to the ramp, the worst plain-descent
    case available without a clock factor.
    """
    if fn_kind == "constant":
        return lambda v: 0
    if fn_kind == "ramp":
        return lambda v: sum(v)
    if fn_kind == "random":
        import random as _random

        rng = _random.Random(seed)
        ranks = list(range(g.vertex_count))
        rng.shuffle(ranks)
        table = {v: ranks[i] for i, v in enumerate(g.vertices())}
        return table.__getitem__
    if fn_kind == "adversarial":
        if isinstance(g, Grid) and g.kind == "grid" and g.d >= 2:
            return grid_walk_integer(g.n, g.d, 1, seed).eval_fx
        if isinstance(g, Grid) and g.kind == "hypercube" and g.d >= 4:
            return hypercube_instance(g.d, "randomized", seed).eval_fx
        return lambda v: sum(v)
    raise GraphError(f"unknown function kind {fn_kind!r}; "
                     f"choose from {FN_KINDS}")


@dataclass(frozen=True)
class TrialSpec:
    algo: str
    graph_kind: str
    n: int
    d: int
    fn_kind: str
    seed: int


@dataclass
class TrialResult:
    algo: str
    graph: str
    n: int
    d: int
    seed: int
    value_queries: int
    membership_queries: int
    charged_cost: int
    descent_len: int
    is_local_min: bool
    wall_ms: float

    def row(self) -> list:
        return [self.algo, self.graph, self.n, self.d, self.seed,
                self.value_queries, self.membership_queries,
                self.charged_cost, self.descent_len,
                "true" if self.is_local_min else "false",
                f"{self.wall_ms:.3f}"]


def run_trial(spec: TrialSpec) -> TrialResult:
    g = build_graph(spec.graph_kind, spec.n, spec.d)
    fn = make_function(g, spec.fn_kind, spec.seed)
    cfg = SolverConfig(algorithm=spec.algo, seed=spec.seed)
    t0 = time.perf_counter()
    report = solve(g, fn, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    led = report.ledger
    return TrialResult(spec.algo, spec.graph_kind, spec.n, spec.d,
                       spec.seed, led.value_queries,
                       led.membership_queries, led.charged_cost,
                       report.descent_length, report.is_local_min,
                       wall_ms)


@dataclass
class BenchConfig:
    graph_kind: str
    sizes: tuple
    d: int
    algorithms: tuple
    fn_kind: str = "random"
    trials: int = 25
    seed_base: int = 0
    jobs: int = 1

    def __post_init__(self):
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise GraphError(f"unknown algorithm {a!r}")
        if self.fn_kind not in FN_KINDS:
            raise GraphError(f"unknown function kind {self.fn_kind!r}")
        if self.trials < 1 or self.jobs < 1:
            raise GraphError("trials and jobs must be >= 1")


def trial_specs(cfg: BenchConfig) -> list:
    """Expand a config into the full trial list. The seed index runs over
    (size, trial) slots only, so every algorithm sees the same function
    at a slot. Hypercube sizes name dimensions; other sizes name sides."""
    specs = []
    for size_i, size in enumerate(cfg.sizes):
        n, d = (2, size) if cfg.graph_kind == "hypercube" else (size, cfg.d)
        for t in range(cfg.trials):
            seed = trial_seed(cfg.seed_base, size_i * cfg.trials + t)
            for algo in cfg.algorithms:
                specs.append(TrialSpec(algo, cfg.graph_kind, n, d,
                                       cfg.fn_kind, seed))
    return specs


@dataclass
class GroupSummary:
    algo: str
    n: int
    d: int
    size: int
    trials: int
    median_cost: float
    q1_cost: float
    q3_cost: float
    success_rate: float
    median_descent: float


def summarize(rows: list) -> list:
    groups = {}
    for r in rows:
        groups.setdefault((r.algo, r.n, r.d), []).append(r)
    out = []
    for (algo, n, d) in sorted(groups, key=lambda k: (k[0], k[1], k[2])):
        rs = groups[(algo, n, d)]
        costs = sorted(r.charged_cost for r in rs)
        if len(costs) >= 2:
            q1, _, q3 = statistics.quantiles(costs, n=4, method="inclusive")
        else:
            q1 = q3 = float(costs[0])
        # hypercubes scale in dimension at fixed side 2; everything else
        # scales in side length
        size = d if rs[0].graph == "hypercube" else n
        out.append(GroupSummary(
            algo=algo, n=n, d=d, size=size, trials=len(rs),
            median_cost=float(statistics.median(costs)),
            q1_cost=float(q1), q3_cost=float(q3),
            success_rate=sum(r.is_local_min for r in rs) / len(rs),
            median_descent=float(statistics.median(
                sorted(r.descent_len for r in rs))),
        ))
    return out


def scaling_slope(summaries: list, algo: str) -> float:
    """Least-squares slope of log(median cost) against log(size), using
    only sizes backed by at least MIN_TRIALS_FOR_FIT trials. None when
    fewer than two sizes qualify."""
    pts = [(s.size, s.median_cost) for s in summaries
           if s.algo == algo and s.trials >= MIN_TRIALS_FOR_FIT
           and s.median_cost > 0]
    if len(pts) < 2:
        return None
    import numpy as np

    xs = np.log([p[0] for p in pts])
    ys = np.log([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list
    summaries: list
    slopes: dict

    def to_json(self) -> dict:
        return {
            "config": {
                "graph_kind": self.config.graph_kind,
                "sizes": list(self.config.sizes),
                "d": self.config.d,
                "algorithms": list(self.config.algorithms),
                "fn_kind": self.config.fn_kind,
                "trials": self.config.trials,
                "seed_base": self.config.seed_base,
            },
            "slopes": self.slopes,
            "summaries": [vars(s) for s in self.summaries],
            "rows": [dict(zip(CSV_COLUMNS, r.row())) for r in self.rows],
        }


def run_bench(cfg: BenchConfig) -> BenchReport:
    specs = trial_specs(cfg)
    if cfg.jobs > 1:
        chunk = max(1, math.ceil(len(specs) / (cfg.jobs * 4)))
        with futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(run_trial, specs, chunksize=chunk))
    else:
        rows = [run_trial(s) for s in specs]
    summaries = summarize(rows)
    slopes = {}
    for algo in cfg.algorithms:
        slopes[algo] = scaling_slope(summaries, algo)
    return BenchReport(cfg, rows, summaries, slopes)


def write_csv(rows: list, fh) -> None:
    import csv

    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(r.row())

"""Command-line front end.

Subcommands: gen (write a hard instance), solve (run one solver trial),
walk (export exact walk tables and profiles), verify (check an instance
file), bench (scaling runs with medians and log-log fits).

Exit codes: 0 success, 1 verification failure, 2 usage error. The
LSQ_BUDGET environment variable caps exact-table sizes; overruns on walk
exports degrade to partial output with a warning on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .analysis import (
    BudgetError,
    bound_estimate,
    line_walk_dp,
    parity_closed_form,
    parity_dp,
    pt_profile,
    reflection_check,
)
from .bench import (
    CSV_COLUMNS,
    FN_KINDS,
    BenchConfig,
    build_graph,
    make_function,
    parse_graph_spec,
    run_bench,
    write_csv,
)
from .clocked import (
    PathInstance,
    full_flip_walk,
    generate_walk,
    hypercube_decomposition,
    reduce_query,
)
from .graphs import GraphError, Grid, Product, hypercube
from .gridwalks import (
    BlockThreadedInstance,
    GridWalkConfig,
    TwoDWalkInstance,
    block_preset_r,
    block_threaded_walk,
    grid_walk_integer,
    reduce_query_block,
    valid_walk2d_n,
    walk2d_improved,
)
from .instances import (
    instance_summary,
    load_instance,
    save_instance,
    verify_instance,
)
from .oracle import CountingOracle, QueryLedger
from .solvers import ALGORITHMS, SolverConfig, solve


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _emit(data: dict, rows: list, header: list, args) -> None:
    """Write `rows` (csv) or `data` (json) to --out or stdout."""
    if args.format == "csv":
        if args.out:
            with open(args.out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(header)
                w.writerows(rows)
        else:
            w = csv.writer(sys.stdout)
            w.writerow(header)
            w.writerows(rows)
    else:
        text = json.dumps(data, indent=2, sort_keys=True)
        if args.out:
            Path(args.out).write_text(text + "\n")
        else:
            print(text)


def _parse_vertex(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise GraphError(f"vertex {text!r} must be comma-separated integers")


def _random_vertex(g, rng) -> tuple:
    if isinstance(g, Grid):
        return tuple(rng.randint(1, g.n) for _ in range(g.d))
    if isinstance(g, Product):
        return sum((_random_vertex(f, rng) for f in g.factors), ())
    verts = list(g.vertices())
    return verts[rng.randrange(len(verts))]


def _graph_fields(g) -> tuple:
    """(kind, n, d) columns for reports; products report their first
    factor's side."""
    if isinstance(g, Grid):
        return (g.kind, g.n, g.d)
    if isinstance(g, Product):
        side = g.factors[0].n if isinstance(g.factors[0], Grid) else 0
        return ("product", side, g.dimension)
    return (getattr(g, "kind", "graph"), 0, g.dimension)


# ---------------------------------------------------------------------------
# gen


def _parse_gen_spec(text: str) -> tuple:
    """"product:m=1", "product:randomized", "block:r=1/2", "block:quantum",
    "2d-improved" -> (kind, options)."""
    kind, _, rest = text.partition(":")
    opts = {}
    for tok in rest.split(","):
        tok = tok.strip()
        if not tok:
            continue
        key, eq, val = tok.partition("=")
        if eq:
            opts[key.strip()] = val.strip()
        elif tok in ("randomized", "quantum"):
            opts["mode"] = tok
        elif "/" in tok:
            opts["r"] = tok
        else:
            opts["m"] = tok
    return kind, opts


def _generate(graph_spec: str, gen_spec: str, seed: int):
    """Build the requested instance; returns (instance, preset string)."""
    kind, n, d = parse_graph_spec(graph_spec)
    gen_kind, opts = _parse_gen_spec(gen_spec)
    if gen_kind == "product":
        if kind == "grid":
            if "m" not in opts:
                raise GraphError("product generator on a grid needs m=")
            m = int(opts["m"])
            if not 1 <= m < d:
                raise GraphError(f"need 1 <= m < d, got m={m}, d={d}")
            return grid_walk_integer(n, d, m, seed), f"product:m={m}"
        if kind == "hypercube":
            if "m" in opts:
                m = int(opts["m"])
                if not 1 <= m < d:
                    raise GraphError(f"need 1 <= m < d, got m={m}, d={d}")
                T = (2 ** (d - m) - 1) // 2
                inst = generate_walk(hypercube(2, m), hypercube(2, d - m),
                                     full_flip_walk(m), T, seed)
                return inst, f"product:m={m}"
            mode = opts.get("mode", "randomized")
            m, gw, gc, T = hypercube_decomposition(d, mode)
            inst = generate_walk(gw, gc, full_flip_walk(m), T, seed)
            return inst, f"product:mode={mode},m={m}"
        raise GraphError("product generator needs a grid or hypercube graph")
    if gen_kind == "block":
        if kind != "grid":
            raise GraphError("block generator needs a grid graph")
        if "r" in opts:
            num, _, den = opts["r"].partition("/")
            r = Fraction(int(num), int(den or "1"))
            preset = f"block:r={r}"
        else:
            mode = opts.get("mode", "randomized")
            r = block_preset_r(d, mode)
            preset = f"block:mode={mode},r={r}"
        cfg = GridWalkConfig(n=n, d=d, seed=seed, r=r)
        return block_threaded_walk(cfg), preset
    if gen_kind == "2d-improved":
        if kind != "grid" or d != 2:
            raise GraphError("2d-improved generator needs grid:n=...,d=2")
        nearest = valid_walk2d_n(n)
        if nearest != n:
            raise GraphError(
                f"2d-improved needs n = s^5 with s = 3 (mod 4); nearest "
                f"valid n at or above {n} is {nearest}"
            )
        return walk2d_improved(n, seed), "2d-improved"
    raise GraphError(f"unknown generator {gen_kind!r}; use product, block, "
                     f"or 2d-improved")


def cmd_gen(args) -> int:
    inst, preset = _generate(args.graph, args.gen, args.seed)
    summary = instance_summary(inst)
    if isinstance(inst, PathInstance):
        steps = inst.T
    elif isinstance(inst, BlockThreadedInstance):
        steps = inst.L
    else:
        steps = len(inst.steps)
    report = {
        "preset": preset,
        "N": inst.graph.vertex_count,
        "T": steps,
        "L": len(inst.fmap),
        "seed": args.seed,
        "detail": summary,
    }
    if args.out:
        save_instance(inst, args.out)
        report["file"] = str(args.out)
    rows = [[k, json.dumps(v) if isinstance(v, dict) else v]
            for k, v in report.items()]
    out_args = argparse.Namespace(format=args.format, out=None)
    _emit(report, rows, ["field", "value"], out_args)
    return 0


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    if bool(args.instance) == bool(args.graph):
        raise GraphError("solve needs exactly one of --instance or --graph")
    if args.instance:
        inst = load_instance(args.instance)
        g = inst.graph
        fn = inst.eval_fx
    else:
        kind, n, d = parse_graph_spec(args.graph)
        g = build_graph(kind, n, d)
        fn = make_function(g, args.fn, args.seed)
    start = _parse_vertex(args.start) if args.start else None
    if start is not None and not g.contains(start):
        raise GraphError(f"start {start} is not a vertex of the graph")
    cfg = SolverConfig(algorithm=args.algo, seed=args.seed, start=start)
    t0 = time.perf_counter()
    report = solve(g, fn, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    gkind, gn, gd = _graph_fields(g)
    led = report.ledger
    row = [args.algo, gkind, gn, gd, args.seed, led.value_queries,
           led.membership_queries, led.charged_cost,
           report.descent_length,
           "true" if report.is_local_min else "false", f"{wall_ms:.3f}"]
    data = report.to_json()
    data["graph"] = g.to_json()
    data["wall_ms"] = round(wall_ms, 3)
    _emit(data, [row], list(CSV_COLUMNS), args)
    return 0 if report.is_local_min else 1


# ---------------------------------------------------------------------------
# walk


def cmd_walk_parity(args) -> int:
    horizon = args.t
    partial = False
    try:
        table = parity_dp(args.m, horizon)
    except BudgetError as e:
        if not e.feasible or e.feasible < 0:
            raise
        _warn(f"{e}; writing partial output up to t={e.feasible}")
        horizon = e.feasible
        table = parity_dp(args.m, horizon)
        partial = True
    rows = []
    for t in range(horizon + 1):
        rows.append([args.m, t, str(table.zero_prob(t)),
                     str(parity_closed_form(args.m, t))])
    data = {
        "m": args.m,
        "horizon": horizon,
        "partial": partial,
        "rows": [{"t": r[1], "p_all_even": r[2], "closed_form": r[3]}
                 for r in rows],
    }
    _emit(data, rows, ["m", "t", "p_all_even", "closed_form"], args)
    return 0


def cmd_walk_line(args) -> int:
    horizon = args.t
    partial = False
    try:
        table = line_walk_dp(args.n, horizon)
    except BudgetError as e:
        if not e.feasible or e.feasible < 1:
            raise
        _warn(f"{e}; writing partial output up to t={e.feasible}")
        horizon = e.feasible
        table = line_walk_dp(args.n, horizon)
        partial = True
    if args.full:
        if not args.out:
            raise GraphError("walk line --full needs --out for the table")
        table.to_csv(args.out)
        print(json.dumps({"n": args.n, "horizon": horizon,
                          "partial": partial, "file": str(args.out)}))
        return 0
    rows = []
    for t in range(horizon + 1):
        mp = table.max_prob(t)
        rows.append([args.n, t, str(mp), float(mp)])
    data = {
        "n": args.n,
        "horizon": horizon,
        "partial": partial,
        "rows": [{"t": r[1], "max_p": r[2], "max_p_float": r[3]}
                 for r in rows],
    }
    _emit(data, rows, ["n", "t", "max_p", "max_p_float"], args)
    return 0


def cmd_walk_reflection(args) -> int:
    t_max = args.t_max
    partial = False
    rows = []
    all_equal = True
    for t in range(1, t_max + 1):
        try:
            for i in range(1, args.i_max + 1):
                for j in range(1, args.j_max + 1):
                    touching, reflected, equal = reflection_check(i, j, t)
                    all_equal = all_equal and equal
                    rows.append([i, j, t, touching, reflected,
                                 "true" if equal else "false"])
        except BudgetError as e:
            _warn(f"{e}; stopping the sweep at t={t - 1}")
            partial = True
            break
    data = {
        "t_max": t_max,
        "partial": partial,
        "all_equal": all_equal,
        "rows": [{"i": r[0], "j": r[1], "t": r[2], "touching": r[3],
                  "reflected": r[4], "equal": r[5] == "true"}
                 for r in rows],
    }
    _emit(data, rows, ["i", "j", "t", "touching", "reflected", "equal"],
          args)
    return 0 if all_equal else 1


def cmd_walk_profile(args) -> int:
    T = args.steps
    partial = False
    try:
        profile = pt_profile(args.walk, T)
    except BudgetError as e:
        if not e.feasible or e.feasible < 1:
            raise
        _warn(f"{e}; writing partial profile up to t={e.feasible}")
        T = e.feasible
        profile = pt_profile(args.walk, T)
        partial = True
    randomized, quantum = bound_estimate(profile)
    rows = [[profile.walk_id, t + 1, p]
            for t, p in enumerate(profile.values)]
    data = {
        "walk": profile.walk_id,
        "T": T,
        "partial": partial,
        "bound_estimate": {"randomized": randomized, "quantum": quantum},
        "rows": [{"t": r[1], "p_t": r[2]} for r in rows],
    }
    if args.plot:
        from . import plots

        if args.out:
            png = str(Path(args.out).with_suffix(".png"))
        else:
            safe = profile.walk_id.replace(":", "-").replace(",", "-")
            png = f"profile-{safe}.png"
        plots.profile_figure(range(1, T + 1), profile.values,
                             profile.walk_id, png)
        data["figure"] = png
    _emit(data, rows, ["walk", "t", "p_t"], args)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    import random as _random

    inst = load_instance(args.instance)
    checks = []
    ok, witness = verify_instance(inst)
    checks.append({"check": "unique-local-min", "ok": ok,
                   "witness": list(witness) if witness else None})
    if isinstance(inst, (PathInstance, BlockThreadedInstance)):
        reducer = (reduce_query if isinstance(inst, PathInstance)
                   else reduce_query_block)
        rng = _random.Random(args.seed)
        ledger = QueryLedger()
        member = CountingOracle(lambda v: v in inst.fmap, ledger,
                                "membership")
        mismatches = 0
        over_budget = 0
        for _ in range(args.sample):
            v = _random_vertex(inst.graph, rng)
            before = ledger.membership_queries
            val = reducer(inst, v, member)
            if val != inst.eval_fx(v):
                mismatches += 1
            if ledger.membership_queries - before > 2:
                over_budget += 1
        checks.append({
            "check": "reduce-query",
            "ok": mismatches == 0 and over_budget == 0,
            "sampled": args.sample,
            "mismatches": mismatches,
            "over_budget": over_budget,
        })
    all_ok = all(c["ok"] for c in checks)
    data = {"file": str(args.instance), "ok": all_ok, "checks": checks}
    rows = [[c["check"], "true" if c["ok"] else "false"] for c in checks]
    _emit(data, rows, ["check", "ok"], args)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# bench


def _parse_bench_graph(text: str) -> tuple:
    """"grid:d=2", "line", "hypercube" -> (kind, d or None)."""
    kind, _, rest = text.partition(":")
    opts = {}
    for tok in rest.split(","):
        tok = tok.strip()
        if not tok:
            continue
        key, eq, val = tok.partition("=")
        if not eq:
            raise GraphError(f"bench graph spec {text!r}: use kind or "
                             f"kind:d=D; sizes come from --sizes")
        opts[key.strip()] = int(val)
    if kind == "line":
        return ("line", 1)
    if kind == "grid":
        if "d" not in opts:
            raise GraphError("bench on grids needs grid:d=D")
        return ("grid", opts["d"])
    if kind == "hypercube":
        return ("hypercube", 0)
    raise GraphError(f"unknown graph kind {kind!r}")


def cmd_bench(args) -> int:
    kind, d = _parse_bench_graph(args.graph)
    sizes = tuple(int(s) for s in args.sizes.split(","))
    algos = tuple(args.algos.split(","))
    cfg = BenchConfig(graph_kind=kind, sizes=sizes, d=d, algorithms=algos,
                      fn_kind=args.fn, trials=args.trials,
                      seed_base=args.seed, jobs=args.jobs)
    report = run_bench(cfg)
    prefix = Path(args.out) if args.out else Path("bench")
    csv_path = prefix.with_suffix(".csv")
    json_path = prefix.with_suffix(".json")
    with open(csv_path, "w", newline="") as fh:
        write_csv(report.rows, fh)
    json_path.write_text(json.dumps(report.to_json(), indent=2,
                                    sort_keys=True) + "\n")
    outputs = {"csv": str(csv_path), "json": str(json_path)}
    if not args.no_plot:
        from . import plots

        png_path = str(prefix.with_suffix(".png"))
        plots.scaling_figure(report, png_path)
        outputs["figure"] = png_path
    summary = {
        "outputs": outputs,
        "slopes": report.slopes,
        "groups": [{"algo": s.algo, "size": s.size, "trials": s.trials,
                    "median_cost": s.median_cost,
                    "success_rate": s.success_rate}
                   for s in report.summaries],
    }
    rows = [[s.algo, s.size, s.trials, s.median_cost, s.success_rate]
            for s in report.summaries]
    out_args = argparse.Namespace(format=args.format, out=None)
    _emit(summary, rows, ["algo", "size", "trials", "median_cost",
                          "success_rate"], out_args)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsqlab",
        description="Query-complexity laboratory for local search on "
                    "graphs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="base RNG seed (default 0)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", choices=("json", "csv"),
                        default="json", help="output format")
    common.add_argument("--jobs", type=int, default=1,
                        help="parallel worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common],
                       help="generate a hard instance")
    p.add_argument("--graph", required=True,
                   help="grid:n=64,d=2 | hypercube:n=10 | line:n=33")
    p.add_argument("--gen", required=True,
                   help="product:m=1 | product:randomized | block:r=1/2 "
                        "| block:quantum | 2d-improved")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", parents=[common], help="run one solver")
    p.add_argument("--instance", default=None, help="instance JSON file")
    p.add_argument("--graph", default=None, help="graph spec for a "
                   "synthetic function")
    p.add_argument("--fn", choices=FN_KINDS, default="random",
                   help="synthetic function kind (with --graph)")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--start", default=None,
                   help="start vertex, e.g. 3 or 2,5")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("walk", help="export walk tables and profiles")
    wsub = p.add_subparsers(dest="what", required=True)

    w = wsub.add_parser("parity", parents=[common],
                        help="all-even probability table")
    w.add_argument("--m", type=int, required=True, help="bin count")
    w.add_argument("--t", type=int, required=True, help="horizon")
    w.set_defaults(func=cmd_walk_parity)

    w = wsub.add_parser("line", parents=[common],
                        help="barrier line walk table")
    w.add_argument("--n", type=int, required=True, help="points")
    w.add_argument("--t", type=int, required=True, help="horizon")
    w.add_argument("--full", action="store_true",
                   help="write the full (t,i,j) table to --out")
    w.set_defaults(func=cmd_walk_line)

    w = wsub.add_parser("reflection", parents=[common],
                        help="barrier reflection brute-force sweep")
    w.add_argument("--i-max", type=int, default=4)
    w.add_argument("--j-max", type=int, default=4)
    w.add_argument("--t-max", type=int, default=14)
    w.set_defaults(func=cmd_walk_reflection)

    w = wsub.add_parser("profile", parents=[common],
                        help="p_t profile and bound estimates")
    w.add_argument("--walk", required=True,
                   help="hypercube:m=6 | line:n=64 | grid_cycling:n=16,m=2")
    w.add_argument("--steps", type=int, required=True, help="profile length")
    w.add_argument("--plot", action="store_true",
                   help="also render the profile to PNG")
    w.set_defaults(func=cmd_walk_profile)

    p = sub.add_parser("verify", parents=[common],
                       help="check an instance file")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("--sample", type=int, default=200,
                   help="vertices to spot-check with the query reducer")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common],
                       help="scaling benchmark over sizes and solvers")
    p.add_argument("--graph", required=True,
                   help="line | grid:d=2 | hypercube (sizes via --sizes)")
    p.add_argument("--sizes", required=True,
                   help="comma-separated size list, e.g. 32,64,128")
    p.add_argument("--algos", required=True,
                   help=f"comma-separated algorithms from {ALGORITHMS}")
    p.add_argument("--fn", choices=FN_KINDS, default="random")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--no-plot", action="store_true",
                   help="skip the scaling figure")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, BudgetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Local-search algorithms measured by the laboratory.

Three families: plain steepest descent, sample-then-descend (the
classic random-sampling baseline in both cost models), and the
recursive range-shrinking algorithm in both cost models. Every f
evaluation goes through a counting oracle; the quantum variants charge
the square-root min-finding cost and inherit its error injection.

Tie-breaking is first-in-canonical-order everywhere (neighbor lists as
the graph yields them, sample lists in draw order), so a seeded run is
exactly reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .graphs import GraphError, GraphFamily, Vertex
from .oracle import CountingOracle, CostModel, QueryLedger, min_find, unit_model

ALGORITHMS = (
    "steepest",
    "steepest-q",
    "sample-r",
    "sample-q",
    "section5-r",
    "section5-q",
)

DESCENT_EPS = 1 / 100


@dataclass
class SolverConfig:
    """Knobs for a solver run. The eps fields default to the analysis
    values 1/(10 log2 diam) (eps1, eps2) and 1/(200 log2 diam) (eps3),
    computed per graph when left at None."""

    algorithm: str
    seed: int = 0
    start: Vertex = None
    sample_size: int = None
    eps1: float = None
    eps2: float = None
    eps3: float = None
    j_max: int = 64
    requery_anchor: bool = False
    c_dh: float = 1.0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise GraphError(
                f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}"
            )
        if self.j_max < 1:
            raise GraphError("j_max must be >= 1")

    def to_json(self) -> dict:
        out = {"algorithm": self.algorithm, "seed": self.seed,
               "j_max": self.j_max, "requery_anchor": self.requery_anchor,
               "c_dh": self.c_dh}
        for name in ("sample_size", "eps1", "eps2", "eps3"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.start is not None:
            out["start"] = list(self.start)
        return out


@dataclass
class RoundTrace:
    """One round of the recursive solver: range size in and out, the
    candidate-set size, inner-loop length, and any fallback taken."""

    index: int
    m_in: int
    u_size: int
    j_count: int
    m_out: int
    fallback: str = None
    u_next: Vertex = None
    u_set: list = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"i": self.index, "m_i": self.m_in, "u_size": self.u_size,
               "J_i": self.j_count, "m_next": self.m_out}
        if self.fallback:
            out["fallback"] = self.fallback
        return out


@dataclass
class SolveReport:
    algorithm: str
    seed: int
    output: Vertex
    is_local_min: bool
    descent_length: int
    ledger: QueryLedger
    trace: list

    @property
    def charged_cost(self) -> float:
        return self.ledger.charged_cost

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "output": list(self.output),
            "is_local_min": self.is_local_min,
            "descent_length": self.descent_length,
            "ledger": self.ledger.to_json(),
            "trace": [t.to_json() for t in self.trace],
        }


def distance_within(g: GraphFamily, u: Vertex, v: Vertex, context=None) -> int:
    """Distance used by the range updates: always the global graph
    metric. The shrinking sets never change it, because the boundary
    argument needs spheres measured in the full graph; `context` is
    accepted and ignored to make that explicit at call sites."""
    return g.distance_between(u, v)


def n_below(f, v: Vertex, subset) -> int:
    """|{u in subset: f(u) < f(v)}| on a plain callable; instrumentation
    for the sampling analysis, never charged."""
    fv = f(v)
    return sum(1 for u in subset if f(u) < fv)


def _verify_local_min(g: GraphFamily, oracle: CountingOracle, v: Vertex) -> bool:
    fv = oracle.peek(v)
    return all(oracle.peek(w) >= fv for w in g.neighbors_of(v))


def _descend(g: GraphFamily, oracle: CountingOracle, v0: Vertex,
             model: CostModel, rng: random.Random) -> tuple:
    """Shared descent core; returns (terminal vertex, steps taken).

    Unit model queries every neighbor at every step. The quantum model
    min-finds over the neighbors at error 1/100; a step that comes back
    non-improving is re-checked with one charged unit round so the
    terminal vertex is never a false local minimum.
    """
    oracle.phase = "descent"
    cur = v0
    cur_val = oracle.query_value(cur)
    steps = 0
    while True:
        nbrs = g.neighbors_of(cur)
        if model.kind == "unit":
            best, best_val = None, None
            for w in nbrs:
                val = oracle.query_value(w)
                if best_val is None or val < best_val:
                    best, best_val = w, val
        else:
            best = min_find(oracle, nbrs, DESCENT_EPS, model, rng)
            best_val = oracle.known[best]
            if best_val >= cur_val:
                # the min-find may have errored; settle it exactly
                best, best_val = None, None
                for w in nbrs:
                    val = oracle.query_value(w)
                    if best_val is None or val < best_val:
                        best, best_val = w, val
        if best_val >= cur_val:
            return cur, steps
        cur, cur_val = best, best_val
        steps += 1


def steepest_descent(g: GraphFamily, oracle: CountingOracle, v0: Vertex,
                     model: CostModel, rng: random.Random = None,
                     seed: int = 0) -> SolveReport:
    g.check_vertex(v0)
    rng = rng or random.Random(seed)
    out, steps = _descend(g, oracle, v0, model, rng)
    return SolveReport(
        algorithm="steepest" if model.kind == "unit" else "steepest-q",
        seed=seed,
        output=out,
        is_local_min=_verify_local_min(g, oracle, out),
        descent_length=steps,
        ledger=oracle.ledger,
        trace=[],
    )


def default_sample_size(g: GraphFamily, model: CostModel) -> int:
    n = g.vertex_count
    delta = g.max_degree
    if model.kind == "unit":
        return math.ceil(math.sqrt(n * delta))
    return math.ceil(n ** (2 / 3) * delta ** (1 / 3))


def sample_then_descend(g: GraphFamily, oracle: CountingOracle, s: int,
                        model: CostModel, rng: random.Random = None,
                        seed: int = 0) -> SolveReport:
    if s < 1:
        raise GraphError("sample size must be >= 1")
    rng = rng or random.Random(seed)
    vertices = list(g.vertices())
    sample = [vertices[rng.randrange(len(vertices))] for _ in range(s)]
    oracle.phase = "sample"
    if model.kind == "unit":
        best, best_val = None, None
        for w in sample:
            val = oracle.query_value(w)
            if best_val is None or val < best_val:
                best, best_val = w, val
    else:
        best = min_find(oracle, sample, DESCENT_EPS, model, rng)
    out, steps = _descend(g, oracle, best, model, rng)
    return SolveReport(
        algorithm="sample-r" if model.kind == "unit" else "sample-q",
        seed=seed,
        output=out,
        is_local_min=_verify_local_min(g, oracle, out),
        descent_length=steps,
        ledger=oracle.ledger,
        trace=[],
    )


def _default_eps(diam: int, factor: int) -> float:
    return 1 / (factor * math.log2(max(diam, 2)))


def local_search_recursive(g: GraphFamily, oracle: CountingOracle,
                           cfg: SolverConfig, model: CostModel) -> SolveReport:
    """Recursive range-shrinking search.

    Round i samples ceil((8|U_i|/m_i) ln(1/eps1)) vertices of U_i with
    replacement, keeps the best seen so far as the anchor, then hunts
    for a sphere radius in [m_i/8, m_i/2] around the anchor that is
    both thin (at most 10|U_i|/m_i vertices of U_i) and entirely above
    the anchor's value; the ball of that radius becomes U_{i+1}. When
    the range is down to 10 the anchor's decreasing path finishes the
    job. An empty radius-candidate set or an inner loop past j_max
    falls back to radius floor(m_i/2), recorded in the trace.
    """
    rng = random.Random(cfg.seed)
    diam = g.diameter
    eps1 = cfg.eps1 if cfg.eps1 is not None else _default_eps(diam, 10)
    eps2 = cfg.eps2 if cfg.eps2 is not None else _default_eps(diam, 10)
    eps3 = cfg.eps3 if cfg.eps3 is not None else _default_eps(diam, 200)
    vertices = list(g.vertices())
    known = {}

    def value_of(v: Vertex, requery: bool = False) -> float:
        oracle.phase = "anchor"
        if requery or v not in known:
            known[v] = oracle.query_value(v)
        return known[v]

    m = diam
    universe = vertices
    anchor = None
    trace = []
    i = 0
    while m > 10:
        count = math.ceil((8 * len(universe) / m) * math.log(1 / eps1))
        sample = [universe[rng.randrange(len(universe))] for _ in range(count)]
        oracle.phase = "sample"
        if model.kind == "unit":
            v_i, v_val = None, None
            for w in sample:
                val = oracle.query_value(w)
                if v_val is None or val < v_val:
                    v_i, v_val = w, val
            known[v_i] = v_val
        else:
            v_i = min_find(oracle, sample, eps2, model, rng)
            known[v_i] = oracle.known[v_i]
        if i == 0:
            u_next = v_i
        else:
            fu = value_of(anchor, requery=cfg.requery_anchor)
            fv = value_of(v_i)
            u_next = anchor if fu <= fv else v_i
        round_trace = RoundTrace(index=i, m_in=m, u_size=len(universe),
                                 j_count=0, m_out=0, u_next=u_next,
                                 u_set=universe)
        buckets = {}
        for w in universe:
            buckets.setdefault(distance_within(g, w, u_next), []).append(w)
        lo = -(-m // 8)
        hi = m // 2
        cap = 10 * len(universe) / m
        candidates = [mm for mm in range(lo, hi + 1)
                      if len(buckets.get(mm, ())) <= cap]
        oracle.phase = "boundary"

        def sphere_ok(shell: list) -> bool:
            if not shell:
                return True
            anchor_val = value_of(u_next)
            oracle.phase = "boundary"
            if model.kind == "unit":
                vals = [oracle.query_value(w) for w in shell]
                return all(anchor_val <= val for val in vals)
            w_star = min_find(oracle, shell, eps3, model, rng)
            return anchor_val <= oracle.known[w_star]

        m_next = None
        if not candidates:
            m_next = m // 2
            round_trace.fallback = "no-thin-radius"
        else:
            for j in range(1, cfg.j_max + 1):
                m_ij = candidates[rng.randrange(len(candidates))]
                if sphere_ok(buckets.get(m_ij, [])):
                    round_trace.j_count = j
                    m_next = m_ij
                    break
            if m_next is None:
                m_next = m // 2
                round_trace.j_count = cfg.j_max
                round_trace.fallback = "inner-loop-cap"
        universe = [w for w in universe
                    if distance_within(g, w, u_next) <= m_next]
        round_trace.m_out = m_next
        trace.append(round_trace)
        anchor = u_next
        m = m_next
        i += 1
    if anchor is None:
        anchor = vertices[rng.randrange(len(vertices))]
    out, steps = _descend(g, oracle, anchor, model, rng)
    return SolveReport(
        algorithm="section5-r" if model.kind == "unit" else "section5-q",
        seed=cfg.seed,
        output=out,
        is_local_min=_verify_local_min(g, oracle, out),
        descent_length=steps,
        ledger=oracle.ledger,
        trace=trace,
    )


def solve(g: GraphFamily, fn, cfg: SolverConfig) -> SolveReport:
    """Run one configured solver against a plain value function,
    wiring up the ledger, oracle, cost model, and seeded RNG."""
    from .oracle import quantum_model

    ledger = QueryLedger()
    oracle = CountingOracle(fn, ledger, "value")
    quantum = cfg.algorithm.endswith("-q")
    model = (quantum_model(c_dh=cfg.c_dh) if quantum else unit_model())
    rng = random.Random(cfg.seed)
    if cfg.algorithm in ("steepest", "steepest-q"):
        vertices = list(g.vertices())
        start = cfg.start
        if start is None:
            start = vertices[rng.randrange(len(vertices))]
        return steepest_descent(g, oracle, start, model, rng, seed=cfg.seed)
    if cfg.algorithm in ("sample-r", "sample-q"):
        s = cfg.sample_size
        if s is None:
            s = default_sample_size(g, model)
        return sample_then_descend(g, oracle, s, model, rng, seed=cfg.seed)
    return local_search_recursive(g, oracle, cfg, model)

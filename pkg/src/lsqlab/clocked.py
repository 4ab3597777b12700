"""Clocked random-walk instances on product graphs.

An instance pairs a random walk x_0, x_1, ... on a walk graph with a
fixed clock path z_0,0, z_1,0, z_1,1, ... (the first 2T+1 vertices of a
Hamilton path on a clock graph). The hidden function on the product
graph decreases by exactly 1 along the interleaved path

    x_0*z_0,0, x_1*z_0,0, x_1*z_1,0, x_1*z_1,1, x_2*z_1,1, ...

and grows with distance from the start everywhere else, so the only
local minimum is the path's endpoint. Because the clock component pins
down where on the path a vertex could sit, one value query can be
answered with at most two membership queries against the path set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice

from .graphs import (
    GraphError,
    GraphFamily,
    Grid,
    Product,
    Vertex,
    grid,
    hamilton_path,
    hypercube,
    line,
    is_local_min,
)
from .oracle import CountingOracle, QueryLedger

MAX_VERIFY_VERTICES = 1_000_000


@dataclass(frozen=True)
class WalkSpec:
    """A time-inhomogeneous candidate-set walk on a graph.

    candidates(u, t) lists the allowed positions at time t for a walk
    sitting at u at time t-1 (each either u itself or a neighbor, and
    the walk picks uniformly among them); c_of_t(t) is that list's size,
    exposed separately because the probability lemmas depend on it.
    """

    spec_id: str
    graph: GraphFamily
    start: Vertex
    candidates: object
    c_of_t: object

    def check_step(self, u: Vertex, t: int) -> tuple:
        cands = self.candidates(u, t)
        if len(cands) != self.c_of_t(t):
            raise GraphError(
                f"walk {self.spec_id}: candidate count {len(cands)} != "
                f"c({t}) = {self.c_of_t(t)}"
            )
        for w in cands:
            if w != u and self.graph.distance_between(u, w) != 1:
                raise GraphError(f"walk {self.spec_id}: bad candidate {w} from {u}")
        return cands


def full_flip_walk(m: int) -> WalkSpec:
    """Hypercube walk that flips one of the m coordinates, uniformly."""
    g = hypercube(2, m)

    def cands(u, t):
        out = []
        for k in range(m):
            out.append(u[:k] + (3 - u[k],) + u[k + 1:])
        return tuple(out)

    return WalkSpec(f"full-flip:m={m}", g, (1,) * m, cands, lambda t: m)


def grid_cycling_walk(n: int, m: int) -> WalkSpec:
    """Clamped +-1 walk on [n]^m that cycles through axes round-robin.

    At time t axis (t-1) mod m moves; the two candidates are the
    clamped down- and up-steps, so a barrier move keeps a stay option.
    With m = 1 this is the barrier line walk.
    """
    g = grid(n, m) if m >= 2 else line(n)

    def cands(u, t):
        k = (t - 1) % m
        lo = u[:k] + (max(u[k] - 1, 1),) + u[k + 1:]
        hi = u[:k] + (min(u[k] + 1, n),) + u[k + 1:]
        return (lo, hi)

    return WalkSpec(f"grid-cycling:n={n},m={m}", g, (1,) * m, cands, lambda t: 2)


_SPEC_BUILDERS = {
    "full-flip": lambda gw: full_flip_walk(gw.dimension),
    "grid-cycling": lambda gw: grid_cycling_walk(gw.n, gw.dimension),
}


def walk_spec_for(spec_kind: str, gw: GraphFamily) -> WalkSpec:
    try:
        return _SPEC_BUILDERS[spec_kind](gw)
    except KeyError:
        raise GraphError(f"unknown walk spec kind {spec_kind!r}") from None


class ClockPath:
    """First 2T+1 vertices of a Hamilton path, with a position index."""

    def __init__(self, gc: Grid, T: int):
        length = 2 * T + 1
        if length > gc.vertex_count:
            raise GraphError(
                f"clock graph has {gc.vertex_count} vertices, "
                f"need {length} for T={T}"
            )
        self.vertices = list(islice(hamilton_path(gc.n, gc.dimension), length))
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, i: int) -> Vertex:
        return self.vertices[i]


@dataclass
class PathInstance:
    """A sampled clocked-walk instance and its hidden function."""

    gw: GraphFamily
    gc: Grid
    spec: WalkSpec
    T: int
    seed: int
    walk: list
    clock: ClockPath
    origin: dict = None
    graph: Product = field(init=False)
    path: list = field(init=False)
    fmap: dict = field(init=False)

    def __post_init__(self):
        assert len(self.walk) == self.T + 1
        self.graph = Product(self.gw, self.gc)
        path = [self.walk[0] + self.clock[0]]
        for k in range(self.T):
            nxt = self.walk[k + 1]
            path.append(nxt + self.clock[2 * k])
            path.append(nxt + self.clock[2 * k + 1])
            path.append(nxt + self.clock[2 * k + 2])
        self.path = path
        fmap = {}
        value = 3 * self.T
        for v in path:
            # stay-steps revisit a product vertex; the first (larger)
            # value is the one the function takes there
            fmap.setdefault(v, value)
            value -= 1
        self.fmap = fmap

    @property
    def start(self) -> Vertex:
        return self.path[0]

    @property
    def end(self) -> Vertex:
        return self.path[-1]

    def eval_fx(self, v: Vertex) -> int:
        got = self.fmap.get(v)
        if got is not None:
            return got
        return self.graph.distance_between(v, self.start) + 3 * self.T

    def membership(self, v: Vertex) -> bool:
        return v in self.fmap

    def value_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.eval_fx, ledger, "value")

    def membership_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.membership, ledger, "membership")

    def validate(self) -> None:
        """Recheck the walk against its spec and the path against the
        product graph; loaders call this on untrusted input."""
        u = self.spec.start
        if self.walk[0] != u:
            raise GraphError("walk does not begin at the spec start")
        for t in range(1, self.T + 1):
            cands = self.spec.check_step(u, t)
            if self.walk[t] not in cands:
                raise GraphError(f"walk step {t} not among candidates")
            u = self.walk[t]
        for a, b in zip(self.path, self.path[1:]):
            if a != b and self.graph.distance_between(a, b) != 1:
                raise GraphError("product path has a non-adjacent step")

    def to_json(self) -> dict:
        if self.origin is not None:
            return dict(self.origin)
        return {
            "kind": "product-clocked",
            "walk_spec": self.spec.spec_id,
            "gw": self.gw.to_json(),
            "gc": self.gc.to_json(),
            "T": self.T,
            "seed": self.seed,
            "walk": [list(v) for v in self.walk],
        }


def generate_walk(gw: GraphFamily, gc: Grid, spec: WalkSpec, T: int,
                  seed: int) -> PathInstance:
    """Sample the walk with a seeded generator and assemble the instance."""
    if spec.graph != gw:
        raise GraphError("walk spec was built for a different graph")
    rng = random.Random(seed)
    walk = [spec.start]
    for t in range(1, T + 1):
        cands = spec.check_step(walk[-1], t)
        walk.append(cands[rng.randrange(len(cands))])
    return PathInstance(gw, gc, spec, T, seed, walk, ClockPath(gc, T))


def hypercube_decomposition(n: int, mode: str) -> tuple:
    """Split an n-cube into walk and clock factors.

    Returns (m, gw, gc, T): the walk factor has m coordinates with
    m = floor((n + log2 n) / 2) for the randomized bound and
    m = floor((2n + log2 n) / 3) for the quantum one, the clock takes
    the rest, and T consumes the whole clock path.
    """
    if n < 4:
        raise GraphError(f"decomposition needs n >= 4, got {n}")
    import math

    if mode == "randomized":
        m = int(math.floor((n + math.log2(n)) / 2))
    elif mode == "quantum":
        m = int(math.floor((2 * n + math.log2(n)) / 3))
    else:
        raise GraphError(f"mode must be randomized or quantum, got {mode!r}")
    if not 1 <= m < n:
        raise GraphError(f"decomposition degenerate at n={n}: m={m}")
    T = (2 ** (n - m) - 1) // 2
    return m, hypercube(2, m), hypercube(2, n - m), T


def hypercube_instance(n: int, mode: str, seed: int) -> PathInstance:
    m, gw, gc, T = hypercube_decomposition(n, mode)
    return generate_walk(gw, gc, full_flip_walk(m), T, seed)


def eval_fx(inst: PathInstance, v: Vertex) -> int:
    return inst.eval_fx(v)


def reduce_query(inst: PathInstance, v: Vertex,
                 membership: CountingOracle) -> int:
    """Answer a value query using at most two membership queries.

    Uses only public structure: the clock path, T, the walk start, and
    the product metric. A vertex whose clock half sits at even position
    2k on the clock path may be the walk's position before or after step
    k; one extra membership probe at the preceding clock vertex (or a
    free comparison with the start when k = 0) settles which.
    """
    dw = inst.gw.dimension
    on_path = membership.query_membership(v)
    cidx = inst.clock.index.get(v[dw:])
    if not on_path:
        return inst.graph.distance_between(v, inst.start) + 3 * inst.T
    if cidx is None:
        raise GraphError(f"oracle claims {v} on path but clock half is off the clock path")
    if cidx % 2 == 1:
        k = (cidx - 1) // 2
        return 3 * (inst.T - k) - 2
    k = cidx // 2
    if k == 0:
        return 3 * inst.T if v[:dw] == inst.spec.start else 3 * inst.T - 1
    probe = v[:dw] + inst.clock[2 * k - 1]
    if membership.query_membership(probe):
        return 3 * (inst.T - k)
    return 3 * (inst.T - k) - 1


def verify_unique_local_min(inst) -> tuple:
    """Exhaustively confirm the endpoint is the one local minimum.

    Works on any instance exposing graph, end, and eval_fx. Returns
    (ok, witness); witness is a vertex breaking uniqueness when not ok.
    """
    g = inst.graph
    if g.vertex_count > MAX_VERIFY_VERTICES:
        raise GraphError(
            f"refusing exhaustive check on {g.vertex_count} vertices "
            f"(cap {MAX_VERIFY_VERTICES})"
        )
    minima = []
    for v in g.vertices():
        if is_local_min(g, inst.eval_fx, v):
            minima.append(v)
    if minima == [inst.end]:
        return True, None
    for w in minima:
        if w != inst.end:
            return False, w
    return False, inst.end if inst.end not in minima else minima[0]


def _evolve(spec: WalkSpec, dist: dict, t_from: int, t_to: int) -> dict:
    for tau in range(t_from + 1, t_to + 1):
        new = {}
        for u, num in dist.items():
            for w in spec.candidates(u, tau):
                new[w] = new.get(w, 0) + num
        dist = new
    return dist


def conditional_hit_probability(spec: WalkSpec, u: Vertex, u2: Vertex,
                                t1: int, v: Vertex, t2: int) -> tuple:
    """Exact (p, q) for a walk at u at time t1.

    p is the probability of sitting at v at time t2; q the same
    conditioned on the first step avoiding u2 (an allowed step). q is
    None when u2 is the only candidate, which leaves nothing to
    condition on.
    """
    assert t2 >= t1 >= 0
    if t2 == t1:
        return Fraction(1 if v == u else 0), None
    cands = spec.candidates(u, t1 + 1)
    if u2 not in cands:
        raise GraphError(f"{u2} is not an allowed step from {u} at time {t1 + 1}")
    den_tail = 1
    for tau in range(t1 + 2, t2 + 1):
        den_tail *= spec.c_of_t(tau)
    p_dist = _evolve(spec, {u: 1}, t1, t2)
    p = Fraction(p_dist.get(v, 0), spec.c_of_t(t1 + 1) * den_tail)
    c1 = len(cands)
    if c1 == 1:
        return p, None
    q_dist = _evolve(spec, {w: 1 for w in cands if w != u2}, t1 + 1, t2)
    q = Fraction(q_dist.get(v, 0), (c1 - 1) * den_tail)
    return p, q


@dataclass
class TwoProbSweep:
    """Result of sweeping the conditioned-vs-free bound q <= 2p."""

    walk_id: str
    horizon: int
    tuples_checked: int
    undefined: int
    violations: list
    max_ratio: Fraction

    def ok(self) -> bool:
        return not self.violations


def two_prob_sweep(spec: WalkSpec, horizon: int) -> TwoProbSweep:
    """Check q <= 2p over all (u, u2, t1, v, t2) up to the horizon.

    For fixed (u, t1) the free and conditioned evolutions share the
    denominator tail past t1+1, so each comparison reduces to
    q_num * c1 <= 2 * p_num * (c1 - 1) on numerators.
    """
    g = spec.graph
    checked = 0
    undefined = 0
    violations = []
    max_ratio = Fraction(0)
    for u in g.vertices():
        for t1 in range(horizon):
            cands = spec.candidates(u, t1 + 1)
            c1 = len(cands)
            p_snap = []
            dist = {u: 1}
            for t2 in range(t1 + 1, horizon + 1):
                dist = _evolve(spec, dist, t2 - 1, t2)
                p_snap.append(dist)
            for u2 in cands:
                if c1 == 1:
                    undefined += 1
                    continue
                qdist = {w: 1 for w in cands if w != u2}
                for idx, t2 in enumerate(range(t1 + 1, horizon + 1)):
                    if idx > 0:
                        qdist = _evolve(spec, qdist, t2 - 1, t2)
                    pdist = p_snap[idx]
                    for v, qn in qdist.items():
                        pn = pdist.get(v, 0)
                        checked += 1
                        if qn * c1 > 2 * pn * (c1 - 1):
                            violations.append((u, u2, t1, v, t2))
                        if pn > 0:
                            ratio = Fraction(qn * c1, pn * (c1 - 1))
                            if ratio > max_ratio:
                                max_ratio = ratio
    return TwoProbSweep(spec.spec_id, horizon, checked, undefined,
                        violations, max_ratio)

"""Grid-specific hard-instance generators.

Three constructions on [n]^d grids:

* grid_walk_integer: split the axes into a walk factor and a clock
  factor and reuse the clocked product machinery directly.
* block_threaded_walk: cut the grid into blocks of side alpha, sweep a
  clock band inside each block, and join consecutive blocks with
  three-leg detour segments through the margins. The virtual clock
  label keeps counting across blocks, so the threaded trajectory
  behaves like a walk on [alpha]^(d-1) x [L].
* walk2d_improved: the two-dimensional construction that cuts [n]^2
  into n^(2/5) square blocks and snakes through them, one block per
  time step, with small random offsets inside each block.

All trajectories are materialized with their induced functions; the
induced function is always largest off the trajectory (distance from
the start plus a constant), so the single local minimum sits at the
trajectory's end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import GraphError, Vertex, grid, hamilton_path, line
from .clocked import PathInstance, generate_walk, grid_cycling_walk
from .oracle import CountingOracle, QueryLedger


def iroot(x: int, k: int) -> int:
    """Floor k-th root of a nonnegative integer, exactly."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0, k >= 1")
    if k == 1 or x in (0, 1):
        return x
    r = int(round(x ** (1.0 / k)))
    while r > 0 and r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class GridWalkConfig:
    """Configuration for the grid generators: integer mode sets m, block
    mode sets the cut exponent r (a rational in (0,1); alpha = floor(n^r),
    beta = floor(n^(1-r)))."""

    n: int
    d: int
    seed: int
    m: int = 0
    r: Fraction = Fraction(0)

    def __post_init__(self):
        if self.n < 2 or self.d < 2:
            raise GraphError("grid config needs n >= 2, d >= 2")
        int_mode = self.m > 0
        block_mode = self.r != 0
        if int_mode == block_mode:
            raise GraphError("set exactly one of m (integer mode) and r (block mode)")
        if int_mode and not 1 <= self.m <= self.d - 1:
            raise GraphError(f"integer mode needs 1 <= m <= d-1, got m={self.m}")
        if block_mode and not 0 < self.r < 1:
            raise GraphError(f"block mode needs 0 < r < 1, got r={self.r}")


def block_preset_r(d: int, mode: str) -> Fraction:
    """The cut exponents the asymptotic analysis tunes per dimension,
    with the vanishing log-log corrections dropped."""
    if mode == "randomized":
        if d >= 4:
            return Fraction(d, 2 * d - 2)
        return {2: Fraction(2, 3), 3: Fraction(3, 4)}[d]
    if mode == "quantum":
        if d >= 6:
            return Fraction(2 * d, 3 * d - 3)
        if d == 5:
            return Fraction(5, 6)
        return Fraction(d, d + 1)
    raise GraphError(f"mode must be randomized or quantum, got {mode!r}")


def grid_walk_integer(n: int, d: int, m: int, seed: int) -> PathInstance:
    """Clocked instance on [n]^d: coordinate-cycling clamped walk on the
    first m axes, Hamilton-path clock on the remaining d-m."""
    cfg = GridWalkConfig(n=n, d=d, seed=seed, m=m)
    gw = grid(n, m) if m >= 2 else line(n)
    gc = grid(n, d - m) if d - m >= 2 else line(n)
    T = (n ** (d - m) - 1) // 2
    inst = generate_walk(gw, gc, grid_cycling_walk(n, m), T, cfg.seed)
    inst.origin = {"kind": "grid-int-m", "n": n, "d": d, "m": m, "seed": seed}
    return inst


# ---------------------------------------------------------------------------
# block threading


@dataclass
class BlockWalkState:
    """Generator-side cursor: current block (Hamilton position), offsets
    inside it, physical clock position, and the virtual label count."""

    block: tuple
    offsets: tuple
    clock: int
    sweep: int
    label: int


@dataclass
class BlockSegment:
    """One block-changing detour: its frozen virtual label and vertices
    in trajectory order (boundary point and landing point excluded)."""

    after_sweep: int
    label: int
    axis: int
    direction: int
    depth: int
    vertices: list


class BlockThreadedInstance:
    """Block-threaded trajectory on [n]^d and its induced function.

    Within block k (k-th vertex of the Hamilton path on [beta]^(d-1))
    the clock coordinate sweeps a band of `span` positions, alternating
    direction per block; each odd band position hosts one walk move.
    Between blocks the trajectory detours through the clock margin on a
    three-leg segment while the virtual label stays frozen. Values step
    down in gaps of value_gap per label, leaving room for the at most
    4*alpha - 2 segment vertices squeezed between two labels.
    """

    def __init__(self, cfg: GridWalkConfig):
        if cfg.r == 0:
            raise GraphError("block threading needs a block-mode config")
        self.cfg = cfg
        n, d = cfg.n, cfg.d
        p, q = cfg.r.numerator, cfg.r.denominator
        self.alpha = iroot(n ** p, q)
        self.beta = iroot(n ** (q - p), q)
        if self.alpha < 2 or self.beta < 2:
            raise GraphError(
                f"degenerate cut: alpha={self.alpha}, beta={self.beta} (need both >= 2)"
            )
        self.nprime = self.alpha * self.beta
        band = self.nprime - 2 * self.alpha
        if band < 3:
            raise GraphError(
                f"clock band has {band} positions; needs >= 3 (raise n or adjust r)"
            )
        # an odd span makes walk moves land exactly on the band ends;
        # an even band loses its last position to keep that alignment
        self.span = band if band % 2 == 1 else band - 1
        self.blocks = list(hamilton_path(self.beta, d - 1))
        self.block_pos = {b: i for i, b in enumerate(self.blocks)}
        self.L = self.span * len(self.blocks)
        self.value_gap = 4 * (self.alpha + 1)
        self.graph = grid(n, d)
        self.seed = cfg.seed
        self.segments = []
        self.path = []
        self.fmap = {}
        self._generate()
        self.start = self.path[0]
        self.end = self.path[-1]

    # -- construction ------------------------------------------------------

    def base(self, label: int) -> int:
        return self.value_gap * (self.L - label)

    def _phys(self, block: tuple, offsets: tuple, clock: int) -> Vertex:
        return tuple(
            (block[i] - 1) * self.alpha + offsets[i] for i in range(len(block))
        ) + (clock,)

    def _emit(self, v: Vertex, value: int) -> None:
        self.path.append(v)
        self.fmap.setdefault(v, value)

    def _generate(self) -> None:
        a, d = self.alpha, self.cfg.d
        rng = random.Random(self.cfg.seed)
        y = (1,) * (d - 1)
        move_idx = 0
        for k, blk in enumerate(self.blocks):
            dirn = 1 if k % 2 == 0 else -1
            c = a + 1 if dirn == 1 else a + self.span
            for pos in range(1, self.span + 1):
                label = k * self.span + (pos - 1)
                if pos % 2 == 1:
                    self._emit(self._phys(blk, y, c), self.base(label))
                    axis = move_idx % (d - 1)
                    move_idx += 1
                    lo = max(y[axis] - 1, 1)
                    hi = min(y[axis] + 1, a)
                    step = lo if rng.randrange(2) == 0 else hi
                    y = y[:axis] + (step,) + y[axis + 1:]
                    self._emit(self._phys(blk, y, c), self.base(label) - 1)
                else:
                    self._emit(self._phys(blk, y, c), self.base(label))
                if pos < self.span:
                    c += dirn
            if k == len(self.blocks) - 1:
                break
            y = self._segment(k, blk, self.blocks[k + 1], y, c, dirn)

    def _segment(self, k: int, blk: tuple, nxt: tuple, y: tuple, c: int,
                 dirn: int) -> tuple:
        axis = next(i for i in range(len(blk)) if blk[i] != nxt[i])
        b = nxt[axis] - blk[axis]
        yj = y[axis]
        depth = (self.alpha + 1 - yj) if b == 1 else yj
        label = (k + 1) * self.span - 1
        start_val = self.base(label) - 1
        seg = BlockSegment(k, label, axis, b, depth, [])
        q = 0

        def emit(v):
            nonlocal q
            q += 1
            seg.vertices.append(v)
            self._emit(v, start_val - q)

        for i in range(1, depth + 1):
            emit(self._phys(blk, y, c + dirn * i))
        xj = (blk[axis] - 1) * self.alpha + yj
        margin_clock = c + dirn * depth
        base_vertex = self._phys(blk, y, margin_clock)
        for s in range(1, 2 * depth):
            v = list(base_vertex)
            v[axis] = xj + b * s
            emit(tuple(v))
        y = y[:axis] + (self.alpha + 1 - yj,) + y[axis + 1:]
        for i in range(depth - 1, 0, -1):
            emit(self._phys(nxt, y, c + dirn * i))
        self.segments.append(seg)
        return y

    # -- the induced function ----------------------------------------------

    def eval_fx(self, v: Vertex) -> int:
        got = self.fmap.get(v)
        if got is not None:
            return got
        return self.graph.distance_between(v, self.start) + self.value_gap * self.L

    def membership(self, v: Vertex) -> bool:
        return v in self.fmap

    def value_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.eval_fx, ledger, "value")

    def membership_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.membership, ledger, "membership")

    def validate(self) -> None:
        for u, w in zip(self.path, self.path[1:]):
            if u != w and self.graph.distance_between(u, w) != 1:
                raise GraphError("trajectory has a non-adjacent step")

    def to_json(self) -> dict:
        return {
            "kind": "grid-block",
            "n": self.cfg.n,
            "d": self.cfg.d,
            "r": [self.cfg.r.numerator, self.cfg.r.denominator],
            "seed": self.seed,
        }


def block_threaded_walk(cfg: GridWalkConfig) -> BlockThreadedInstance:
    return BlockThreadedInstance(cfg)


def reduce_query_block(inst: BlockThreadedInstance, v: Vertex,
                       membership: CountingOracle) -> int:
    """Value of the block-threaded function via at most two membership
    queries, using only public structure (cut sizes, block order, value
    schedule) plus the oracle's yes/no answers."""
    a, span = inst.alpha, inst.span
    on_path = membership.query_membership(v)
    if not on_path:
        return (inst.graph.distance_between(v, inst.start)
                + inst.value_gap * inst.L)
    c = v[-1]
    walkx = v[:-1]
    band_lo, band_hi = a + 1, a + span
    if band_lo <= c <= band_hi:
        blkidx = tuple((x - 1) // a + 1 for x in walkx)
        k = inst.block_pos[blkidx]
        dirn = 1 if k % 2 == 0 else -1
        pos = (c - a) if dirn == 1 else (band_hi - c + 1)
        label = k * span + (pos - 1)
        if pos % 2 == 0:
            return inst.base(label)
        if k == 0 and pos == 1:
            if walkx == inst.start[:-1]:
                return inst.base(0)
            return inst.base(0) - 1
        probe = walkx + (c - dirn,)
        if membership.query_membership(probe):
            return inst.base(label)
        return inst.base(label) - 1
    return _margin_value(inst, v, c, walkx)


def _margin_value(inst: BlockThreadedInstance, v: Vertex, c: int,
                  walkx: tuple) -> int:
    """Classify an on-path margin vertex onto its detour segment.

    The margin side fixes the parity of the sweep whose segment can own
    the vertex, and the leg tests below are mutually exclusive: a depth
    above the vertex's own offset-derived reach rules out the vertical
    legs, and the horizontal leg needs the depth to equal that reach.
    """
    a, span = inst.alpha, inst.span
    top = c > a + span
    o = c - (a + span) if top else (a + 1) - c
    blkidx = tuple((x - 1) // a + 1 for x in walkx)
    pos = inst.block_pos[blkidx]
    hits = []
    # leaving parse: v sits in the block whose sweep just ended
    k = pos
    if k < len(inst.blocks) - 1 and (k % 2 == 0) == top:
        nxt = inst.blocks[k + 1]
        axis = next(i for i in range(len(blkidx)) if blkidx[i] != nxt[i])
        b = nxt[axis] - blkidx[axis]
        yj = walkx[axis] - (blkidx[axis] - 1) * a
        e = (a + 1 - yj) if b == 1 else yj
        if o <= e:
            hits.append((k, o))
        # leading stretch of the horizontal leg, still inside this block
        e2 = o
        y_boundary = (a + 1 - e2) if b == 1 else e2
        s = b * (walkx[axis] - ((blkidx[axis] - 1) * a + y_boundary))
        if 1 <= s <= e2 - 1:
            hits.append((k, e2 + s))
    # entering parse: v sits in the block the segment lands in
    k = pos - 1
    if k >= 0 and (k % 2 == 0) == top:
        prev = inst.blocks[k]
        axis = next(i for i in range(len(blkidx)) if blkidx[i] != prev[i])
        b = blkidx[axis] - prev[axis]
        oj = walkx[axis] - (blkidx[axis] - 1) * a
        yj = a + 1 - oj
        e = (a + 1 - yj) if b == 1 else yj
        if o <= e - 1:
            hits.append((k, 4 * e - 1 - o))
        e2 = o
        y_boundary = (a + 1 - e2) if b == 1 else e2
        s = b * (walkx[axis] - ((prev[axis] - 1) * a + y_boundary))
        if e2 <= s <= 2 * e2 - 1:
            hits.append((k, e2 + s))
    if len(hits) != 1:
        raise GraphError(f"margin vertex {v} has {len(hits)} segment parses")
    k, q = hits[0]
    label = (k + 1) * span - 1
    return inst.base(label) - 1 - q


# ---------------------------------------------------------------------------
# improved 2-D walk


def valid_walk2d_n(n: int) -> int:
    """Smallest valid size >= n: a fifth power s^5 with s = 3 (mod 4)."""
    s = iroot(max(n - 1, 0), 5) + 1
    while s % 4 != 3:
        s += 1
    while s ** 5 < n:
        s += 4
    return s ** 5


@dataclass
class TwoDStep:
    t: int
    col: int
    row: int
    offset: tuple


class TwoDWalkInstance:
    """Snake-through-blocks trajectory on [n]^2 with per-block values.

    The grid is cut into s x s blocks of side Q = s^4 (n = s^5). Block
    bands are traversed boustrophedon: two rows of blocks per band,
    columns left-to-right on even bands and back on odd ones. Each
    time step hops to the next block with a fresh small offset (uniform
    in [s]) in the moving coordinate, tracing an L of grid edges. The
    value of an on-path vertex depends only on its block, so it never
    needs the step history.
    """

    def __init__(self, n: int, seed: int):
        s = iroot(n, 5)
        if s ** 5 != n or s % 4 != 3:
            raise GraphError(
                f"n must be a fifth power s^5 with s = 3 (mod 4); "
                f"nearest valid is {valid_walk2d_n(n)}"
            )
        self.n = n
        self.s = s
        self.Q = s ** 4
        self.seed = seed
        self.graph = grid(n, 2)
        self.steps = []
        self.block_time = {}
        total = s * (s - 1)
        for t in range(1, total + 2):
            cr = self._block_of_t(t)
            if cr in self.block_time:
                raise GraphError("block schedule repeats a block")
            self.block_time[cr] = t
        self.path = []
        self.fmap = {}
        self._generate(random.Random(seed))
        self.start = self.path[0]
        self.end = self.path[-1]

    def _t_parts(self, t: int) -> tuple:
        s = self.s
        r, tp = divmod(t - 1, 2 * s)
        return r, tp + 1

    def _block_of_t(self, t: int) -> tuple:
        s = self.s
        r, tp = self._t_parts(t)
        half = (tp + 1) // 2
        col = half if r % 2 == 0 else s - half + 1
        u = 0 if tp % 4 in (0, 1) else 1
        return col, 2 * r + 1 + u

    def block_of(self, v: Vertex) -> tuple:
        return (v[0] - 1) // self.Q + 1, (v[1] - 1) // self.Q + 1

    def value_at(self, v: Vertex) -> int:
        """Block-determined on-path value; caller guarantees membership."""
        t = self.block_time[self.block_of(v)]
        r, tp = self._t_parts(t)
        Q = self.Q
        xo = (v[0] - 1) % Q + 1
        yo = (v[1] - 1) % Q + 1
        sx = -1 if r % 2 == 0 else 1
        sy = 1 if (tp + 1) // 2 % 2 == 0 else -1
        return -2 * Q * (t - 1) + sx * xo + sy * yo

    def _emit_line(self, frm: Vertex, to: Vertex) -> None:
        if frm[0] == to[0]:
            stepv = 1 if to[1] > frm[1] else -1
            cur = frm
            while cur != to:
                cur = (cur[0], cur[1] + stepv)
                self.path.append(cur)
                self.fmap[cur] = self.value_at(cur)
        else:
            steph = 1 if to[0] > frm[0] else -1
            cur = frm
            while cur != to:
                cur = (cur[0] + steph, cur[1])
                self.path.append(cur)
                self.fmap[cur] = self.value_at(cur)

    def _generate(self, rng: random.Random) -> None:
        s, Q = self.s, self.Q
        cur = (1, 1)
        self.path.append(cur)
        self.fmap[cur] = self.value_at(cur)
        total = s * (s - 1)
        for t in range(1, total + 1):
            r, tp = self._t_parts(t)
            if tp % 2 == 1:
                col, row = self._block_of_t(t)
                x2 = rng.randint(1, s)
                target = ((col - 1) * Q + x2, cur[1])
                self.steps.append(TwoDStep(t, col, row,
                                           (x2, (cur[1] - 1) % Q + 1)))
            else:
                c = 1 if tp == 2 * s else 0
                col, row = self._block_of_t(t + c)
                y2 = rng.randint(1, s)
                target = (cur[0], (row - 1) * Q + y2)
                self.steps.append(TwoDStep(t + c, col, row,
                                           ((cur[0] - 1) % Q + 1, y2)))
            self._emit_line(cur, target)
            cur = target

    def eval_fx(self, v: Vertex) -> int:
        if v in self.fmap:
            return self.fmap[v]
        return abs(v[0] - 1) + abs(v[1] - 1)

    def membership(self, v: Vertex) -> bool:
        return v in self.fmap

    def value_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.eval_fx, ledger, "value")

    def membership_oracle(self, ledger: QueryLedger) -> CountingOracle:
        return CountingOracle(self.membership, ledger, "membership")

    def validate(self) -> None:
        for u, w in zip(self.path, self.path[1:]):
            if abs(u[0] - w[0]) + abs(u[1] - w[1]) != 1:
                raise GraphError("2-D trajectory has a non-adjacent step")

    def to_json(self) -> dict:
        return {"kind": "grid-2d-improved", "n": self.n, "seed": self.seed}


def walk2d_improved(n: int, seed: int) -> TwoDWalkInstance:
    return TwoDWalkInstance(n, seed)


def eval_fx_2d(inst: TwoDWalkInstance, v: Vertex) -> int:
    inst.graph.check_vertex(v)
    return inst.eval_fx(v)

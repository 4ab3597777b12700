"""Implicit graph families: lines, grids, hypercubes, and box products.

Vertices are tuples of 1-based integer coordinates. Families are implicit:
adjacency and the metric come from closed forms, never from stored edge
lists, so a graph with millions of vertices costs nothing to describe.
Balls, spheres, and boundaries materialize on demand via BFS.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Iterator, Sequence

Vertex = tuple  # tuple of ints, one per axis, each in [1..k_axis]


class GraphError(ValueError):
    pass


class VertexSet:
    """Ordered, deduplicated collection of vertices with O(1) membership."""

    __slots__ = ("_items", "_index")

    def __init__(self, items: Iterable[Vertex] = ()):
        self._items: list[Vertex] = []
        self._index: set[Vertex] = set()
        for v in items:
            self.add(v)

    def add(self, v: Vertex) -> bool:
        """Append v if new; returns True iff it was added."""
        if v in self._index:
            return False
        self._index.add(v)
        self._items.append(v)
        return True

    def __contains__(self, v) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __repr__(self):
        return f"VertexSet({self._items!r})"


class GraphFamily:
    """Base class; concrete families implement the implicit interface."""

    kind: str

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def vertex_count(self) -> int:
        raise NotImplementedError

    @property
    def max_degree(self) -> int:
        raise NotImplementedError

    @property
    def diameter(self) -> int:
        raise NotImplementedError

    def contains(self, v: Vertex) -> bool:
        raise NotImplementedError

    def neighbors_of(self, v: Vertex) -> list[Vertex]:
        raise NotImplementedError

    def distance_between(self, u: Vertex, v: Vertex) -> int:
        raise NotImplementedError

    def vertices(self) -> Iterator[Vertex]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def check_vertex(self, v: Vertex) -> None:
        if not self.contains(v):
            raise GraphError(f"vertex {v!r} not in {self.kind} graph")


class Grid(GraphFamily):
    """[n]^d with edges between vertices differing by 1 in one coordinate.

    Covers three spellings of the same family: line(n) is d=1,
    hypercube(k,l) is the general box, and hypercube(2,l) is the Boolean
    cube (differ-by-1 on a 2-point axis is a bit flip). The kind label is
    kept so serialized instances round-trip under their original name.
    """

    __slots__ = ("n", "d", "kind")

    def __init__(self, n: int, d: int, kind: str = "grid"):
        if n < 2 or d < 1:
            raise GraphError(f"grid needs n >= 2, d >= 1 (got n={n}, d={d})")
        self.n = n
        self.d = d
        self.kind = kind

    @property
    def dimension(self) -> int:
        return self.d

    @property
    def vertex_count(self) -> int:
        return self.n ** self.d

    @property
    def max_degree(self) -> int:
        return self.d * (2 if self.n >= 3 else 1)

    @property
    def diameter(self) -> int:
        return (self.n - 1) * self.d

    def contains(self, v: Vertex) -> bool:
        return (
            isinstance(v, tuple)
            and len(v) == self.d
            and all(isinstance(x, int) and 1 <= x <= self.n for x in v)
        )

    def neighbors_of(self, v: Vertex) -> list[Vertex]:
        self.check_vertex(v)
        out = []
        for i, x in enumerate(v):
            if x > 1:
                out.append(v[:i] + (x - 1,) + v[i + 1:])
            if x < self.n:
                out.append(v[:i] + (x + 1,) + v[i + 1:])
        return out

    def distance_between(self, u: Vertex, v: Vertex) -> int:
        self.check_vertex(u)
        self.check_vertex(v)
        return sum(abs(a - b) for a, b in zip(u, v))

    def vertices(self) -> Iterator[Vertex]:
        from itertools import product as iproduct

        return iproduct(range(1, self.n + 1), repeat=self.d)

    def center(self) -> Vertex:
        return ((self.n + 1) // 2,) * self.d

    def to_json(self) -> dict:
        if self.kind == "line":
            return {"kind": "line", "n": self.n}
        if self.kind == "hypercube":
            return {"kind": "hypercube", "k": self.n, "l": self.d}
        return {"kind": "grid", "n": self.n, "d": self.d}

    def __repr__(self):
        return f"Grid(n={self.n}, d={self.d}, kind={self.kind!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and (self.n, self.d, self.kind) == (other.n, other.d, other.kind)
        )

    def __hash__(self):
        return hash(("Grid", self.n, self.d, self.kind))


class Product(GraphFamily):
    """Box product: vertices are concatenated factor tuples; an edge moves
    exactly one factor along one of that factor's edges (no diagonals)."""

    __slots__ = ("factors", "_offsets")
    kind = "product"

    def __init__(self, *factors: GraphFamily):
        if len(factors) < 2:
            raise GraphError("product needs at least two factors")
        self.factors = tuple(factors)
        offs = [0]
        for g in factors:
            offs.append(offs[-1] + g.dimension)
        self._offsets = tuple(offs)

    def split(self, v: Vertex) -> tuple[Vertex, ...]:
        o = self._offsets
        return tuple(v[o[i]:o[i + 1]] for i in range(len(self.factors)))

    @property
    def dimension(self) -> int:
        return self._offsets[-1]

    @property
    def vertex_count(self) -> int:
        count = 1
        for g in self.factors:
            count *= g.vertex_count
        return count

    @property
    def max_degree(self) -> int:
        return sum(g.max_degree for g in self.factors)

    @property
    def diameter(self) -> int:
        return sum(g.diameter for g in self.factors)

    def contains(self, v: Vertex) -> bool:
        if not isinstance(v, tuple) or len(v) != self.dimension:
            return False
        return all(g.contains(p) for g, p in zip(self.factors, self.split(v)))

    def neighbors_of(self, v: Vertex) -> list[Vertex]:
        self.check_vertex(v)
        parts = self.split(v)
        out = []
        for i, g in enumerate(self.factors):
            lo = self._offsets[i]
            hi = self._offsets[i + 1]
            for w in g.neighbors_of(parts[i]):
                out.append(v[:lo] + w + v[hi:])
        return out

    def distance_between(self, u: Vertex, v: Vertex) -> int:
        self.check_vertex(u)
        self.check_vertex(v)
        return sum(
            g.distance_between(a, b)
            for g, a, b in zip(self.factors, self.split(u), self.split(v))
        )

    def vertices(self) -> Iterator[Vertex]:
        from itertools import product as iproduct

        for combo in iproduct(*(g.vertices() for g in self.factors)):
            yield sum(combo, ())

    def to_json(self) -> dict:
        return {"kind": "product", "factors": [g.to_json() for g in self.factors]}

    def __repr__(self):
        return f"Product{self.factors!r}"

    def __eq__(self, other):
        return isinstance(other, Product) and self.factors == other.factors

    def __hash__(self):
        return hash(("Product", self.factors))


def line(n: int) -> Grid:
    return Grid(n, 1, "line")


def hypercube(k: int, l: int) -> Grid:
    return Grid(k, l, "hypercube")


def grid(n: int, d: int) -> Grid:
    return Grid(n, d, "grid")


def product(*factors: GraphFamily) -> Product:
    return Product(*factors)


def graph_from_json(obj: dict) -> GraphFamily:
    kind = obj.get("kind")
    if kind == "line":
        return line(obj["n"])
    if kind == "hypercube":
        return hypercube(obj["k"], obj["l"])
    if kind == "grid":
        return grid(obj["n"], obj["d"])
    if kind == "product":
        return product(*(graph_from_json(f) for f in obj["factors"]))
    raise GraphError(f"unknown graph kind {kind!r}")


def to_bits(v: Vertex) -> tuple:
    """0/1 view of a hypercube(2,l) vertex (coordinate 1 -> bit 0)."""
    assert all(x in (1, 2) for x in v), "bit view needs coordinates in {1,2}"
    return tuple(x - 1 for x in v)


def from_bits(bits: Sequence[int]) -> Vertex:
    assert all(b in (0, 1) for b in bits), "bits must be 0/1"
    return tuple(b + 1 for b in bits)


def neighbors(g: GraphFamily, v: Vertex) -> list[Vertex]:
    return g.neighbors_of(v)


def distance(g: GraphFamily, u: Vertex, v: Vertex) -> int:
    return g.distance_between(u, v)


def ball(g: GraphFamily, v: Vertex, k: int) -> VertexSet:
    """{u : |u - v| <= k}, materialized by BFS in layer order."""
    assert k >= 0, "radius must be nonnegative"
    g.check_vertex(v)
    out = VertexSet([v])
    frontier = [v]
    for _ in range(k):
        nxt = []
        for u in frontier:
            for w in g.neighbors_of(u):
                if out.add(w):
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return out


def sphere(g: GraphFamily, v: Vertex, m: int) -> VertexSet:
    """{u : |u - v| = m}, the BFS frontier at depth m."""
    assert m >= 0, "radius must be nonnegative"
    g.check_vertex(v)
    if m == 0:
        return VertexSet([v])
    seen = {v}
    frontier = [v]
    for _ in range(m):
        nxt = []
        for u in frontier:
            for w in g.neighbors_of(u):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            return VertexSet()
        frontier = nxt
    return VertexSet(frontier)


def _axis_distance_counts(n: int, x: int, k: int) -> list[int]:
    # counts[s] = #{u in [1..n] : |u - x| = s}, s = 0..k
    counts = [0] * (k + 1)
    counts[0] = 1
    for s in range(1, k + 1):
        c = 0
        if x - s >= 1:
            c += 1
        if x + s <= n:
            c += 1
        counts[s] = c
    return counts


def _grid_ball_size(n: int, coords: Sequence[int], k: int) -> int:
    # convolution of per-axis distance counts, truncated at total distance k
    acc = [1] + [0] * k
    for x in coords:
        axis = _axis_distance_counts(n, x, k)
        nxt = [0] * (k + 1)
        for s1, a in enumerate(acc):
            if a == 0:
                continue
            for s2 in range(0, k + 1 - s1):
                if axis[s2]:
                    nxt[s1 + s2] += a * axis[s2]
        acc = nxt
    return sum(acc)


def ball_size(g: GraphFamily, v: Vertex, k: int) -> int:
    """|ball(g, v, k)|; closed form on grids, BFS elsewhere."""
    assert k >= 0
    g.check_vertex(v)
    if isinstance(g, Grid):
        return _grid_ball_size(g.n, v, k)
    if isinstance(g, Product) and all(isinstance(f, Grid) for f in g.factors):
        # per-axis convolution works across factor boundaries too: the
        # product metric is the coordinate-wise sum, same as one big box
        acc = [1] + [0] * k
        for f, part in zip(g.factors, g.split(v)):
            for x in part:
                axis = _axis_distance_counts(f.n, x, k)
                nxt = [0] * (k + 1)
                for s1, a in enumerate(acc):
                    if a == 0:
                        continue
                    for s2 in range(0, k + 1 - s1):
                        if axis[s2]:
                            nxt[s1 + s2] += a * axis[s2]
                acc = nxt
        return sum(acc)
    return len(ball(g, v, k))


_SCAN_LIMIT = 200_000


def max_ball_size(g: GraphFamily, k: int) -> int:
    """max over v of ball_size(g, v, k); the growth-rate knob of the
    runtime bounds. Grids use the center vertex (validated against
    exhaustive scans in the test suite); other families scan."""
    assert k >= 0
    if isinstance(g, Grid):
        return _grid_ball_size(g.n, g.center(), k)
    if isinstance(g, Product) and all(isinstance(f, Grid) for f in g.factors):
        center = sum((f.center() for f in g.factors), ())
        return ball_size(g, center, k)
    if g.vertex_count > _SCAN_LIMIT:
        raise GraphError(
            f"max_ball_size scan over {g.vertex_count} vertices refused"
        )
    return max(ball_size(g, v, k) for v in g.vertices())


def boundary(g: GraphFamily, S: VertexSet) -> VertexSet:
    """Vertices of S with at least one neighbor outside S."""
    out = VertexSet()
    for u in S:
        if any(w not in S for w in g.neighbors_of(u)):
            out.add(u)
    return out


def hamilton_successor(k: int, l: int, v: Vertex, direction: int = 1):
    """Next vertex on the inductive Hamilton path over [k]^l, or None at
    the end. direction=-1 walks the same path backwards.

    The path fixes the last coordinate and snakes the (l-1)-dimensional
    path below it, reversing on every bump of the last coordinate, so
    consecutive vertices always differ by 1 in exactly one coordinate.
    """
    assert direction in (1, -1)
    if not (len(v) == l and all(1 <= x <= k for x in v)):
        raise GraphError(f"vertex {v!r} not in [{k}]^{l}")
    if l == 1:
        nxt = v[0] + direction
        return (nxt,) if 1 <= nxt <= k else None
    last = v[-1]
    sub_dir = direction if last % 2 == 1 else -direction
    sub = hamilton_successor(k, l - 1, v[:-1], sub_dir)
    if sub is not None:
        return sub + (last,)
    bumped = last + direction
    return v[:-1] + (bumped,) if 1 <= bumped <= k else None


def hamilton_path(k: int, l: int) -> Iterator[Vertex]:
    """Iterate the full Hamilton path over [k]^l from (1,...,1)."""
    v: Vertex | None = (1,) * l
    while v is not None:
        yield v
        v = hamilton_successor(k, l, v)


def is_local_min(g: GraphFamily, f: Callable[[Vertex], int], v: Vertex) -> bool:
    """Non-strict local minimum: f(v) <= f(w) for every neighbor w."""
    fv = f(v)
    return all(fv <= f(w) for w in g.neighbors_of(v))


def bfs_distance(g: GraphFamily, u: Vertex, v: Vertex) -> int:
    """Shortest-path length by plain BFS. Slow; used as the oracle that
    the closed-form metric is checked against."""
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for a in frontier:
            for w in g.neighbors_of(a):
                if w == v:
                    return depth
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    raise GraphError(f"no path from {u!r} to {v!r}")

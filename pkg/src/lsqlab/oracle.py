"""Query-counting oracles and the two cost models.

Every f evaluation and every membership test goes through a CountingOracle
that charges a shared QueryLedger before returning. The quantum model does
not simulate amplitudes: batch minimum finding is priced by the square-root
cost formula and its failure mode is reproduced by explicit error
injection, which is all the complexity accounting ever observes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graphs import Vertex


class OracleError(ValueError):
    pass


@dataclass
class QueryLedger:
    value_queries: int = 0
    membership_queries: int = 0
    charged_cost: int = 0
    phases: dict = field(default_factory=dict)

    def charge(self, kind: str, phase: str, cost: int = 1) -> None:
        assert cost >= 0
        if kind == "value":
            self.value_queries += cost
        elif kind == "membership":
            self.membership_queries += cost
        else:
            raise OracleError(f"unknown charge kind {kind!r}")
        self.charged_cost += cost
        self.phases[phase] = self.phases.get(phase, 0) + cost

    def to_json(self) -> dict:
        return {
            "value_queries": self.value_queries,
            "membership_queries": self.membership_queries,
            "charged_cost": self.charged_cost,
            "phases": dict(self.phases),
        }


@dataclass
class CostModel:
    """kind "unit" charges one per element examined; kind "quantum"
    charges the batched min-find formula and injects errors at rate eps.
    The rng field is the error-injection stream (quantum only)."""

    kind: str = "unit"
    c_dh: float = 1.0
    rng: random.Random | None = None

    def __post_init__(self):
        if self.kind not in ("unit", "quantum"):
            raise OracleError(f"unknown cost model {self.kind!r}")
        assert self.c_dh > 0, "cost constant must be positive"


def unit_model() -> CostModel:
    return CostModel("unit")


def quantum_model(seed=None, c_dh: float = 1.0) -> CostModel:
    return CostModel("quantum", c_dh=c_dh, rng=random.Random(seed))


def quantum_minfind_cost(k: int, eps: float, c_dh: float = 1.0) -> int:
    """ceil(c_dh * sqrt(K) * max(1, ln(1/eps))) for a min-find over K
    elements at error probability eps. Natural log: the sampling analysis
    behind the bounds needs (1-p)^s <= eps, which is an ln statement."""
    assert k >= 1
    assert 0 < eps < 1
    return math.ceil(c_dh * math.sqrt(k) * max(1.0, math.log(1.0 / eps)))


class CountingOracle:
    """Black-box wrapper around one underlying function.

    role "value": fn maps vertices to integers, accessed via query_value.
    role "membership": fn maps vertices to booleans, via query_membership.
    `known` caches values already paid for; reading it is free because the
    algorithm may remember what it queried. `peek` bypasses the ledger and
    exists only for post-hoc verification, never for algorithm logic.
    """

    __slots__ = ("fn", "ledger", "role", "phase", "known")

    def __init__(self, fn: Callable, ledger: QueryLedger | None = None,
                 role: str = "value", phase: str = "main"):
        if role not in ("value", "membership"):
            raise OracleError(f"unknown oracle role {role!r}")
        self.fn = fn
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.role = role
        self.phase = phase
        self.known: dict[Vertex, int] = {}

    def query_value(self, v: Vertex) -> int:
        assert self.role == "value", "not a value oracle"
        val = self.fn(v)
        self.ledger.charge("value", self.phase, 1)
        self.known[v] = val
        return val

    def query_membership(self, v: Vertex) -> bool:
        assert self.role == "membership", "not a membership oracle"
        res = bool(self.fn(v))
        self.ledger.charge("membership", self.phase, 1)
        return res

    def peek(self, v: Vertex) -> int:
        return self.fn(v)


def query_value(o: CountingOracle, v: Vertex) -> int:
    return o.query_value(v)


def query_membership(o: CountingOracle, v: Vertex) -> bool:
    return o.query_membership(v)


def min_find(o: CountingOracle, S: Sequence[Vertex], eps: float,
             model: CostModel, rng: random.Random | None = None) -> Vertex:
    """Minimum-value element of S under the given cost model.

    Unit model: queries every element (charge |S|), exact answer. Quantum
    model: charges quantum_minfind_cost(|S|, eps); with probability eps the
    answer is replaced by a uniform element of S (the true minimum is
    computed internally without extra charge). Ties break to the first
    occurrence in S's order either way. The value of the returned vertex
    lands in o.known, since the procedure necessarily learned it.
    """
    k = len(S)
    if k == 0:
        raise OracleError("min_find over an empty set")
    if model.kind == "unit":
        best = None
        best_val = None
        for v in S:
            val = o.query_value(v)
            if best_val is None or val < best_val:
                best, best_val = v, val
        return best
    assert 0 < eps < 1, "quantum min_find needs 0 < eps < 1"
    stream = rng if rng is not None else model.rng
    if stream is None:
        raise OracleError("quantum min_find needs an rng stream")
    o.ledger.charge("value", o.phase, quantum_minfind_cost(k, eps, model.c_dh))
    best = None
    best_val = None
    for v in S:
        val = o.fn(v)
        if best_val is None or val < best_val:
            best, best_val = v, val
    if stream.random() < eps:
        wrong = S[stream.randrange(k)]
        o.known[wrong] = o.fn(wrong)
        return wrong
    o.known[best] = best_val
    return best

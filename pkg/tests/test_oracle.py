from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsqlab.graphs import line
from lsqlab.oracle import (
    CostModel,
    CountingOracle,
    OracleError,
    QueryLedger,
    min_find,
    quantum_minfind_cost,
    quantum_model,
    unit_model,
)


def test_ledger_accumulates():
    led = QueryLedger()
    led.charge("value", "sample", 3)
    led.charge("value", "descent")
    led.charge("membership", "reduce", 2)
    assert led.value_queries == 4
    assert led.membership_queries == 2
    assert led.charged_cost == 6
    assert led.phases == {"sample": 3, "descent": 1, "reduce": 2}
    assert led.to_json()["charged_cost"] == 6


def test_ledger_rejects_unknown_kind():
    with pytest.raises(OracleError):
        QueryLedger().charge("oracle", "x")


@given(st.lists(st.tuples(st.sampled_from(["value", "membership"]),
                          st.integers(0, 50)), max_size=40))
@settings(max_examples=50, deadline=None)
def test_ledger_conservation(charges):
    led = QueryLedger()
    for kind, cost in charges:
        led.charge(kind, "p", cost)
    assert led.charged_cost == led.value_queries + led.membership_queries
    assert led.charged_cost == sum(led.phases.values())


def test_cost_model_validation():
    with pytest.raises(OracleError):
        CostModel("probabilistic")
    with pytest.raises(AssertionError):
        CostModel("quantum", c_dh=0)
    assert unit_model().kind == "unit"
    assert quantum_model(seed=1).rng is not None


def test_oracle_roles_are_enforced():
    led = QueryLedger()
    value = CountingOracle(lambda v: 7, led, "value")
    member = CountingOracle(lambda v: True, led, "membership")
    assert value.query_value((1,)) == 7
    assert member.query_membership((1,)) is True
    with pytest.raises(AssertionError):
        value.query_membership((1,))
    with pytest.raises(AssertionError):
        member.query_value((1,))


def test_query_value_caches_and_peek_is_free():
    led = QueryLedger()
    o = CountingOracle(lambda v: sum(v), led, "value", phase="sample")
    assert o.query_value((2, 3)) == 5
    assert o.known[(2, 3)] == 5
    assert o.peek((9, 9)) == 18
    assert led.value_queries == 1
    assert led.phases == {"sample": 1}


def test_quantum_minfind_cost_frozen():
    # ceil(sqrt(K) * max(1, ln(1/eps))); ln(100) = 4.6051...
    assert quantum_minfind_cost(100, 1 / 100) == 47
    assert quantum_minfind_cost(100, 1 / 2) == 10  # ln 2 < 1 clamps to 1
    assert quantum_minfind_cost(1, 1 / 100) == 5
    assert quantum_minfind_cost(2, 1 / 100) == 7
    assert quantum_minfind_cost(64, 1 / 100, c_dh=2.0) == 74


def test_quantum_minfind_cost_validation():
    with pytest.raises(AssertionError):
        quantum_minfind_cost(0, 0.5)
    with pytest.raises(AssertionError):
        quantum_minfind_cost(10, 0.0)


def _values_oracle(values):
    led = QueryLedger()
    table = {(i,): v for i, v in enumerate(values)}
    return CountingOracle(table.__getitem__, led, "value"), led


def test_min_find_unit_exact():
    o, led = _values_oracle([5, 3, 9, 3])
    S = [(0,), (1,), (2,), (3,)]
    assert min_find(o, S, 0.5, unit_model()) == (1,)  # first of the tie
    assert led.charged_cost == 4
    assert led.value_queries == 4


def test_min_find_rejects_empty():
    o, _ = _values_oracle([1])
    with pytest.raises(OracleError):
        min_find(o, [], 0.5, unit_model())


def test_min_find_quantum_charges_formula():
    o, led = _values_oracle(list(range(16)))
    S = [(i,) for i in range(16)]
    model = quantum_model(seed=5)
    got = min_find(o, S, 1 / 100, model)
    assert led.charged_cost == quantum_minfind_cost(16, 1 / 100)
    assert got in S
    assert got in o.known


def test_min_find_quantum_error_rate_is_about_eps():
    S = [(i,) for i in range(10)]
    wrong = 0
    trials = 400
    model = quantum_model(seed=123)
    for _ in range(trials):
        o, _ = _values_oracle(list(range(10)))
        if min_find(o, S, 0.5, model) != (0,):
            wrong += 1
    # eps * (1 - 1/|S|) = 0.45 expected; seeded stream, no flake
    assert 0.35 <= wrong / trials <= 0.55


def test_min_find_quantum_needs_rng():
    o, _ = _values_oracle([1, 2])
    with pytest.raises(OracleError):
        min_find(o, [(0,), (1,)], 0.5, CostModel("quantum"))


def test_phase_attribution_on_graph_scan():
    g = line(4)
    led = QueryLedger()
    o = CountingOracle(lambda v: v[0], led, "value", phase="sample")
    for v in g.vertices():
        o.query_value(v)
    o.phase = "descent"
    o.query_value((1,))
    assert led.phases == {"sample": 4, "descent": 1}
    assert led.charged_cost == 5

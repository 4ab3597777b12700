from __future__ import annotations

import random

import pytest

from lsqlab.graphs import GraphError, grid, hypercube, line
from lsqlab.oracle import CountingOracle, QueryLedger, quantum_model, unit_model
from lsqlab.solvers import (
    ALGORITHMS,
    SolverConfig,
    _default_eps,
    default_sample_size,
    distance_within,
    n_below,
    sample_then_descend,
    solve,
    steepest_descent,
)


def random_injective(g, seed):
    """Seeded random bijection onto 0..N-1, the bench's 'random' shape."""
    vertices = list(g.vertices())
    ranks = list(range(len(vertices)))
    random.Random(seed).shuffle(ranks)
    table = dict(zip(vertices, ranks))
    return table.__getitem__


# --------------------------------------------------------------------------
# steepest descent


def test_steepest_ramp_exact_cost():
    rep = solve(line(5), lambda v: v[0], SolverConfig("steepest", start=(3,)))
    assert rep.output == (1,)
    assert rep.descent_length == 2
    assert rep.is_local_min
    assert rep.ledger.value_queries == 6
    assert rep.charged_cost == 6
    assert rep.trace == []


def test_steepest_plateau_stops_immediately():
    rep = solve(line(5), lambda v: 0, SolverConfig("steepest", start=(3,)))
    assert rep.output == (3,)
    assert rep.descent_length == 0
    assert rep.is_local_min
    # one query for the start plus one per neighbor
    assert rep.ledger.value_queries == 3


def test_steepest_tie_breaks_to_first_neighbor():
    table = {1: 5, 2: 1, 3: 9, 4: 1, 5: 5}
    rep = solve(line(5), lambda v: table[v[0]],
                SolverConfig("steepest", start=(3,)))
    # both neighbors of (3,) improve equally; (2,) is yielded first
    assert rep.output == (2,)
    assert rep.descent_length == 1
    assert rep.is_local_min


def test_steepest_rejects_foreign_start():
    with pytest.raises(GraphError):
        solve(line(5), lambda v: 0, SolverConfig("steepest", start=(9,)))


def test_steepest_quantum_plateau_recheck_cost():
    # one start query, one min-find charge over two neighbors (7), then
    # the exact re-check round (2) to rule out a min-find error
    rep = solve(line(5), lambda v: 0, SolverConfig("steepest-q", start=(3,)))
    assert rep.charged_cost == 10
    assert rep.descent_length == 0
    assert rep.is_local_min


def test_quantum_charge_scales_with_c_dh():
    rep = solve(line(5), lambda v: 0,
                SolverConfig("steepest-q", start=(3,), c_dh=2.0))
    assert rep.charged_cost == 17


@pytest.mark.parametrize("algo", ["steepest-q", "sample-q", "section5-q"])
def test_quantum_solvers_never_return_false_minimum(algo):
    g = grid(8, 2)
    for seed in range(6):
        rep = solve(g, random_injective(g, seed),
                    SolverConfig(algo, seed=seed))
        assert rep.is_local_min


# --------------------------------------------------------------------------
# sample then descend


def test_default_sample_sizes():
    assert default_sample_size(line(25), unit_model()) == 8
    assert default_sample_size(line(25), quantum_model(seed=0)) == 11


def test_sample_then_descend_phases():
    g = grid(8, 2)
    rep = solve(g, random_injective(g, 3), SolverConfig("sample-r", seed=3))
    assert rep.is_local_min
    assert rep.algorithm == "sample-r"
    assert set(rep.ledger.phases) == {"sample", "descent"}
    # the sample phase charges exactly the default sample size
    assert rep.ledger.phases["sample"] == default_sample_size(g, unit_model())


def test_sample_size_override():
    g = line(16)
    ledger = QueryLedger()
    oracle = CountingOracle(random_injective(g, 1), ledger, "value")
    rep = sample_then_descend(g, oracle, 5, unit_model(), seed=2)
    assert ledger.phases["sample"] == 5
    assert rep.is_local_min


def test_sample_rejects_empty():
    g = line(4)
    oracle = CountingOracle(lambda v: 0, QueryLedger(), "value")
    with pytest.raises(GraphError):
        sample_then_descend(g, oracle, 0, unit_model(), seed=0)


# --------------------------------------------------------------------------
# recursive range shrinking


def test_recursive_shrinks_range_each_round():
    g = line(64)
    rep = solve(g, random_injective(g, 7), SolverConfig("section5-r", seed=7))
    assert rep.is_local_min
    assert rep.trace, "diameter 63 must trigger at least one round"
    m = g.diameter
    for rt in rep.trace:
        assert rt.m_in == m
        assert 1 <= rt.m_out <= rt.m_in // 2
        assert rt.fallback in (None, "no-thin-radius", "inner-loop-cap")
        assert rt.u_size >= 1
        m = rt.m_out
    assert m <= 10
    assert set(rep.ledger.phases) <= {"anchor", "sample", "boundary", "descent"}
    assert rep.ledger.phases["descent"] >= 1


def test_recursive_skips_rounds_on_small_graphs():
    g = grid(4, 2)  # diameter 6 <= 10: straight to the descent
    rep = solve(g, random_injective(g, 0), SolverConfig("section5-r", seed=0))
    assert rep.trace == []
    assert rep.is_local_min


def test_recursive_requery_anchor_still_verified():
    g = grid(8, 2)
    for seed in (0, 4):
        rep = solve(g, random_injective(g, seed),
                    SolverConfig("section5-r", seed=seed, requery_anchor=True))
        assert rep.is_local_min


def test_recursive_tiny_j_max_falls_back():
    g = line(64)
    rep = solve(g, random_injective(g, 5),
                SolverConfig("section5-r", seed=5, j_max=1))
    assert rep.is_local_min
    for rt in rep.trace:
        if rt.fallback == "inner-loop-cap":
            assert rt.j_count == 1


def test_default_eps_guard():
    assert _default_eps(1024, 10) == pytest.approx(1 / 100)
    assert _default_eps(200, 200) == pytest.approx(1 / (200 * 7.643856), rel=1e-6)
    # degenerate diameters clamp to 2 instead of dividing by log2(1) = 0
    assert _default_eps(1, 10) == pytest.approx(1 / 10)


# --------------------------------------------------------------------------
# the front door


def test_config_rejects_unknown_algorithm():
    with pytest.raises(GraphError):
        SolverConfig("gradient")
    with pytest.raises(GraphError):
        SolverConfig("steepest", j_max=0)


def test_all_algorithms_are_dispatchable():
    g = line(17)
    fn = random_injective(g, 9)
    for algo in ALGORITHMS:
        rep = solve(g, fn, SolverConfig(algo, seed=9))
        assert rep.algorithm == algo
        assert rep.is_local_min


def test_same_seed_same_report():
    g = grid(8, 2)
    fn = random_injective(g, 2)
    a = solve(g, fn, SolverConfig("section5-r", seed=13))
    b = solve(g, fn, SolverConfig("section5-r", seed=13))
    assert a.to_json() == b.to_json()


def test_steepest_picks_seeded_start():
    g = line(33)
    fn = random_injective(g, 6)
    a = solve(g, fn, SolverConfig("steepest", seed=1))
    b = solve(g, fn, SolverConfig("steepest", seed=1))
    assert a.output == b.output
    assert a.ledger.value_queries == b.ledger.value_queries
    assert a.is_local_min


# --------------------------------------------------------------------------
# helpers


def test_distance_within_ignores_context():
    g = grid(5, 2)
    assert distance_within(g, (1, 1), (3, 4)) == 5
    assert distance_within(g, (1, 1), (3, 4), context=[(1, 1)]) == 5


def test_n_below_counts_strictly_smaller():
    f = {1: 3, 2: 1, 3: 3, 4: 0}.__getitem__
    assert n_below(f, 1, [1, 2, 3, 4]) == 2
    assert n_below(f, 4, [1, 2, 3]) == 0

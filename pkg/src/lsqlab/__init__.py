"""Query-complexity laboratory for local search on black-box functions
over graphs: product/grid graph families, charged query oracles,
adversarial instance generators, exact walk analyses, solvers, and a
benchmarking CLI."""

from .graphs import (
    GraphError,
    Grid,
    Product,
    ball,
    ball_size,
    boundary,
    distance,
    grid,
    hamilton_path,
    hypercube,
    is_local_min,
    line,
    neighbors,
    product,
    sphere,
)
from .oracle import (
    CostModel,
    CountingOracle,
    QueryLedger,
    min_find,
    quantum_minfind_cost,
    quantum_model,
    unit_model,
)
from .clocked import (
    PathInstance,
    eval_fx,
    generate_walk,
    hypercube_instance,
    reduce_query,
    verify_unique_local_min,
)
from .gridwalks import (
    BlockThreadedInstance,
    GridWalkConfig,
    TwoDWalkInstance,
    block_threaded_walk,
    grid_walk_integer,
    reduce_query_block,
    walk2d_improved,
)
from .analysis import (
    BudgetError,
    bound_estimate,
    line_walk_dp,
    parity_closed_form,
    parity_dp,
    pt_profile,
    reflection_check,
)
from .solvers import ALGORITHMS, SolveReport, SolverConfig, solve
from .instances import load_instance, save_instance, verify_instance
from .bench import BenchConfig, run_bench

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BenchConfig",
    "BlockThreadedInstance",
    "BudgetError",
    "CostModel",
    "CountingOracle",
    "GraphError",
    "Grid",
    "GridWalkConfig",
    "PathInstance",
    "Product",
    "QueryLedger",
    "SolveReport",
    "SolverConfig",
    "TwoDWalkInstance",
    "ball",
    "ball_size",
    "block_threaded_walk",
    "bound_estimate",
    "boundary",
    "distance",
    "eval_fx",
    "generate_walk",
    "grid",
    "grid_walk_integer",
    "hamilton_path",
    "hypercube",
    "hypercube_instance",
    "is_local_min",
    "line",
    "line_walk_dp",
    "load_instance",
    "min_find",
    "neighbors",
    "parity_closed_form",
    "parity_dp",
    "product",
    "pt_profile",
    "quantum_minfind_cost",
    "quantum_model",
    "reduce_query",
    "reduce_query_block",
    "reflection_check",
    "run_bench",
    "save_instance",
    "solve",
    "sphere",
    "unit_model",
    "verify_instance",
    "verify_unique_local_min",
    "walk2d_improved",
]

"""Argument strength in weighted bipolar argumentation graphs.

Continuous (ODE) semantics integrated with Euler or RK4, an exact linear-time
pass for acyclic graphs, a plain-text graph format, generators and a
benchmark runner.
"""
__version__ = "0.1.0"

from .acyclic import CyclicBagError, TopologicalOrder, acyclic_equilibrium, topological_order
from .bag import (
    Argument,
    Bag,
    BagError,
    BagParseError,
    fixture,
    load_bag,
    parse_bag,
    serialize_bag,
    structurally_equal,
    weight_from_counts,
)
from .generator import GenSpec, cycle_k, generate_benchmark, random_bag
from .semantics import MODELS, SemanticsModel, get_model
from .solver import (
    ConvergenceReport,
    SolverConfig,
    SolverError,
    SolverResult,
    StateRangeError,
    euler_step,
    fixed_point_residual,
    integrate,
    integrate_with_refinement,
    rk4_step,
    solve,
)

"""Exact topological entropy of automorphisms of concrete tdlc abelian groups.

The local entropy ``H(φ, U)`` is computed two independent ways (as a limit of
cotrajectory index ratios and through a limit-free index formula) and checked
against closed-form oracles; a seeded suite verifies the standard entropy laws.
"""

from .engine import (
    EntropyReport,
    GlobalEntropy,
    ScaleEstimate,
    TraceRow,
    cotrajectory,
    entropy_global,
    entropy_local,
    entropy_local_corollary,
    entropy_local_limit,
    entropy_local_limitfree,
    local_entropy,
    scale_estimate,
    trace_rows,
)
from .errors import (
    CrossCheckMismatch,
    EmptyCandidates,
    EntropyError,
    InvalidInstance,
    MonotonicityViolation,
    NotStabilized,
)
from .exact import EntropyValue, Factored
from .finite_abelian import FinAbGroup, FiniteAutomorphism, FiniteUniverse
from .instances import Instance, instance_from_json, load_instance
from .lattice import Lattice, hnf_normalize, lattice_index, lattice_intersect, lattice_sum, standard_lattice
from .padic import MatrixAutomorphism, PAdicUniverse, padic_universe
from .shift import CylinderSubgroup, ShiftAutomorphism, ShiftUniverse, shift_universe
from .subquotients import invariant_subquotient, quotient_by_compact_factor
from .universe import Automorphism, ProductUniverse, Universe, modulus, product_automorphism, product_universe
from .verify import verify_properties

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

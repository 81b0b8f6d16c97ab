"""Expected one-way neighbor-discovery times, their harmonic lower bound,
and the averaging argument that connects the two."""

__version__ = "0.1.0"

from .averaging import (
    ConvergenceTrace,
    SweepMatrix,
    averaged_expected_time,
    build_omega,
    build_sweep,
    is_doubly_stochastic,
    iterate_average,
    pair_average,
)
from .bounds import BoundReport, harmonic_number, lower_bound
from .convexity import DecompositionReport, f_second_derivative, f_term, verify_decomposition, z_value
from .core import MAX_EXACT_N, NeighborPair, NetworkTopology, ProbabilityVector, TimeModel, validate
from .errors import (
    BadPair,
    BlockOutOfRange,
    DiscoveryError,
    EmptyVector,
    NoConvergence,
    NonFinite,
    NotSquare,
    OutOfRange,
    SlotCapExceeded,
    TooFewReps,
    TooManyNeighbors,
    ValidationError,
)
from .expectation import (
    ExpectationReport,
    Method,
    expected_discovery_time,
    expected_time_quadrature,
    slotted_expected_time,
)
from .simulator import SimulationReport, simulate_discovery

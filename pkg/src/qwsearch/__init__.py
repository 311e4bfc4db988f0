"""Spatial search by continuous-time quantum walk on complete bipartite graphs.

The package compares the two standard walk generators, the graph
Laplacian and the adjacency matrix, on the search problem with multiple
marked vertices: exact numerical evolution on one side, closed-form
critical rates, runtimes and final states on the other.
"""

from .graphs import (
    BipartiteInstance,
    HermitianOperator,
    MarkedSet,
    build_adjacency,
    build_degree,
    build_laplacian,
    oracle_projector,
)
from .predictions import (
    EigenpairReport,
    Faster,
    QuadratureError,
    SearchRegime,
    SpeedVerdict,
    StationarityReport,
    WalkPrediction,
    adaptive_simpson,
    analytic_runtimes,
    complement_stationarity,
    expected_repetitions_adjacency,
    expected_repetitions_laplacian,
    faster_walk,
    harmonic_number,
    predict,
    uniform_start_success_bound,
    verify_eigenpairs,
)
from .spectral import (
    EigenSystem,
    EvolutionSeries,
    SpectralError,
    diagonalize,
    evolve,
    probability_series,
    success_probability,
)
from .subspace import (
    ReducedState,
    WalkKind,
    balanced_complement,
    balanced_state,
    basis_labels,
    basis_state,
    full_search_hamiltonian,
    lift,
    project,
    reduced_adjacency,
    reduced_degree,
    search_hamiltonian,
    uniform_state,
)
from .sweeps import (
    DegenerateRegimeError,
    DetuningSweep,
    OverlapCurve,
    PeakResult,
    critical_gamma_search,
    detuning_sweep,
    find_peak,
    initial_state,
    overlap_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteInstance",
    "DegenerateRegimeError",
    "DetuningSweep",
    "EigenSystem",
    "EigenpairReport",
    "EvolutionSeries",
    "Faster",
    "HermitianOperator",
    "MarkedSet",
    "OverlapCurve",
    "PeakResult",
    "QuadratureError",
    "ReducedState",
    "SearchRegime",
    "SpectralError",
    "SpeedVerdict",
    "StationarityReport",
    "WalkKind",
    "WalkPrediction",
    "adaptive_simpson",
    "analytic_runtimes",
    "balanced_complement",
    "balanced_state",
    "basis_labels",
    "basis_state",
    "build_adjacency",
    "build_degree",
    "build_laplacian",
    "complement_stationarity",
    "critical_gamma_search",
    "detuning_sweep",
    "diagonalize",
    "evolve",
    "expected_repetitions_adjacency",
    "expected_repetitions_laplacian",
    "faster_walk",
    "find_peak",
    "full_search_hamiltonian",
    "harmonic_number",
    "initial_state",
    "lift",
    "oracle_projector",
    "overlap_sweep",
    "predict",
    "probability_series",
    "project",
    "reduced_adjacency",
    "reduced_degree",
    "search_hamiltonian",
    "success_probability",
    "uniform_start_success_bound",
    "uniform_state",
    "verify_eigenpairs",
]

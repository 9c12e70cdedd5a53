"""Stabilizer-circuit Monte Carlo engine for localizable-entanglement
diagnostics of measurement-induced phase transitions in monitored
brickwall Clifford dynamics."""

from .backend import BACKEND
from .tableau import PauliString, StabilizerTableau
from .cliffords import CliffordTwoQubit, GROUP_ORDER, sample_two_qubit_clifford
from .graphstate import (
    Graph,
    LocalCorrections,
    connected_components,
    delete_vertex,
    local_complement,
    measure_pauli,
    measure_x_graph,
    measure_y_graph,
    measure_z_graph,
    tableau_to_graph,
    to_dot,
)
from .le import MeasurementPlan, le_pair, le_protocol, le_ref
from .circuit import (
    CircuitConfig,
    RealizationOutput,
    run,
    run_realization,
    run_two_ancilla,
    run_with_reference,
)
from .observables import (
    EnsembleEstimate,
    FitResult,
    RunningStat,
    concurrence,
    correlation_function,
    correlation_profile,
    find_crossing,
    fit_correlation_length,
    fit_nu,
    order_parameter_R,
)
from .sweep import SweepSpec, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PauliString",
    "StabilizerTableau",
    "CliffordTwoQubit",
    "GROUP_ORDER",
    "sample_two_qubit_clifford",
    "Graph",
    "LocalCorrections",
    "connected_components",
    "delete_vertex",
    "local_complement",
    "measure_pauli",
    "measure_x_graph",
    "measure_y_graph",
    "measure_z_graph",
    "tableau_to_graph",
    "to_dot",
    "MeasurementPlan",
    "le_pair",
    "le_protocol",
    "le_ref",
    "CircuitConfig",
    "RealizationOutput",
    "run",
    "run_realization",
    "run_with_reference",
    "run_two_ancilla",
    "EnsembleEstimate",
    "FitResult",
    "RunningStat",
    "SweepSpec",
    "run_sweep",
    "concurrence",
    "correlation_function",
    "correlation_profile",
    "find_crossing",
    "fit_correlation_length",
    "fit_nu",
    "order_parameter_R",
    "__version__",
]

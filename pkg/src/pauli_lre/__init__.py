"""Fast linear-regression state tomography from Pauli measurement counts."""

from .records import MeasurementRecord, RecordFormatError, read_record, write_record
from .pipeline import (
    ExactFrequencies,
    ReconstructionResult,
    project_spectrum_to_simplex,
    reconstruct,
    step_one_least_squares,
    step_three_project,
    step_two_assemble,
)
from .simulate import (
    StateDescriptor,
    dense_matrix,
    dense_to_theta,
    exact_probabilities,
    exact_record,
    parse_state,
    sample_counts,
    theta_to_probabilities,
)
from .metrics import (
    ErrorReport,
    evaluate_errors,
    fidelity,
    hs_squared_distance,
    predicted_infidelity_max_mixed,
    predicted_mse_dense,
    predicted_mse_max_mixed,
)
from .statefile import read_state, write_state

__version__ = "0.1.0"

__all__ = [
    "ErrorReport",
    "ExactFrequencies",
    "MeasurementRecord",
    "ReconstructionResult",
    "RecordFormatError",
    "StateDescriptor",
    "dense_matrix",
    "dense_to_theta",
    "evaluate_errors",
    "exact_probabilities",
    "exact_record",
    "fidelity",
    "hs_squared_distance",
    "parse_state",
    "predicted_infidelity_max_mixed",
    "predicted_mse_dense",
    "predicted_mse_max_mixed",
    "project_spectrum_to_simplex",
    "read_record",
    "read_state",
    "reconstruct",
    "sample_counts",
    "step_one_least_squares",
    "step_three_project",
    "step_two_assemble",
    "theta_to_probabilities",
    "write_record",
    "write_state",
]

"""Quantum-memory-assisted entropic uncertainty of a qutrit-qubit pair whose
qubit couples to a conformal scalar field in de Sitter alpha-vacua."""

from .bath import (
    BUNCH_DAVIES,
    BathCoefficients,
    BathParams,
    bath_coefficients,
    gibbons_hawking_temperature,
    power_spectrum,
)
from .dynamics import (
    EvolutionConfig,
    Trajectory,
    equilibrium_reduced_v,
    equilibrium_state,
    equilibrium_time,
    evolve_closed_form,
    evolve_numeric,
    initial_state,
    kossakowski_matrix,
    lindblad_rhs,
    thermal_state_v,
    weak_measurement_reversal,
)
from .errors import DegeneratePostSelectionError, DomainError, IntegrationError, ValidationError
from .measures import (
    SIGMA_X,
    SIGMA_Z,
    Observable,
    UncertaintyReport,
    conditional_entropy,
    entropic_bound,
    entropic_uncertainty,
    measure_report,
    mixedness,
    mixedness_closed_form,
    negativity,
    overlap_c,
    post_measurement_state,
)

__version__ = "0.1.0"

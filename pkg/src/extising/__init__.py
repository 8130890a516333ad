"""Extended quantum Ising chain: free-fermion spectrum, longitudinal-field
perturbation theory, an exact-diagonalisation oracle and restricted Exact
Cover 3 simulations."""

__version__ = "0.1.0"

from .chain import ChainSpec, CouplingProfile, ProfileKind  # noqa: E402
from .errors import *  # noqa: E402,F401,F403
from .spectrum import (  # noqa: E402
    SpectrumResult,
    eigenvector_components,
    gap_closed_form,
    lambda_k,
    min_gap_at_criticality,
    momentum_indices,
    spectrum,
)
from .perturb import (  # noqa: E402
    FieldCoefficients,
    PerturbedGapReport,
    field_coefficients,
    fourth_order_ground,
    gap_correction,
    inverse_components,
    min_gap_with_field,
    second_order_excited,
    second_order_ground,
    validity_check,
)

__all__ = [
    "ChainSpec", "CouplingProfile", "ProfileKind", "SpectrumResult", "eigenvector_components",
    "gap_closed_form", "lambda_k", "min_gap_at_criticality", "momentum_indices", "spectrum",
    "FieldCoefficients", "PerturbedGapReport", "field_coefficients", "fourth_order_ground",
    "gap_correction", "inverse_components", "min_gap_with_field", "second_order_excited",
    "second_order_ground", "validity_check",
]

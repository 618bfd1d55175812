"""Truncated multi-spin-boson models with rotating-wave coupling.

The package assembles block-tridiagonal Hamiltonians over excitation
sectors, computes their resolvents through a sector-recursive triangular
factorization, cross-checks every result against direct inversion, and
measures norm-resolvent stability under ultraviolet-cutoff families of
form factors.
"""

from .errors import ConfigError, NumericalError, StructureError
from .field import (
    CutoffFamily,
    DispersionGrid,
    FormFactor,
    GridReport,
    cutoff_member,
    scale_norm,
    truncate_form_factor,
    validate_grid,
)
from .fock import (
    FockBasis,
    annihilation,
    creation,
    enumerate_basis,
    fock_scale_norm,
    number_diagonal,
    number_operator,
)
from .spin import (
    SpinBasis,
    SpinHamiltonian,
    SpinParams,
    build_spin_hamiltonian,
    decompose_blocks,
    excitation_number,
    spin_basis,
)
from .model import (
    BlockedHamiltonian,
    ModelSpec,
    StructureReport,
    assemble,
    total_excitation_operator,
    verify_structure,
)
from .propagators import (
    MIN_IMAG_PART,
    PropagatorChain,
    ResolventFactors,
    domain_lift,
    implicit_domain_residual,
    propagator_chain,
    resolvent_apply,
    resolvent_direct,
    resolvent_factors,
    resolvent_lu,
    second_resolvent_residuals,
    spectral_point,
)
from .experiments import (
    CSV_COLUMNS,
    DEFAULT_TOLERANCES,
    StudyConfig,
    operator_norm,
    parse_config,
    run_convergence,
    run_verification,
    summarize_convergence,
    summarize_verification,
    verification_report,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "NumericalError", "StructureError",
    "CutoffFamily", "DispersionGrid", "FormFactor", "GridReport",
    "cutoff_member", "scale_norm", "truncate_form_factor", "validate_grid",
    "FockBasis", "annihilation", "creation", "enumerate_basis",
    "fock_scale_norm", "number_diagonal", "number_operator",
    "SpinBasis", "SpinHamiltonian", "SpinParams", "build_spin_hamiltonian",
    "decompose_blocks", "excitation_number", "spin_basis",
    "BlockedHamiltonian", "ModelSpec", "StructureReport", "assemble",
    "total_excitation_operator", "verify_structure",
    "MIN_IMAG_PART", "PropagatorChain", "ResolventFactors", "domain_lift",
    "implicit_domain_residual", "propagator_chain", "resolvent_apply",
    "resolvent_direct", "resolvent_factors", "resolvent_lu",
    "second_resolvent_residuals", "spectral_point",
    "CSV_COLUMNS", "DEFAULT_TOLERANCES", "StudyConfig", "operator_norm",
    "parse_config", "run_convergence", "run_verification",
    "summarize_convergence", "summarize_verification", "verification_report",
    "__version__",
]

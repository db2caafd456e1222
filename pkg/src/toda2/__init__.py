"""Numerical laboratory for the 2-Toda lattice on graded Lie algebras.

Builds matrix Lie algebras with a principal grading, the splitting R-matrix
R = P₊ − P₋ and its pair extension ℛ on 𝔤×𝔤, the linear and quadratic
Poisson brackets, the conserved spectral-pencil family, Lax flows, and the
classical Toda reduction — together with check batteries for every claimed
identity at small rank.
"""
from .algebra import (
    AlgebraError,
    AlgebraSpec,
    AlgebraValidationError,
    Element,
    bracket,
    build_gl,
    build_sl,
    form,
    load_spec,
    mult,
    project,
    save_spec,
    spec_to_document,
    validate_spec,
    with_rescaled_basis,
)
from .rmatrix import (
    PairPoint,
    RMatrixConfig,
    check_mcybe,
    decompose_pair,
    form2,
    pair_bracket,
    r_apply,
    rr_apply,
    r_bracket,
    rr_bracket,
)
from .poisson import (
    CapabilityError,
    PhaseSpace,
    PreconditionError,
    ScalarFunction,
    gradient2,
    hamiltonian_field,
    linear_bracket,
    phase_full,
    phase_tp,
    poisson_matrix,
    psi1,
    quadratic_bracket,
    rank_at,
    rank_sweep,
    check_morphism_psi1,
)
from .invariants import (
    PencilExpansion,
    RaisData,
    expand_pencil,
    family,
    family_labels,
    independence_rank,
    pencil_pullback,
    rais_vectors,
    trace_invariant,
)
from .flows import (
    FlowConfig,
    Trajectory,
    field_linear_pencil,
    field_quadratic,
    field_s,
    field_t,
    flow_commutation,
    integrate,
    pencil_eigenvalue_drift,
    trajectory_to_csv,
)
from .toda import (
    TodaSpace,
    check_binomial_identity,
    check_poisson_iso,
    embed_phi,
    field_toda,
    integrate_toda,
    toda_space,
    toda_suite,
)
from .reports import CheckReport, all_pass, emit_report
from .checks import BATTERY_NAMES, cartan_block, expected_rank, run_battery

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraSpec",
    "AlgebraValidationError",
    "Element",
    "bracket",
    "build_gl",
    "build_sl",
    "form",
    "load_spec",
    "mult",
    "project",
    "save_spec",
    "spec_to_document",
    "validate_spec",
    "with_rescaled_basis",
    "PairPoint",
    "RMatrixConfig",
    "check_mcybe",
    "decompose_pair",
    "form2",
    "pair_bracket",
    "r_apply",
    "rr_apply",
    "r_bracket",
    "rr_bracket",
    "CapabilityError",
    "PhaseSpace",
    "PreconditionError",
    "ScalarFunction",
    "gradient2",
    "hamiltonian_field",
    "linear_bracket",
    "phase_full",
    "phase_tp",
    "poisson_matrix",
    "psi1",
    "quadratic_bracket",
    "rank_at",
    "rank_sweep",
    "check_morphism_psi1",
    "PencilExpansion",
    "RaisData",
    "expand_pencil",
    "family",
    "family_labels",
    "independence_rank",
    "pencil_pullback",
    "rais_vectors",
    "trace_invariant",
    "FlowConfig",
    "Trajectory",
    "field_linear_pencil",
    "field_quadratic",
    "field_s",
    "field_t",
    "flow_commutation",
    "integrate",
    "pencil_eigenvalue_drift",
    "trajectory_to_csv",
    "TodaSpace",
    "check_binomial_identity",
    "check_poisson_iso",
    "embed_phi",
    "field_toda",
    "integrate_toda",
    "toda_space",
    "toda_suite",
    "CheckReport",
    "all_pass",
    "emit_report",
    "BATTERY_NAMES",
    "cartan_block",
    "expected_rank",
    "run_battery",
]

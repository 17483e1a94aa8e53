"""Time-reversal symmetry and Kramers degeneracy in truncated Pauli-Fierz models."""

__version__ = "0.1.0"

from .fock import (  # noqa: E402
    DimensionCapError,
    FockBasis,
    Mode,
    ModeSet,
    build_modes,
    enumerate_basis,
    read_kpoints,
)
from .operators import (  # noqa: E402
    FieldOperators,
    GridSpec,
    HermitianOperator,
    SpinBlockSpec,
    build_field_operators,
    build_HN_toy,
    build_HP,
    build_HPF_grid,
    build_spin_block,
    export_triplets,
    load_triplets,
)
from .semigroup import (  # noqa: E402
    ExpNegT,
    IndicatorBelow,
    ResolventShift,
    apply_function,
    hiroshima_spohn_check,
    jreal_generalization_check,
    theta_function_commutes,
    vacuum_expectation_check,
)
from .spectral import ConvergenceError, cluster, diagonalize, kramers_report  # noqa: E402
from .symmetry import (  # noqa: E402
    AntiunitaryOperator,
    Involution,
    algebra_closure_test,
    check_commutes,
    is_reality_preserving,
    make_theta,
    symmetry_breaking_probe,
    theta_for,
)

__all__ = [
    "algebra_closure_test",
    "AntiunitaryOperator",
    "apply_function",
    "build_field_operators",
    "build_HN_toy",
    "build_HP",
    "build_HPF_grid",
    "build_modes",
    "build_spin_block",
    "check_commutes",
    "cluster",
    "ConvergenceError",
    "diagonalize",
    "DimensionCapError",
    "enumerate_basis",
    "ExpNegT",
    "export_triplets",
    "FieldOperators",
    "FockBasis",
    "GridSpec",
    "HermitianOperator",
    "hiroshima_spohn_check",
    "IndicatorBelow",
    "Involution",
    "is_reality_preserving",
    "jreal_generalization_check",
    "kramers_report",
    "load_triplets",
    "make_theta",
    "Mode",
    "ModeSet",
    "read_kpoints",
    "ResolventShift",
    "SpinBlockSpec",
    "symmetry_breaking_probe",
    "theta_for",
    "theta_function_commutes",
    "vacuum_expectation_check",
]

"""Spectral geometry on products of compact Heisenberg quotients.

The library enumerates the joint spectrum of the sub-Laplacians on
H(1)^m / Gamma^m, builds exact eigenfunctions (theta-summed Landau modes and
torus plane waves), disintegrates their microlocal mass over cones of flow
directions, and measures how eigenfunction ladders approach their limiting
measures.  The ``heisfan`` CLI drives the same workflows from the shell and
writes deterministic CSV/JSON artifacts with companion figures.
"""

from .cones import (
    ConeCell,
    ConePartition,
    DepthOverflowError,
    DisintegrationReport,
    cone_masses,
    limit_histogram,
    refinement_check,
    split_by_energy_ratio,
)
from .config import ConfigError, ExperimentConfig
from .eigenfunctions import (
    GridAxis,
    GridField,
    MixtureAtom,
    MixtureComponent,
    QuotientEigenfunction,
    ZeroFunctionError,
    constant_function,
    evaluation_grid,
    line_sequence,
    localized_state,
    mixture,
    prescribed_limit_sequence,
    single_mode,
    tensor,
    write_grid_csv,
    write_grid_manifest,
)
from .geometry import (
    SQRT_2PI,
    Z_PERIOD,
    FullCovector,
    GroupElement,
    LatticeElement,
    ProductPoint,
    SigmaCovector,
    SimplexPoint,
    flow_hamiltonian,
    flow_translate,
    group_inv,
    group_mul,
    principal_symbol,
    reduce_to_fundamental,
)
from .hermite import DegreeOverflowError, HermiteEvaluator
from .modes import FourierMode, LandauMode, mode_branch_key, mode_eigenvalue
from .pairing import QuadratureError, full_overlap, xy_overlap
from .quantum_limits import (
    BallMass,
    DifferenceLine,
    EmpiricalReport,
    FlowInvariance,
    PairingValue,
    Prediction,
    PredictionResult,
    TestFunction,
    TransverseDefect,
    UniformMarginal,
    base_marginal,
    convergence_report,
    cos_xy,
    cos_z,
    cos_z_difference,
    default_dictionary,
    frequency_direction,
    invariance_defect,
    joint_pairing,
    monomial_test,
    pair,
    sin_xy,
    sin_z,
    sin_z_difference,
    z_frequency_distribution,
)
from .spectrum import (
    AlignmentError,
    CutoffTooLargeError,
    FanPoint,
    Fourier,
    HTypeEntry,
    JointLabel,
    Landau,
    SpectrumEntry,
    SpectrumTable,
    align_equal_eigenvalue,
    density_fraction,
    fan_points,
    htype_spectrum,
    match_equal_eigenvalues,
    product_spectrum,
    single_copy_multiplicities_arithmetic,
    single_copy_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "BallMass",
    "ConeCell",
    "ConePartition",
    "ConfigError",
    "CutoffTooLargeError",
    "DegreeOverflowError",
    "DepthOverflowError",
    "DifferenceLine",
    "DisintegrationReport",
    "EmpiricalReport",
    "ExperimentConfig",
    "FanPoint",
    "FlowInvariance",
    "Fourier",
    "FourierMode",
    "FullCovector",
    "GridAxis",
    "GridField",
    "GroupElement",
    "HTypeEntry",
    "HermiteEvaluator",
    "JointLabel",
    "Landau",
    "LandauMode",
    "LatticeElement",
    "MixtureAtom",
    "MixtureComponent",
    "PairingValue",
    "Prediction",
    "PredictionResult",
    "ProductPoint",
    "QuadratureError",
    "QuotientEigenfunction",
    "SQRT_2PI",
    "SigmaCovector",
    "SimplexPoint",
    "SpectrumEntry",
    "SpectrumTable",
    "TestFunction",
    "TransverseDefect",
    "UniformMarginal",
    "ZeroFunctionError",
    "Z_PERIOD",
    "align_equal_eigenvalue",
    "base_marginal",
    "cone_masses",
    "constant_function",
    "convergence_report",
    "cos_xy",
    "cos_z",
    "cos_z_difference",
    "default_dictionary",
    "density_fraction",
    "evaluation_grid",
    "fan_points",
    "flow_hamiltonian",
    "flow_translate",
    "frequency_direction",
    "full_overlap",
    "group_inv",
    "group_mul",
    "htype_spectrum",
    "invariance_defect",
    "joint_pairing",
    "limit_histogram",
    "line_sequence",
    "localized_state",
    "match_equal_eigenvalues",
    "mixture",
    "mode_branch_key",
    "mode_eigenvalue",
    "monomial_test",
    "pair",
    "prescribed_limit_sequence",
    "principal_symbol",
    "product_spectrum",
    "reduce_to_fundamental",
    "refinement_check",
    "single_copy_multiplicities_arithmetic",
    "single_copy_spectrum",
    "single_mode",
    "sin_xy",
    "sin_z",
    "sin_z_difference",
    "split_by_energy_ratio",
    "tensor",
    "write_grid_csv",
    "write_grid_manifest",
    "xy_overlap",
    "z_frequency_distribution",
]

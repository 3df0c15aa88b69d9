"""Exact genus-zero curve counts on projective spaces from mirror periods.

The pipeline: a hypergeometric-type base period series, a family of column
vectors spanning its deformation, a normalization solve against a fixed
opposite subspace, flat coordinates read off the solution, connection
structure constants, and a potential whose coefficients are the counts.
An independent associativity-based reconstruction provides the oracle the
results are compared against. All arithmetic is exact rational.
"""

from ._coeff import BACKEND, Q, rat, rat_str
from ._kernel import IMPL as KERNEL_IMPL
from .frobenius import (
    ConnectionData,
    connection_from_period,
    euler_checks,
    euler_field,
    frame_invariance_test,
    identity_check,
    lower_index,
    potential_from_tensor,
    sigma_extract,
    verify_flatness,
    wdvv_check,
)
from .gw import (
    GWTable,
    Potential,
    SigmaTable,
    classical_cubic,
    compare,
    degree_for,
    dimension_weight,
    kontsevich_cp2,
    oracle_potential,
    reconstruct,
    touch_multidegrees,
)
from .normalization import (
    NormalizedPeriod,
    S0Grading,
    extract_mirror_coordinates,
    normalization_check,
    project,
    reparametrize,
    solve_normalized_period,
    transversality_check,
)
from .periods import (
    ThetaFamily,
    default_depth,
    default_window,
    f_periods,
    griffiths_check,
    hbar_derivative,
    mult_by_f,
    pf_check,
    pf_operator,
    s_coefficients,
    theta_columns,
    xi_series,
)
from .pipeline import (
    CHECK_GROUPS,
    ConfigError,
    PipelineResult,
    RunConfig,
    oracle_depth_for,
    run_pipeline,
)
from .series import (
    AlphaPoly,
    CoordMap,
    HVec,
    SubstitutionTable,
    TPoly,
    TruncationMismatchError,
    WindowOverflowError,
    alpha_inverse,
    alpha_mul,
    alpha_power,
    invert_coord_map,
    substitute,
    tpoly_exp,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaPoly",
    "BACKEND",
    "CHECK_GROUPS",
    "ConfigError",
    "ConnectionData",
    "CoordMap",
    "GWTable",
    "HVec",
    "KERNEL_IMPL",
    "NormalizedPeriod",
    "PipelineResult",
    "Potential",
    "Q",
    "RunConfig",
    "S0Grading",
    "SigmaTable",
    "SubstitutionTable",
    "ThetaFamily",
    "TPoly",
    "TruncationMismatchError",
    "WindowOverflowError",
    "alpha_inverse",
    "alpha_mul",
    "alpha_power",
    "classical_cubic",
    "compare",
    "connection_from_period",
    "default_depth",
    "default_window",
    "degree_for",
    "dimension_weight",
    "euler_checks",
    "euler_field",
    "extract_mirror_coordinates",
    "f_periods",
    "frame_invariance_test",
    "griffiths_check",
    "hbar_derivative",
    "identity_check",
    "invert_coord_map",
    "kontsevich_cp2",
    "lower_index",
    "mult_by_f",
    "normalization_check",
    "oracle_depth_for",
    "oracle_potential",
    "pf_check",
    "pf_operator",
    "potential_from_tensor",
    "project",
    "rat",
    "rat_str",
    "reconstruct",
    "reparametrize",
    "run_pipeline",
    "s_coefficients",
    "sigma_extract",
    "solve_normalized_period",
    "substitute",
    "theta_columns",
    "touch_multidegrees",
    "tpoly_exp",
    "transversality_check",
    "verify_flatness",
    "wdvv_check",
    "xi_series",
]

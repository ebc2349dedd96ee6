"""Guaranteed eigenvalue bounds for symmetric saddle-point matrices
[[A, B^T], [B, 0]] with singular positive semidefinite leading blocks.

The package computes certified lower bounds on the positive eigenvalues
through augmentation (A + gamma B^T B) and through the principal angles
between range(A) and range(B^T), and checks every bound against a dense
eigenvalue oracle.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    MatrixWeight,
    SaddleProblem,
    ScalarWeight,
    SpectralSummary,
    agamma_bound,
    agamma_lower_bound,
    applicable_bounds,
    assemble_augmented,
    general_rank_bound,
    general_rank_optimal_gamma,
    kernel_angle_bound,
    lowest_rank_bound,
    optimal_gamma,
    rho_from_angles,
    rusten_winther,
    spectral_split,
    spectral_summary,
    wbound,
)
from .errors import (
    AugmentedBlockSingularError,
    ConvergenceError,
    DegenerateSplitWarning,
    DimensionMismatchError,
    EmptySubspaceError,
    GenerationFailedError,
    InfeasibleDimensionsError,
    NonFiniteError,
    NotPositiveSemidefiniteError,
    ParameterOutOfRangeError,
    ParseError,
    ProblemValidationError,
    RankAssumptionError,
    RankDeficientError,
    RankTooLowError,
    SaddleBoundsError,
    SingularAugmentedError,
    SingularKError,
    SizeCapError,
    StructureError,
    ZeroAngleError,
)
from .harness import (
    CertificationOutcome,
    OracleResult,
    SweepResult,
    SweepRow,
    assemble_K,
    augmented_condition,
    certify,
    containment_violations,
    gamma_sweep,
    inverse_identity_residual,
    log_gamma_grid,
    oracle,
    ptp_spectrum_deviation,
)
from .linalg import (
    EigDecomposition,
    PrincipalAngles,
    RectMatrix,
    SubspaceBasis,
    SvdDecomposition,
    SymmetricMatrix,
    default_rank_tol,
    kernel_basis,
    kernel_basis_rect,
    numerical_rank,
    principal_angles,
    range_basis,
    row_space_basis,
    svd,
    sym_eig,
)
from .mmio import read_matrix_market, write_matrix_market
from .problems import (
    FAMILIES,
    GeneratorSpec,
    gen_ipm_like,
    gen_prescribed_angles,
    gen_random_lowest_rank,
    gen_remark,
    gen_toy,
    generate_problem,
)
from .reporting import ProblemFileSet, RunConfig, read_problem, report_envelope, write_report

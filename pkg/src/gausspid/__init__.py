"""Partial information decomposition for jointly Gaussian random vectors.

The package decomposes I(M;(X,Y)) into unique, redundant and synergistic
atoms two ways: the closed-form MMI decomposition, and a deficiency-based
decomposition computed through a convex surrogate program.  A Blackwell
sufficiency test decides when the two coincide, and a Wishart sampling
harness reproduces the accompanying empirical study at desk scale.
"""

__version__ = "0.1.0"

from .blackwell import (
    X_OVER_Y,
    Y_OVER_X,
    DegradednessReport,
    check_degraded,
    degradation_witness,
)
from .core import (
    ChannelForm,
    GaussianSystem,
    WhitenedChannels,
    channel_form,
    kl_mvn,
    mutual_information,
    validate_system,
    whiten,
)
from .deficiency import (
    X_FROM_Y,
    Y_FROM_X,
    DeficiencyResult,
    ProgramSpec,
    SolverConfig,
    approximate_deficiency,
    build_program,
    evaluate_delta_hat,
    evaluate_reduced_objective,
    sigma_hat,
    solve_program,
)
from .experiments import (
    ExperimentRecord,
    SchemeId,
    SummaryStats,
    read_records_csv,
    run_scheme,
    sample_dims,
    sample_wishart,
    summarize,
    write_records_csv,
)
from .mmi import PidAtoms, PidLabel, mmi_pid
from .pid import (
    DeltaHatPid,
    NormalizedAtoms,
    delta_hat_pid,
    has_unique_information,
    normalize,
    simplex_coords,
)

__all__ = [
    "ChannelForm",
    "DeficiencyResult",
    "DegradednessReport",
    "DeltaHatPid",
    "ExperimentRecord",
    "GaussianSystem",
    "NormalizedAtoms",
    "PidAtoms",
    "PidLabel",
    "ProgramSpec",
    "SchemeId",
    "SolverConfig",
    "SummaryStats",
    "WhitenedChannels",
    "X_FROM_Y",
    "X_OVER_Y",
    "Y_FROM_X",
    "Y_OVER_X",
    "approximate_deficiency",
    "build_program",
    "channel_form",
    "check_degraded",
    "degradation_witness",
    "delta_hat_pid",
    "evaluate_delta_hat",
    "evaluate_reduced_objective",
    "has_unique_information",
    "kl_mvn",
    "mmi_pid",
    "mutual_information",
    "normalize",
    "read_records_csv",
    "run_scheme",
    "sample_dims",
    "sample_wishart",
    "sigma_hat",
    "simplex_coords",
    "solve_program",
    "summarize",
    "validate_system",
    "whiten",
    "write_records_csv",
]

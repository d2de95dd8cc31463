"""Exact-arithmetic laboratory for privacy-approximation ratios of
deterministic two-party protocols."""

from .exact import QSqrt2, SQRT2, NotRationalError
from .matrix import (
    CapExceededError,
    MatrixError,
    Partition,
    Rectangle,
    Region,
    ValueMatrix,
    i_refine,
    ideal_partition,
)
from .par import (
    Distribution,
    GFunction,
    GVariant,
    ParReport,
    avg_par,
    avg_par_uniform,
    g_par,
    optimal_avg_objective_par,
    prob_mass_counterexample,
    subjective_ratio,
    worst_case_par,
)
from .problems import (
    ProblemKind,
    ProtocolKind,
    build_matrix,
    build_protocol,
    certify_fooling_set,
    decode_set,
    encode_set,
    fooling_set,
    recursive_tiling,
)
from .protocol import (
    InvalidProtocolError,
    ProtocolTree,
    Tile,
    Transcript,
    induced_tiles,
    induced_tiling,
    is_inducible,
    perfect_privacy,
    run,
)
from .formulas import (
    brute_force_pars,
    closed_form_par,
    asymptote_par,
    cross_check,
    eval_closed_form,
    eval_recurrence,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "1.0.0"

from .core import *
from .kernels import SpectralDecomposition, normalize_signs, qr_eigensolve, dense_eigensolve
from .rank_one import rank_one_eigensystem, cdc_solve
from .rank_two import (
    RankTwoProblem,
    CountStrategy,
    deflate_rank_two,
    secular_eval,
    classify_intervals,
    secular_roots,
    rank_two_vectors,
    rank_two_vectors_stable,
    rank_two_eigensystem,
    rtdc_solve,
)
from .solvers import SolverType, SOLVER_DICT, select_solver_impl, solve
from .metrics import residual_measure, orthogonality_measure, run_benchmark, flop_ratio
from .globals import FLOP_COUNTER
from .errors import (
    TridcError,
    DecoupledMatrixError,
    ParseError,
    ValidationError,
    PoleError,
    SolverError,
)

__version__ = "0.1.0"

from .problem import RankTwoProblem, BlockOrthogonal, form_rank_two
from .deflation import DeflationCase, ResolvedPair, RankTwoDeflation, deflate_rank_two
from .secular import (
    SecularEvaluation,
    RankTwoSecular,
    secular_eval,
    secular_determinant,
    eigenvalue_count,
)
from .intervals import (
    IntervalLabel,
    CountStrategy,
    IntervalClassification,
    g_signs,
    classify_intervals,
    inertia_counts,
)
from .roots import secular_roots
from .vectors import rank_two_vectors, rank_two_vectors_stable, method_two_decomposition
from .rtdc import rank_two_eigensystem, rtdc_solve
from .plotdata import PlotRow, merge_problem, secular_plot_data, format_plot_csv

__all__ = [
    "RankTwoProblem",
    "BlockOrthogonal",
    "form_rank_two",
    "DeflationCase",
    "ResolvedPair",
    "RankTwoDeflation",
    "deflate_rank_two",
    "SecularEvaluation",
    "RankTwoSecular",
    "secular_eval",
    "secular_determinant",
    "eigenvalue_count",
    "IntervalLabel",
    "CountStrategy",
    "IntervalClassification",
    "g_signs",
    "classify_intervals",
    "inertia_counts",
    "secular_roots",
    "rank_two_vectors",
    "rank_two_vectors_stable",
    "method_two_decomposition",
    "rank_two_eigensystem",
    "rtdc_solve",
    "PlotRow",
    "merge_problem",
    "secular_plot_data",
    "format_plot_csv",
]

from .problem import RankOneProblem
from .deflation import RankOneDeflation, cdc_deflate
from .secular import cdc_secular_roots, rank_one_secular_value
from .vectors import cdc_stable_vectors
from .engine import rank_one_eigensystem
from .cdc import cdc_solve

__all__ = [
    "RankOneProblem",
    "RankOneDeflation",
    "cdc_deflate",
    "cdc_secular_roots",
    "rank_one_secular_value",
    "cdc_stable_vectors",
    "rank_one_eigensystem",
    "cdc_solve",
]

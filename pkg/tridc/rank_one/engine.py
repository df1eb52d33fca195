from typing import Optional

import torch

from tridc.globals import DTYPE, FLOP_COUNTER, PHASE_DEFLATE, PHASE_SECULAR, PHASE_VECTORS
from tridc.kernels.spectral import SpectralDecomposition, sorted_decomposition
from tridc.rank_one.deflation import cdc_deflate
from tridc.rank_one.problem import RankOneProblem
from tridc.rank_one.secular import cdc_secular_roots
from tridc.rank_one.vectors import cdc_stable_vectors


def rank_one_eigensystem(p: RankOneProblem, tol: Optional[float] = None) -> SpectralDecomposition:
    """Full spectral decomposition of D + beta v v^T.

    Deflated pairs come first in the merge so that equal eigenvalues keep
    the resolved pair ahead of the secular one.
    """
    if p.n == 0:
        return SpectralDecomposition(torch.zeros(0, dtype=DTYPE), torch.zeros(0, 0, dtype=DTYPE))

    with FLOP_COUNTER.phase(PHASE_DEFLATE):
        deflation, reduced = cdc_deflate(p, tol)
    with FLOP_COUNTER.phase(PHASE_SECULAR):
        roots = cdc_secular_roots(reduced, return_offsets=True)
    with FLOP_COUNTER.phase(PHASE_VECTORS):
        secular_vectors = deflation.basis.embed(deflation.keep, cdc_stable_vectors(reduced, roots))
        resolved_vectors = deflation.resolved_vectors()

    eigenvalues = torch.cat([deflation.resolved_values, roots.values])
    vectors = torch.cat([resolved_vectors, secular_vectors], dim=1)
    return sorted_decomposition(eigenvalues, vectors)

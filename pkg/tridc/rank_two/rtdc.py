from typing import Optional

import torch

from tridc.core.matrix import SymTridiag
from tridc.core.split import default_split_three, split_three
from tridc.errors import DecoupledMatrixError
from tridc.globals import DTYPE, FLOP_COUNTER, PHASE_DECOMPOSE, PHASE_DEFLATE, PHASE_SECULAR, PHASE_VECTORS
from tridc.kernels.qr import qr_eigensolve
from tridc.kernels.spectral import SpectralDecomposition, normalize_signs, solve_decoupled
from tridc.logger import init_logger
from tridc.rank_two.deflation import deflate_rank_two
from tridc.rank_two.intervals import CountStrategy, classify_intervals
from tridc.rank_two.problem import RankTwoProblem, form_rank_two
from tridc.rank_two.roots import secular_roots
from tridc.rank_two.vectors import rank_two_vectors, rank_two_vectors_stable

logger = init_logger(__name__)


def rank_two_eigensystem(
    p: RankTwoProblem,
    stable: bool = True,
    count_strategy: CountStrategy = CountStrategy.INERTIA,
    tol: Optional[float] = None,
) -> SpectralDecomposition:
    """Spectral decomposition of D + beta1 v1 v1^T + beta2 v2 v2^T.

    Eigenvalues always come from deflation and the rank-two secular equation.
    With ``stable`` the eigenvectors come from two rank-one merges and are
    paired with the eigenvalues in ascending order; otherwise from the 2x2
    null-space formula on the reduced problem.
    """
    n = p.n
    if n == 0:
        return SpectralDecomposition(torch.zeros(0, dtype=DTYPE), torch.zeros(0, 0, dtype=DTYPE))

    with FLOP_COUNTER.phase(PHASE_DEFLATE):
        deflation = deflate_rank_two(p, tol)
    reduced = deflation.reduced
    with FLOP_COUNTER.phase(PHASE_SECULAR):
        cls = classify_intervals(reduced, count_strategy)
        roots = secular_roots(reduced, cls, return_offsets=True)

    resolved_values = deflation.resolved_values
    eigenvalues = torch.cat([resolved_values, roots.values])
    order = torch.sort(eigenvalues, stable=True).indices
    eigenvalues = eigenvalues[order]

    with FLOP_COUNTER.phase(PHASE_VECTORS):
        if stable:
            vectors = rank_two_vectors_stable(p, eigenvalues)
        else:
            secular_vectors = deflation.basis.embed(deflation.keep, rank_two_vectors(reduced, roots))
            vectors = torch.cat([deflation.resolved_vectors(), secular_vectors], dim=1)[:, order]
    return SpectralDecomposition(eigenvalues, vectors)


def rtdc_solve(
    t: SymTridiag,
    base_cutoff: int = 25,
    stable: bool = True,
    count_strategy: CountStrategy = CountStrategy.INERTIA,
) -> SpectralDecomposition:
    """Rank-two divide and conquer.

    The matrix is cut at two off-diagonal entries into three blocks of nearly
    equal order, the blocks are solved recursively and merged through the
    rank-two secular equation.

    Arguments:
        t (SymTridiag): matrix to decompose
        base_cutoff (int): orders at or below this are solved by implicit QR
        stable (bool): eigenvectors by repeated rank-one merges instead of the
            direct 2x2 formula
        count_strategy (CountStrategy): how roots per interval are counted

    Returns:
        * decomposition (SpectralDecomposition): ascending eigenvalues, vectors
    """
    assert base_cutoff >= 1, f"base_cutoff must be positive, got {base_cutoff}"
    n = t.n
    if n <= base_cutoff or n < 3:
        with FLOP_COUNTER.phase(PHASE_DECOMPOSE):
            return qr_eigensolve(t)

    def recurse(block: SymTridiag) -> SpectralDecomposition:
        return rtdc_solve(block, base_cutoff, stable, count_strategy)

    k1, k2 = default_split_three(n)
    try:
        split = split_three(t, k1, k2)
    except DecoupledMatrixError as e:
        logger.debug(f"rtdc: n={n} decouples at {e.index}")
        return solve_decoupled(t, recurse)

    with FLOP_COUNTER.phase(PHASE_DECOMPOSE):
        decs = [recurse(block) for block in (split.t1, split.t2, split.t3)]
    p, q = form_rank_two(split, *decs)
    merged = rank_two_eigensystem(p, stable, count_strategy)
    with FLOP_COUNTER.phase(PHASE_VECTORS):
        vectors = q.matmul(merged.vectors)
    return SpectralDecomposition(merged.eigenvalues, normalize_signs(vectors))

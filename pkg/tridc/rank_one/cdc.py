import torch

from tridc.core.matrix import SymTridiag
from tridc.core.split import default_split_two, split_two
from tridc.errors import DecoupledMatrixError
from tridc.globals import FLOP_COUNTER, PHASE_DECOMPOSE, PHASE_VECTORS
from tridc.kernels.qr import qr_eigensolve
from tridc.kernels.spectral import SpectralDecomposition, normalize_signs, solve_decoupled
from tridc.logger import init_logger
from tridc.rank_one.engine import rank_one_eigensystem
from tridc.rank_one.problem import RankOneProblem

logger = init_logger(__name__)


def cdc_solve(t: SymTridiag, base_cutoff: int = 25) -> SpectralDecomposition:
    """Cuppen's divide and conquer: halve at a rank-one cut, solve both halves
    recursively, merge through the rank-one secular equation.

    Arguments:
        t (SymTridiag): matrix to decompose
        base_cutoff (int): orders at or below this are solved by implicit QR

    Returns:
        * decomposition (SpectralDecomposition): ascending eigenvalues, vectors
    """
    assert base_cutoff >= 1, f"base_cutoff must be positive, got {base_cutoff}"
    n = t.n
    if n <= base_cutoff or n < 2:
        with FLOP_COUNTER.phase(PHASE_DECOMPOSE):
            return qr_eigensolve(t)

    k = default_split_two(n)
    try:
        split = split_two(t, k)
    except DecoupledMatrixError as e:
        logger.debug(f"cdc: n={n} decouples at {e.index}")
        return solve_decoupled(t, lambda block: cdc_solve(block, base_cutoff))

    with FLOP_COUNTER.phase(PHASE_DECOMPOSE):
        dec1 = cdc_solve(split.t1, base_cutoff)
        dec2 = cdc_solve(split.t2, base_cutoff)

    d = torch.cat([dec1.eigenvalues, dec2.eigenvalues])
    v = torch.cat([dec1.vectors[-1, :], dec2.vectors[0, :]])
    merged = rank_one_eigensystem(RankOneProblem(d, v, split.beta))

    with FLOP_COUNTER.phase(PHASE_VECTORS):
        top = dec1.vectors @ merged.vectors[:k]
        bottom = dec2.vectors @ merged.vectors[k:]
        FLOP_COUNTER.add_matmul(k, k, n)
        FLOP_COUNTER.add_matmul(n - k, n - k, n)
    return SpectralDecomposition(merged.eigenvalues, normalize_signs(torch.cat([top, bottom])))

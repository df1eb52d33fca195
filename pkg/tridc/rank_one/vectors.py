import torch
from einops import rearrange

from tridc.errors import InternalConsistencyError
from tridc.globals import FLOP_COUNTER
from tridc.kernels.rootfind import as_secular_roots
from tridc.rank_one.problem import RankOneProblem


def cdc_stable_vectors(p: RankOneProblem, roots) -> torch.Tensor:
    """Eigenvectors of D + beta v v^T that stay orthogonal for clustered roots.

    The computed roots are exact eigenvalues of D + beta vhat vhat^T with
    vhat_i^2 = prod_j (lambda_j - d_i) / (beta prod_{j != i} (d_j - d_i)),
    accumulated as the pairwise ratios (lambda_j - d_i) / (d_j - d_i).
    Columns are (lambda_j I - D)^{-1} vhat, normalized.

    Arguments:
        p (RankOneProblem): deflated problem, d strictly increasing
        roots (SecularRoots or tensor): its secular roots, interlacing d

    Returns:
        * vectors (Tensor): n x n, column j pairs with roots[j]
    """
    n = p.n
    roots = as_secular_roots(roots, p.d)
    assert len(roots) == n, f"{len(roots)} roots for a problem of order {n}"
    if n == 0:
        return torch.zeros(0, 0, dtype=p.d.dtype)

    # delta[i, j] = lambda_j - d_i
    delta = roots.differences(p.d)
    gaps = rearrange(p.d, "n -> 1 n") - rearrange(p.d, "n -> n 1")
    gaps.fill_diagonal_(p.beta)
    ratio = delta / gaps
    if not bool((ratio > 0).all()):
        bad = torch.nonzero(ratio <= 0)[0].tolist()
        raise InternalConsistencyError(
            f"roots do not interlace the poles: root {bad[1]} against pole {bad[0]} "
            f"(lambda={float(roots.values[bad[1]])!r}, d={float(p.d[bad[0]])!r})"
        )
    vhat = torch.sqrt(torch.prod(ratio, dim=1))
    vhat = torch.where(p.v < 0, -vhat, vhat)

    x = rearrange(vhat, "n -> n 1") / delta
    x = x / torch.linalg.vector_norm(x, dim=0, keepdim=True)
    FLOP_COUNTER.add(adds=3 * n * n, muls=2 * n * n, divs=3 * n * n, sqrts=2 * n)
    return x

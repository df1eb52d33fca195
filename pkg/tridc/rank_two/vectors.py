import torch
from einops import rearrange

from tridc.errors import DegenerateSystemError
from tridc.globals import DTYPE, EPS, FLOP_COUNTER
from tridc.kernels.rootfind import as_secular_roots
from tridc.kernels.spectral import SpectralDecomposition
from tridc.logger import init_logger
from tridc.rank_one.engine import rank_one_eigensystem
from tridc.rank_one.problem import RankOneProblem
from tridc.rank_two.problem import RankTwoProblem

logger = init_logger(__name__)


def rank_two_vectors(p: RankTwoProblem, roots) -> torch.Tensor:
    """Eigenvectors x = a u1 + b u2 with u_k = (lambda I - D)^{-1} v_k.

    (a, b) spans the null space of
    [[beta1 c1 - 1, beta1 c3], [beta2 c3, beta2 c2 - 1]], read from the row
    with the larger norm. Two roots closer than 4 eps (1 + |lambda|) form a
    double eigenvalue and get an orthonormal basis of span{u1, u2}.
    """
    roots = as_secular_roots(roots, p.d)
    n, k = p.n, len(roots)
    if k == 0:
        return torch.zeros(n, 0, dtype=DTYPE)

    delta = roots.differences(p.d)
    u1 = rearrange(p.v1, "n -> n 1") / delta
    u2 = rearrange(p.v2, "n -> n 1") / delta
    c1 = (rearrange(p.v1, "n -> n 1") * u1).sum(dim=0)
    c2 = (rearrange(p.v2, "n -> n 1") * u2).sum(dim=0)
    c3 = (rearrange(p.v1, "n -> n 1") * u2).sum(dim=0)
    FLOP_COUNTER.add(adds=4 * n * k, muls=3 * n * k, divs=2 * n * k)

    rows = torch.stack(
        [
            torch.stack([p.beta1 * c1 - 1.0, p.beta1 * c3], dim=1),
            torch.stack([p.beta2 * c3, p.beta2 * c2 - 1.0], dim=1),
        ],
        dim=1,
    )
    norms = torch.linalg.vector_norm(rows, dim=2)
    pick = torch.argmax(norms, dim=1)
    row = rows[torch.arange(k), pick]
    a, b = row[:, 1], -row[:, 0]

    values = roots.values
    x = u1 * a + u2 * b
    j = 0
    while j < k:
        lam = float(values[j])
        if j + 1 < k and abs(float(values[j + 1]) - lam) <= 4.0 * EPS * (1.0 + abs(lam)):
            basis, _ = torch.linalg.qr(torch.stack([u1[:, j], u2[:, j]], dim=1))
            x[:, j], x[:, j + 1] = basis[:, 0], basis[:, 1]
            j += 2
            continue
        scale = 1.0 + abs(p.beta1 * float(c1[j])) + abs(p.beta2 * float(c2[j])) + abs(float(c3[j])) * max(abs(p.beta1), abs(p.beta2))
        if float(norms[j, pick[j]]) <= EPS * scale:
            raise DegenerateSystemError(f"both rows of the 2x2 system vanish at lambda={lam!r}")
        j += 1
    FLOP_COUNTER.add(adds=n * k, muls=2 * n * k)
    return x / torch.linalg.vector_norm(x, dim=0, keepdim=True)


def method_two_decomposition(p: RankTwoProblem) -> SpectralDecomposition:
    """Spectral decomposition as two successive rank-one merges.

    B1 = diag(D1, D2) + beta1 v1' v1'^T = R1 L1 R1^T is solved first, then
    diag(L1, D3) + beta2 z2 z2^T = R2 L R2^T with z2 = diag(R1, I)^T v2, so the
    eigenvectors are diag(R1, I) R2. Both merges use stable vectors.
    """
    n = p.n
    k12 = n if p.blocks is None else p.blocks[0] + p.blocks[1]
    head = rank_one_eigensystem(RankOneProblem(p.d[:k12], p.v1[:k12], p.beta1))
    r1 = head.vectors
    z2 = torch.cat([r1.transpose(0, 1) @ p.v2[:k12], p.v2[k12:]])
    FLOP_COUNTER.add_matmul(k12, k12, 1)
    tail = rank_one_eigensystem(RankOneProblem(torch.cat([head.eigenvalues, p.d[k12:]]), z2, p.beta2))
    r2 = tail.vectors
    w = torch.cat([r1 @ r2[:k12], r2[k12:]])
    FLOP_COUNTER.add_matmul(k12, k12, n)
    return SpectralDecomposition(tail.eigenvalues, w)


def rank_two_vectors_stable(p: RankTwoProblem, roots=None) -> torch.Tensor:
    """Eigenvectors of the merged problem by repeated rank-one modification.

    Column j pairs with the j-th smallest eigenvalue. When ``roots`` (the full
    ascending spectrum from the rank-two path) is given, the two eigenvalue
    sets are compared and a disagreement beyond 64 n eps ||A|| is logged.
    """
    dec = method_two_decomposition(p)
    if roots is not None:
        values = torch.sort(torch.as_tensor(roots, dtype=DTYPE).reshape(-1)).values
        if values.numel() != dec.n:
            logger.warning(f"{values.numel()} eigenvalues against {dec.n} eigenvectors")
        elif dec.n:
            gap = float((values - dec.eigenvalues).abs().max())
            bound = 64.0 * dec.n * EPS * max(p.scale(), float(dec.eigenvalues.abs().max()))
            if gap > bound:
                logger.warning(f"rank-two and repeated rank-one eigenvalues differ by {gap:.3e} (bound {bound:.3e})")
    return dec.vectors
